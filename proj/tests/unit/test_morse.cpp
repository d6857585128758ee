#include <numbers>

#include <doctest.h>

#include "morsecone/errors.hpp"
#include "morsecone/morse.hpp"

using namespace morsecone;
using std::numbers::pi;

namespace {

SingularSpectrum spectrum_of(int n, std::initializer_list<double> values) {
  SingularSpectrum s;
  s.dimension = n;
  int k = 1;
  for (double v : values) {
    RadialEigenpair e;
    e.index = k++;
    e.value = v;
    s.eigenpairs.push_back(e);
  }
  return s;
}

}  // namespace

TEST_CASE("direct count and closed formula agree on synthetic spectra") {
  const auto one = spectrum_of(3, {-1.5});
  const auto ang = make_external_spectrum(3, {{0, 1}, {1.0, 2}, {3.0, 2}});
  const auto r1 = morse_index_direct(one, ang);
  CHECK(r1.m == 3);
  CHECK(r1.formula_m == 3);

  const auto two = spectrum_of(3, {-2.5, -0.5});
  const auto ang2 = make_external_spectrum(3, {{0, 1}, {1.0, 1}, {2.0, 1}});
  const auto r2 = morse_index_direct(two, ang2);
  CHECK(r2.m == 4);
  CHECK(r2.formula_m == 4);
}

TEST_CASE("empty radial spectrum gives index 0") {
  const auto none = spectrum_of(3, {});
  const auto ang = make_external_spectrum(3, {{0, 1}, {2.0, 3}});
  CHECK(morse_index_direct(none, ang).m == 0);
  CHECK(morse_index_formula(none, ang) == 0);
}

TEST_CASE("insufficient angular cutoff is an error") {
  const auto one = spectrum_of(3, {-1.5});
  const auto ang = cap_neumann_eigenvalues(3, pi / 3, 1.0);
  try {
    morse_index_direct(one, ang);
    FAIL("expected CutoffInsufficient");
  } catch (const Error& e) {
    CHECK(std::string(e.class_name()) == "CutoffInsufficient");
  }
}

TEST_CASE("near ties are reported, not counted") {
  const auto one = spectrum_of(3, {-2.0});
  const auto ang = make_external_spectrum(3, {{0, 1}, {2.0, 2}});
  const auto r = morse_index_direct(one, ang);
  CHECK(r.m == 1);
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("bubble Morse index on caps") {
  CHECK(bubble_morse(cap_neumann_eigenvalues(3, pi / 3, 3), 3) == 1);
  CHECK(bubble_morse(cap_neumann_eigenvalues(3, pi / 2, 3), 3) == 1);
  CHECK(bubble_morse(cap_neumann_eigenvalues(3, 2 * pi / 3, 3), 3) == 3);
}

TEST_CASE("count equality at N = 3, p = 3") {
  const auto a = linearized_potential(solve_lane_emden(3, 3.0));
  const double cutoff = standard_shift_cutoff(3, a);
  CHECK(cutoff > 0.0);
  CHECK(cutoff <= a.sup_norm());
  for (double t : {pi / 3, pi / 2, 2 * pi / 3}) {
    const auto ang = cap_neumann_eigenvalues(3, t, cutoff * 1.01);
    const auto c = verify_count_equality(3, a, ang);
    CHECK(c.equal());
    const auto direct = morse_index_direct(negative_singular_eigenvalues(3, a, 8), ang);
    CHECK(direct.m == direct.formula_m);
    CHECK(direct.m == c.k_hat_a);
  }
}

TEST_CASE("threshold for N = 3, theta0 = 2 pi / 3 (frozen)") {
  const auto ang = cap_neumann_eigenvalues(3, 2 * pi / 3, 2.0);
  ThresholdOptions options;
  options.jobs = 2;
  const auto t = symmetry_breaking_threshold(3, ang, 1e-4, options);
  REQUIRE(t.status == "threshold-found");
  REQUIRE(t.bracket.has_value());
  CHECK(t.bracket->sum_lo > 0.0);
  CHECK(t.bracket->sum_hi < 0.0);
  CHECK(*t.p0 == doctest::Approx(2.528145).epsilon(1e-5));
  const auto none = symmetry_breaking_threshold(3, cap_neumann_eigenvalues(3, pi / 3, 4.0), 1e-4);
  CHECK(none.status == "no-breaking-detected");
}

TEST_CASE("separated eigenfunction reconstruction") {
  const auto rad = negative_singular_eigenvalues(3, linearized_potential(solve_lane_emden(3, 3.0)), 2);
  const double lambda = angular_branch_eigenvalue(3, 1, 2 * pi / 3, 0);
  const auto mode = angular_mode(3, 1, 2 * pi / 3, lambda);
  CHECK(reconstruction_residual(rad.eigenpairs.front(), mode) < 1e-6);
}

TEST_CASE("external sphere prefixes") {
  // S^3: ell(ell + 2) = 0, 3, 8 with multiplicities 1, 4, 9; nothing below N - 1 = 3.
  CHECK(bubble_morse(make_external_spectrum(4, {{0, 1}, {3, 4}, {8, 9}}), 4) == 1);
  // The S^2 list ell(ell + 1) read at N = 4 has lambda = 2 < 3 three times.
  CHECK(bubble_morse(make_external_spectrum(4, {{0, 1}, {2, 3}, {6, 5}}), 4) == 4);
}
