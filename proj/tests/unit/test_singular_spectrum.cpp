#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "morsecone/errors.hpp"
#include "morsecone/singular_spectrum.hpp"

using namespace morsecone;

TEST_CASE("indicial exponent solves its quadratic") {
  for (double l : {-2.0, -0.5, 0.0, 0.2}) {
    const auto d = indicial_exponent(3, l);
    CHECK(d.beta_plus * d.beta_plus + d.beta_plus + l == doctest::Approx(0.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(indicial_exponent(3, 0.3), Error);  // beyond (N-2)^2/4
}

TEST_CASE("zero potential has no negative singular eigenvalue") {
  const auto s = negative_singular_eigenvalues(3, LinearizedPotential::zero(), 4);
  CHECK(s.eigenpairs.empty());
}

TEST_CASE("N = 3, p = 3 singular spectrum (frozen)") {
  const auto a = linearized_potential(solve_lane_emden(3, 3.0));
  const auto s = negative_singular_eigenvalues(3, a, 8, 1e-11);
  REQUIRE(s.radial_morse_index() == 1);
  CHECK(s.eigenpairs[0].value == doctest::Approx(-1.8024279913).epsilon(1e-9));
  CHECK(s.eigenpairs[0].zeros == 0);
  CHECK(s.eigenpairs[0].weak_residual < 1e-8);
  CHECK(count_singular_below(3, a, -1.0) == 1);
  CHECK(count_singular_below(3, a, -1.9) == 0);
}

TEST_CASE("N = 4, p = 2 first singular eigenvalue (frozen)") {
  CHECK(first_singular_eigenvalue(4, 2.0, 1e-11) == doctest::Approx(-2.3715034757).epsilon(1e-9));
}

TEST_CASE("constant potential: zeros order the eigenpairs") {
  const auto a = LinearizedPotential::constant(50.0);
  const auto s = negative_singular_eigenvalues(3, a, 8, 1e-11);
  REQUIRE(s.eigenpairs.size() == 2);
  CHECK(s.eigenpairs[0].value == doctest::Approx(-12.48700).epsilon(1e-6));
  CHECK(s.eigenpairs[1].value == doctest::Approx(-0.82864).epsilon(1e-5));
  CHECK(s.eigenpairs[0].zeros == 0);
  CHECK(s.eigenpairs[1].zeros == 1);
}

TEST_CASE("standard radial eigenvalues (frozen)") {
  const auto a = linearized_potential(solve_lane_emden(3, 3.0));
  const auto v = standard_radial_eigenvalues(3, a, 0.0, 2, 1e-10);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == doctest::Approx(-38.59277).epsilon(1e-6));
  CHECK(v[1] == doctest::Approx(13.17082).epsilon(1e-6));
  CHECK(count_negative_standard(3, a, 0.0) == 1);
}

TEST_CASE("singular oracle converges at second order") {
  const auto a = linearized_potential(solve_lane_emden(3, 3.0));
  const auto o1 = dense_oracle_singular(3, a, 1000);
  const auto o2 = dense_oracle_singular(3, a, 2000);
  const auto o4 = dense_oracle_singular(3, a, 4000);
  REQUIRE(o1.values.size() == 1);
  const double order = std::log2((o1.values[0] - o2.values[0]) / (o2.values[0] - o4.values[0]));
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));
  const double richardson = (4.0 * o4.values[0] - o2.values[0]) / 3.0;
  CHECK(richardson == doctest::Approx(-1.8024279913).epsilon(1e-8));
}

TEST_CASE("Hardy quotient stays above (N-2)^2/4") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {3, 4, 5}) {
    std::vector<double> r(200), v(200);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = 1e-4 + (1.0 - 1e-4) * i / (r.size() - 1.0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (1.0 - r[i]) * (1.0 + 0.3 * u(rng));
    v.back() = 0.0;
    CHECK(hardy_quotient(n, r, v) >= hardy_constant(n) - 1e-10);
    const double q = hardy_quotient(
        n, [](double x) { return 1.0 - x * x; }, [](double x) { return -2.0 * x; });
    CHECK(q >= hardy_constant(n) - 1e-10);
  }
}
