#include <cmath>
#include <numbers>

#include <doctest.h>

#include "morsecone/bubble.hpp"
#include "morsecone/errors.hpp"

using namespace morsecone;
using std::numbers::pi;

TEST_CASE("bubbles solve the critical equation") {
  for (int n : {3, 4, 5}) {
    for (auto norm : {BubbleNormalization::Standard, BubbleNormalization::UnitPeak}) {
      const Bubble u{n, 1.7, norm};
      for (double r : {1e-3, 0.1, 1.0, 10.0, 1e3}) CHECK(std::abs(u.residual(r)) < 1e-10);
    }
    CHECK(Bubble{n, 1.0, BubbleNormalization::UnitPeak}.value(0.0) == doctest::Approx(1.0));
  }
  // UnitPeak is the standard family at lambda = sqrt(N(N-2)).
  CHECK(bubble_value(3, std::sqrt(3.0), 0.7) ==
        doctest::Approx(bubble_value(3, 0.0, 0.7, BubbleNormalization::UnitPeak)));
}

TEST_CASE("eta solves the limit equation with eigenvalue -(N-1)") {
  for (int n : {3, 4, 5}) {
    for (double r : {1e-3, 0.3, 1.0, 4.0, 100.0}) {
      CHECK(std::abs(eta_residual(n, r)) <= 1e-8 * std::max(1.0, std::abs(eta_value(n, r))));
    }
    // Dropping the inverse-square term must break the identity.
    CHECK(std::abs(eta_residual(n, 1.0, false)) > 1e-2);
    const auto q = eta_rayleigh_quotient(n);
    CHECK(q.quotient == doctest::Approx(-(n - 1.0)).epsilon(1e-10));
    CHECK(q.error_bound < 1e-8);
  }
}

TEST_CASE("q_u on the half space cone (closed form)") {
  CHECK(q_u_on_bubble(3, pi / 2) == doctest::Approx(-pi * pi * std::pow(3.0, 1.5) / 2).epsilon(1e-9));
}

TEST_CASE("step 1 form sign follows lambda against N-1") {
  const double below = 1.589585646085;  // lambda_1 of the 2 pi / 3 cap, N = 3
  CHECK(step1_test_function_form(3, 1, 2 * pi / 3, below).value < 0.0);
  const double above = 3.6229743419;  // pi / 3 cap
  CHECK(step1_test_function_form(3, 1, pi / 3, above).value > 0.0);
  CHECK(std::abs(step1_test_function_form(3, 1, pi / 2, 2.0).value) < 1e-8);
  // Constant mode: -(N-1) times the weight times |D|.
  const auto c = step1_test_function_form(3, 0, pi / 3, 0.0);
  CHECK(c.value == doctest::Approx(-2.0 * c.radial_weight * cap_area(3, pi / 3)).epsilon(1e-9));
}

TEST_CASE("limit study trend at N = 3") {
  const auto t = limit_study(3, {4.0, 4.8}, 1e-10);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].gap == doctest::Approx(1.997e-2).epsilon(1e-3));
  CHECK(t.rows[1].gap == doctest::Approx(1.275e-4).epsilon(1e-2));
  CHECK(t.rows[1].vp_diagnostic < t.rows[0].vp_diagnostic);
}
