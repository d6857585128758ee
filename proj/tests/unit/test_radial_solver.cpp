#include <cmath>

#include <doctest.h>

#include "morsecone/errors.hpp"
#include "morsecone/radial_solver.hpp"

using namespace morsecone;

TEST_CASE("critical exponent") {
  CHECK(critical_exponent(3) == doctest::Approx(5.0));
  CHECK(critical_exponent(4) == doctest::Approx(3.0));
  CHECK(critical_exponent(5) == doctest::Approx(7.0 / 3.0));
}

TEST_CASE("radial grid is increasing and ends at 1") {
  const auto grid = make_radial_grid(257, 1e-6);
  REQUIRE(grid.size() == 257);
  CHECK(grid.front() == doctest::Approx(1e-6));
  CHECK(grid.back() == 1.0);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("p = 1 limit of the scaling: u0 = 1 trajectory has a first zero") {
  const auto t = integrate_radial(3, 3.0, 1.0, 100.0);
  REQUIRE(t.first_zero.has_value());
  CHECK(*t.first_zero > 1.0);
}

TEST_CASE("Lane-Emden solution: boundary values, peak scaling and residual") {
  for (const auto& [n, p] : {std::pair{3, 3.0}, std::pair{3, 2.0}, std::pair{4, 2.0}, std::pair{5, 1.5}}) {
    CAPTURE(n);
    CAPTURE(p);
    const auto s = solve_lane_emden(n, p);
    CHECK(s.value(1.0) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(s.derivative(0.0) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(s.peak() == doctest::Approx(std::pow(s.unscaled_zero(), 2.0 / (p - 1.0))).epsilon(1e-10));
    CHECK(s.value(0.0) == doctest::Approx(s.peak()).epsilon(1e-8));
    CHECK(ode_residual(s) < 1e-7);
    for (double r : {0.1, 0.5, 0.9}) CHECK(s.value(r) > 0.0);
  }
}

TEST_CASE("N = 3, p = 3 peak (frozen)") {
  // Same figure as R for p = 3, since M = R^{2/(p-1)} = R.
  const auto s = solve_lane_emden(3, 3.0);
  CHECK(s.peak() == doctest::Approx(6.8968486193827525).epsilon(1e-9));
}

TEST_CASE("linearized potential") {
  const auto s = solve_lane_emden(3, 3.0);
  const auto a = linearized_potential(s);
  CHECK(a(0.0) == doctest::Approx(3.0 * s.peak() * s.peak()).epsilon(1e-8));
  CHECK(a.sup_norm() >= a(0.5));
  CHECK(a.solution() != nullptr);
  CHECK(LinearizedPotential::zero().identically_zero());
  CHECK(LinearizedPotential::constant(50.0)(0.3) == 50.0);
}

TEST_CASE("invalid exponents are rejected") {
  CHECK_THROWS_AS(solve_lane_emden(3, 5.0), Error);
  CHECK_THROWS_AS(solve_lane_emden(3, 1.0), Error);
  CHECK_THROWS_AS(solve_lane_emden(2, 2.0), Error);
  try {
    solve_lane_emden(4, 3.0);
  } catch (const Error& e) {
    CHECK(std::string(e.class_name()) == "InvalidArgument");
  }
}
