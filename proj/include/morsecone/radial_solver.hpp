#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace morsecone {

// Subcritical/critical exponent (N+2)/(N-2).
double critical_exponent(int dimension);

struct StepControl {
  double relative = 1e-12;
  double absolute = 1e-14;
};

struct RadialOptions {
  StepControl step;
  double zero_tolerance = 1e-12;  // bisection tolerance on the first zero
  double r_start = 1e-6;          // where the regular series hands over
  double r_max = 1e8;             // give up looking for a first zero past this
  std::size_t grid_size = 4096;
};

// Accepted integrator steps of the radial Lane-Emden initial value problem
//   u'' + (N-1)/r u' + |u|^{p-1} u = 0,  u(0) = u0, u'(0) = 0.
struct Trajectory {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
  std::optional<double> first_zero;
};

Trajectory integrate_radial(int dimension, double exponent, double u0, double r_max,
                            const StepControl& step = {}, double zero_tolerance = 1e-12,
                            double r_start = 1e-6);

// Strictly increasing grid in (0, 1] ending at 1: geometric towards r_start
// on the inner half, geometric towards 1 on the outer half.
std::vector<double> make_radial_grid(std::size_t size, double r_start = 1e-6);

// Positive radial solution of -Δu = u^p in the unit ball with u(1) = 0,
// sampled on a fixed grid. Between grid points it is reconstructed with a
// quintic Hermite interpolant built from (u, u', u''), u'' taken from the ODE.
class RadialSolution {
 public:
  RadialSolution(int dimension, double exponent, double peak, double unscaled_zero,
                 std::vector<double> r, std::vector<double> u, std::vector<double> du,
                 RadialOptions options);

  int dimension() const noexcept { return dimension_; }
  double exponent() const noexcept { return exponent_; }
  double peak() const noexcept { return peak_; }
  // First zero R of the u0 = 1 trajectory the solution was rescaled from.
  double unscaled_zero() const noexcept { return unscaled_zero_; }
  const std::vector<double>& r() const noexcept { return r_; }
  const std::vector<double>& u() const noexcept { return u_; }
  const std::vector<double>& du() const noexcept { return du_; }
  const RadialOptions& options() const noexcept { return options_; }

  double value(double r) const;
  double derivative(double r) const;
  double second_derivative(double r) const;

 private:
  double ode_second_derivative(std::size_t i) const;
  std::size_t cell(double r) const;

  int dimension_;
  double exponent_;
  double peak_;
  double unscaled_zero_;
  std::vector<double> r_, u_, du_, d2u_;
  RadialOptions options_;
};

RadialSolution solve_lane_emden(int dimension, double exponent, const RadialOptions& options = {});

// Sup over grid cells of the cell-averaged residual of (r^{N-1}u')' + r^{N-1}u^p,
// divided by M_p^p so the figure is comparable across exponents.
double ode_residual(const RadialSolution& solution);

// The potential a(r) of the linearized operator -Δ - a. Either derived from a
// Lane-Emden solution (a = p u^{p-1}) or supplied as a function.
class LinearizedPotential {
 public:
  static LinearizedPotential zero(std::vector<double> grid = {});
  static LinearizedPotential constant(double value, std::vector<double> grid = {});
  static LinearizedPotential from_function(std::function<double(double)> a, double sup_norm,
                                           std::vector<double> grid = {});
  static LinearizedPotential from_solution(const RadialSolution& solution);

  double operator()(double r) const { return eval_(r); }
  double sup_norm() const noexcept { return sup_norm_; }
  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& samples() const noexcept { return samples_; }
  // The Lane-Emden solution behind the potential, if any.
  const RadialSolution* solution() const noexcept { return solution_.get(); }
  bool identically_zero() const noexcept { return zero_; }

 private:
  LinearizedPotential() = default;

  std::function<double(double)> eval_;
  double sup_norm_ = 0.0;
  std::vector<double> grid_;
  std::vector<double> samples_;
  std::shared_ptr<const RadialSolution> solution_;
  bool zero_ = false;
};

LinearizedPotential linearized_potential(const RadialSolution& solution);

}  // namespace morsecone
