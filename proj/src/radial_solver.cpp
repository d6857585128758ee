#include "morsecone/radial_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "morsecone/errors.hpp"
#include "morsecone/ode.hpp"

namespace morsecone {

namespace {

constexpr const char* kModule = "radial_solver";

void require_dimension_and_exponent(int dimension, double exponent) {
  if (dimension < 3) {
    throw Error(ErrorKind::InvalidArgument, kModule, "dimension must be at least 3",
                {{"N", std::to_string(dimension)}});
  }
  if (!(exponent > 1.0) || !std::isfinite(exponent)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "exponent must exceed 1",
                {{"p", std::to_string(exponent)}});
  }
}

double signed_power(double u, double p) { return std::copysign(std::pow(std::abs(u), p), u); }

struct LaneEmdenSystem {
  double n_minus_1;
  double p;
  void operator()(const std::array<double, 2>& x, std::array<double, 2>& dx, double r) const {
    dx[0] = x[1];
    dx[1] = -n_minus_1 / r * x[1] - signed_power(x[0], p);
  }
};

// Regular expansion u = u0 - u0^p r^2/(2N) + p u0^{2p-1} r^4/(8N(N+2)).
std::array<double, 2> series_start(int dimension, double p, double u0, double r) {
  const double n = dimension;
  const double c2 = -std::pow(u0, p) / (2.0 * n);
  const double c4 = p * std::pow(u0, 2.0 * p - 1.0) / (8.0 * n * (n + 2.0));
  const double r2 = r * r;
  return {u0 + c2 * r2 + c4 * r2 * r2, 2.0 * c2 * r + 4.0 * c4 * r2 * r};
}

double series_radius(double p, double u0, double r_start) {
  // Keep u0^{p-1} r^2 small so the dropped r^6 term stays below round-off.
  const double curvature = std::pow(u0, p - 1.0);
  return curvature > 0.0 ? std::min(r_start, 1e-3 / std::sqrt(curvature)) : r_start;
}

}  // namespace

double critical_exponent(int dimension) {
  return (dimension + 2.0) / (dimension - 2.0);
}

Trajectory integrate_radial(int dimension, double exponent, double u0, double r_max,
                            const StepControl& step, double zero_tolerance, double r_start) {
  require_dimension_and_exponent(dimension, exponent);
  if (u0 < 0.0 || !std::isfinite(u0)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "initial value must be nonnegative",
                {{"u0", std::to_string(u0)}});
  }
  if (!(r_max > r_start)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "r_max must exceed the series start",
                {{"r_max", std::to_string(r_max)}});
  }
  Trajectory traj;
  if (u0 == 0.0) {
    traj.r = {r_start, r_max};
    traj.u = {0.0, 0.0};
    traj.du = {0.0, 0.0};
    return traj;
  }

  LaneEmdenSystem system{dimension - 1.0, exponent};
  double r = series_radius(exponent, u0, r_start);
  auto x = series_start(dimension, exponent, u0, r);
  traj.r.push_back(r);
  traj.u.push_back(x[0]);
  traj.du.push_back(x[1]);

  using Stepper = ode::Integrator<2>;
  Stepper integrator({step.relative, step.absolute}, r);
  integrator.advance(system, x, r, r_max,
                     [&](double r_prev, const Stepper::state_type& x_prev, double r_now,
                         const Stepper::state_type& x_now) {
                       if (x_now[0] > 0.0) {
                         traj.r.push_back(r_now);
                         traj.u.push_back(x_now[0]);
                         traj.du.push_back(x_now[1]);
                         return false;
                       }
                       // Sign change inside the step: bisect on the length of a
                       // single step taken from its left end.
                       double lo = 0.0;
                       double hi = r_now - r_prev;
                       const double width =
                           std::max(zero_tolerance, 4.0 * 2.2e-16 * std::abs(r_now));
                       Stepper::state_type at_hi = x_now;
                       while (hi - lo > width) {
                         const double mid = 0.5 * (lo + hi);
                         const auto y = Stepper::single_step(system, x_prev, r_prev, mid);
                         if (y[0] > 0.0) {
                           lo = mid;
                         } else {
                           hi = mid;
                           at_hi = y;
                         }
                       }
                       const double zero = r_prev + hi;
                       traj.first_zero = zero;
                       traj.r.push_back(zero);
                       traj.u.push_back(at_hi[0]);
                       traj.du.push_back(at_hi[1]);
                       return true;
                     });
  return traj;
}

std::vector<double> make_radial_grid(std::size_t size, double r_start) {
  if (size < 8) {
    throw Error(ErrorKind::InvalidArgument, kModule, "grid needs at least 8 points",
                {{"size", std::to_string(size)}});
  }
  if (!(r_start > 0.0 && r_start < 0.5)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "grid start must lie in (0, 0.5)",
                {{"r_start", std::to_string(r_start)}});
  }
  const std::size_t inner = size / 2;
  const std::size_t outer = size - inner - 1;  // last slot is r = 1
  std::vector<double> grid;
  grid.reserve(size);
  const double log_lo = std::log(r_start);
  const double log_mid = std::log(0.5);
  for (std::size_t i = 0; i < inner; ++i) {
    const double s = inner == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(inner - 1);
    grid.push_back(std::exp(log_lo + s * (log_mid - log_lo)));
  }
  grid.back() = 0.5;
  // Distances to the boundary, geometric from 0.5 (exclusive) down to r_start.
  for (std::size_t j = 1; j <= outer; ++j) {
    const double s = static_cast<double>(j) / static_cast<double>(outer);
    grid.push_back(1.0 - std::exp(log_mid + s * (log_lo - log_mid)));
  }
  grid.push_back(1.0);
  return grid;
}

RadialSolution::RadialSolution(int dimension, double exponent, double peak, double unscaled_zero,
                               std::vector<double> r, std::vector<double> u,
                               std::vector<double> du, RadialOptions options)
    : dimension_(dimension),
      exponent_(exponent),
      peak_(peak),
      unscaled_zero_(unscaled_zero),
      r_(std::move(r)),
      u_(std::move(u)),
      du_(std::move(du)),
      options_(options) {
  require_dimension_and_exponent(dimension_, exponent_);
  if (r_.size() < 2 || u_.size() != r_.size() || du_.size() != r_.size()) {
    throw Error(ErrorKind::InvalidArgument, kModule, "solution samples have inconsistent sizes");
  }
  for (std::size_t i = 0; i + 1 < r_.size(); ++i) {
    if (!(r_[i] > 0.0 && r_[i + 1] > r_[i])) {
      throw Error(ErrorKind::InvalidArgument, kModule, "grid must be strictly increasing in (0, 1]");
    }
  }
  d2u_.resize(r_.size());
  for (std::size_t i = 0; i < r_.size(); ++i) d2u_[i] = ode_second_derivative(i);
}

double RadialSolution::ode_second_derivative(std::size_t i) const {
  return -(dimension_ - 1.0) / r_[i] * du_[i] - signed_power(u_[i], exponent_);
}

std::size_t RadialSolution::cell(double r) const {
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  const auto idx = static_cast<std::size_t>(it - r_.begin());
  return std::clamp<std::size_t>(idx, 1, r_.size() - 1) - 1;
}

namespace {

struct Quintic {
  std::array<double, 6> h;    // basis values
  std::array<double, 6> dh;   // d/ds
  std::array<double, 6> d2h;  // d2/ds2
};

Quintic quintic_basis(double s) {
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  Quintic q{};
  q.h = {1 - 10 * s3 + 15 * s4 - 6 * s5,       s - 6 * s3 + 8 * s4 - 3 * s5,
         0.5 * (s2 - 3 * s3 + 3 * s4 - s5),    10 * s3 - 15 * s4 + 6 * s5,
         -4 * s3 + 7 * s4 - 3 * s5,            0.5 * (s3 - 2 * s4 + s5)};
  q.dh = {-30 * s2 + 60 * s3 - 30 * s4,        1 - 18 * s2 + 32 * s3 - 15 * s4,
          0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4), 30 * s2 - 60 * s3 + 30 * s4,
          -12 * s2 + 28 * s3 - 15 * s4,        0.5 * (3 * s2 - 8 * s3 + 5 * s4)};
  q.d2h = {-60 * s + 180 * s2 - 120 * s3,      -36 * s + 96 * s2 - 60 * s3,
           0.5 * (2 - 18 * s + 36 * s2 - 20 * s3), 60 * s - 180 * s2 + 120 * s3,
           -24 * s + 84 * s2 - 60 * s3,        0.5 * (6 * s - 24 * s2 + 20 * s3)};
  return q;
}

}  // namespace

double RadialSolution::value(double r) const {
  if (r < r_.front()) {
    const double n = dimension_;
    const double p = exponent_;
    const double c2 = -std::pow(peak_, p) / (2.0 * n);
    const double c4 = p * std::pow(peak_, 2.0 * p - 1.0) / (8.0 * n * (n + 2.0));
    return peak_ + c2 * r * r + c4 * r * r * r * r;
  }
  const std::size_t i = cell(r);
  const double h = r_[i + 1] - r_[i];
  const auto q = quintic_basis((std::min(r, r_.back()) - r_[i]) / h);
  return q.h[0] * u_[i] + q.h[1] * h * du_[i] + q.h[2] * h * h * d2u_[i] +
         q.h[3] * u_[i + 1] + q.h[4] * h * du_[i + 1] + q.h[5] * h * h * d2u_[i + 1];
}

double RadialSolution::derivative(double r) const {
  if (r < r_.front()) {
    const double n = dimension_;
    const double p = exponent_;
    const double c2 = -std::pow(peak_, p) / (2.0 * n);
    const double c4 = p * std::pow(peak_, 2.0 * p - 1.0) / (8.0 * n * (n + 2.0));
    return 2.0 * c2 * r + 4.0 * c4 * r * r * r;
  }
  const std::size_t i = cell(r);
  const double h = r_[i + 1] - r_[i];
  const auto q = quintic_basis((std::min(r, r_.back()) - r_[i]) / h);
  return (q.dh[0] * u_[i] + q.dh[1] * h * du_[i] + q.dh[2] * h * h * d2u_[i] +
          q.dh[3] * u_[i + 1] + q.dh[4] * h * du_[i + 1] + q.dh[5] * h * h * d2u_[i + 1]) /
         h;
}

double RadialSolution::second_derivative(double r) const {
  if (r < r_.front()) {
    const double n = dimension_;
    const double p = exponent_;
    const double c2 = -std::pow(peak_, p) / (2.0 * n);
    const double c4 = p * std::pow(peak_, 2.0 * p - 1.0) / (8.0 * n * (n + 2.0));
    return 2.0 * c2 + 12.0 * c4 * r * r;
  }
  const std::size_t i = cell(r);
  const double h = r_[i + 1] - r_[i];
  const auto q = quintic_basis((std::min(r, r_.back()) - r_[i]) / h);
  return (q.d2h[0] * u_[i] + q.d2h[1] * h * du_[i] + q.d2h[2] * h * h * d2u_[i] +
          q.d2h[3] * u_[i + 1] + q.d2h[4] * h * du_[i + 1] + q.d2h[5] * h * h * d2u_[i + 1]) /
         (h * h);
}

RadialSolution solve_lane_emden(int dimension, double exponent, const RadialOptions& options) {
  require_dimension_and_exponent(dimension, exponent);
  const double p_crit = critical_exponent(dimension);
  if (!(exponent < p_crit)) {
    throw Error(ErrorKind::InvalidArgument, kModule,
                "exponent must be subcritical, p < (N+2)/(N-2)",
                {{"N", std::to_string(dimension)}, {"p", std::to_string(exponent)}});
  }
  const auto probe = integrate_radial(dimension, exponent, 1.0, options.r_max, options.step,
                                      options.zero_tolerance, options.r_start);
  if (!probe.first_zero) {
    throw Error(ErrorKind::NoFirstZero, kModule, "no first zero before r_max",
                {{"N", std::to_string(dimension)},
                 {"p", std::to_string(exponent)},
                 {"r_max", std::to_string(options.r_max)}});
  }
  const double zero = *probe.first_zero;
  const double scale = std::pow(zero, 2.0 / (exponent - 1.0));

  auto grid = make_radial_grid(options.grid_size, options.r_start);
  std::vector<double> u(grid.size()), du(grid.size());

  LaneEmdenSystem system{dimension - 1.0, exponent};
  double s = std::min(options.r_start, zero * grid.front());
  s = series_radius(exponent, 1.0, s);
  auto x = series_start(dimension, exponent, 1.0, s);
  ode::Integrator<2> integrator({options.step.relative, options.step.absolute}, s);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double target = i + 1 == grid.size() ? zero : zero * grid[i];
    if (target > s) integrator.advance(system, x, s, target);
    u[i] = scale * x[0];
    du[i] = scale * zero * x[1];
  }
  return RadialSolution(dimension, exponent, scale, zero, std::move(grid), std::move(u),
                        std::move(du), options);
}

double ode_residual(const RadialSolution& sol) {
  static constexpr std::array<double, 5> nodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                                  0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> weights = {0.2369268850561891, 0.4786286704993665,
                                                    0.5688888888888889, 0.4786286704993665,
                                                    0.2369268850561891};
  const auto& r = sol.r();
  const auto& du = sol.du();
  const double n = sol.dimension();
  const double p = sol.exponent();
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double a = r[i], b = r[i + 1];
    const double flux = std::pow(b, n - 1) * du[i + 1] - std::pow(a, n - 1) * du[i];
    double source = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double s = 0.5 * (a + b) + 0.5 * (b - a) * nodes[k];
      source += weights[k] * std::pow(s, n - 1) * signed_power(sol.value(s), p);
    }
    source *= 0.5 * (b - a);
    const double volume = (std::pow(b, n) - std::pow(a, n)) / n;
    worst = std::max(worst, std::abs(flux + source) / volume);
  }
  return worst / std::pow(sol.peak(), p);
}

LinearizedPotential LinearizedPotential::zero(std::vector<double> grid) {
  if (grid.empty()) grid = make_radial_grid(4096);
  LinearizedPotential a;
  a.eval_ = [](double) { return 0.0; };
  a.samples_.assign(grid.size(), 0.0);
  a.grid_ = std::move(grid);
  a.zero_ = true;
  return a;
}

LinearizedPotential LinearizedPotential::constant(double value, std::vector<double> grid) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "potential must be finite");
  }
  if (value == 0.0) return zero(std::move(grid));
  return from_function([value](double) { return value; }, std::abs(value), std::move(grid));
}

LinearizedPotential LinearizedPotential::from_function(std::function<double(double)> f,
                                                       double sup_norm, std::vector<double> grid) {
  if (!f) throw Error(ErrorKind::InvalidArgument, kModule, "potential function is empty");
  if (!(sup_norm >= 0.0) || !std::isfinite(sup_norm)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "sup norm must be finite and nonnegative");
  }
  if (grid.empty()) grid = make_radial_grid(4096);
  LinearizedPotential a;
  a.samples_.reserve(grid.size());
  for (double r : grid) a.samples_.push_back(f(r));
  a.eval_ = std::move(f);
  a.sup_norm_ = sup_norm;
  a.grid_ = std::move(grid);
  return a;
}

LinearizedPotential LinearizedPotential::from_solution(const RadialSolution& solution) {
  auto shared = std::make_shared<const RadialSolution>(solution);
  LinearizedPotential a;
  const double p = shared->exponent();
  const RadialSolution* raw = shared.get();
  a.eval_ = [raw, p](double r) { return p * std::pow(std::max(raw->value(r), 0.0), p - 1.0); };
  a.grid_ = shared->r();
  a.samples_.reserve(a.grid_.size());
  bool all_zero = true;
  for (double u : shared->u()) {
    const double value = p * std::pow(std::max(u, 0.0), p - 1.0);
    all_zero = all_zero && value == 0.0;
    a.samples_.push_back(value);
  }
  a.sup_norm_ = p * std::pow(std::max(shared->peak(), 0.0), p - 1.0);
  a.zero_ = all_zero && shared->peak() == 0.0;
  a.solution_ = std::move(shared);
  return a;
}

LinearizedPotential linearized_potential(const RadialSolution& solution) {
  return LinearizedPotential::from_solution(solution);
}

}  // namespace morsecone
