#include "morsecone/bubble.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "morsecone/detail/parallel.hpp"
#include "morsecone/detail/quadrature.hpp"
#include "morsecone/errors.hpp"
#include "morsecone/radial_solver.hpp"
#include "morsecone/singular_spectrum.hpp"

namespace morsecone {

namespace {

constexpr const char* kModule = "bubble";
constexpr double kTailBudget = 1e-12;

void require_dimension(int dimension) {
  if (dimension < 3) {
    throw Error(ErrorKind::InvalidArgument, kModule, "dimension must be at least 3",
                {{"N", std::to_string(dimension)}});
  }
}

double conformal(int dimension) { return dimension * (dimension - 2.0); }

// U = A (B + r^2)^{-k}, k = (N-2)/2.
struct BubbleForm {
  double a;
  double b;
  double k;
};

BubbleForm form_of(const Bubble& u) {
  require_dimension(u.dimension);
  const double c = conformal(u.dimension);
  const double scale =
      u.normalization == BubbleNormalization::UnitPeak ? std::sqrt(c) : u.scale;
  if (!(scale > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "bubble scale must be positive",
                {{"scale", std::to_string(scale)}});
  }
  const double k = 0.5 * (u.dimension - 2.0);
  const double alpha = std::pow(c, 0.5 * k);
  return {alpha * std::pow(scale, k), scale * scale, k};
}

double unit_sphere_area(int m) {
  const double half = 0.5 * m;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

struct RadialEtaIntegrals {
  double energy;
  double weight;
  double error;
};

RadialEtaIntegrals eta_integrals(int dimension) {
  const double n = dimension;
  const double c = conformal(dimension);
  const double p_s = critical_exponent(dimension);
  const Bubble v{dimension, 1.0, BubbleNormalization::UnitPeak};
  const double cn = std::pow(c, n);
  const auto numerator = detail::integrate_with_tail(
      [&](double r) {
        const double e = eta_value(dimension, r);
        const double de = eta_derivative(dimension, r);
        return std::pow(r, n - 1.0) * (de * de - v.potential(r) * e * e);
      },
      [&](double big) {
        return (n - 1.0) * (n - 1.0) * cn * std::pow(big, -n) / n +
               p_s * cn * c * c * std::pow(big, -n - 2.0) / (n + 2.0);
      },
      kTailBudget, kModule);
  const auto denominator = detail::integrate_with_tail(
      [&](double r) {
        const double e = eta_value(dimension, r);
        return std::pow(r, n - 3.0) * e * e;
      },
      [&](double big) { return cn * std::pow(big, -n) / n; }, kTailBudget, kModule);
  return {numerator.value, denominator.value,
          numerator.error + numerator.tail_bound + denominator.error + denominator.tail_bound};
}

}  // namespace

double Bubble::value(double r) const {
  const auto f = form_of(*this);
  return f.a * std::pow(f.b + r * r, -f.k);
}

double Bubble::derivative(double r) const {
  const auto f = form_of(*this);
  return -2.0 * f.k * f.a * r * std::pow(f.b + r * r, -f.k - 1.0);
}

double Bubble::second_derivative(double r) const {
  const auto f = form_of(*this);
  const double s = f.b + r * r;
  return -2.0 * f.k * f.a * std::pow(s, -f.k - 1.0) +
         4.0 * f.k * (f.k + 1.0) * f.a * r * r * std::pow(s, -f.k - 2.0);
}

double Bubble::laplacian(double r) const {
  const auto f = form_of(*this);
  // U'/r stays finite at the origin.
  const double du_over_r = -2.0 * f.k * f.a * std::pow(f.b + r * r, -f.k - 1.0);
  return second_derivative(r) + (dimension - 1.0) * du_over_r;
}

double Bubble::potential(double r) const {
  const double p_s = critical_exponent(dimension);
  return p_s * std::pow(value(r), p_s - 1.0);
}

double Bubble::residual(double r) const {
  return -laplacian(r) - std::pow(value(r), critical_exponent(dimension));
}

double bubble_value(int dimension, double scale, double r, BubbleNormalization normalization) {
  return Bubble{dimension, scale, normalization}.value(r);
}

double bubble_potential(int dimension, double scale, double r, BubbleNormalization normalization) {
  return Bubble{dimension, scale, normalization}.potential(r);
}

double eta_value(int dimension, double r) {
  require_dimension(dimension);
  return r * std::pow(1.0 + r * r / conformal(dimension), -0.5 * dimension);
}

double eta_derivative(int dimension, double r) {
  require_dimension(dimension);
  const double x = r * r / conformal(dimension);
  return std::pow(1.0 + x, -0.5 * dimension) * (1.0 - dimension * x / (1.0 + x));
}

double eta_residual(int dimension, double r, bool include_inverse_square) {
  require_dimension(dimension);
  if (!(r > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "eta residual needs r > 0",
                {{"r", std::to_string(r)}});
  }
  static constexpr std::array<double, 4> d1 = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  static constexpr std::array<double, 4> d2 = {8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
  constexpr double d2_center = -205.0 / 72.0;
  // eta is odd and analytic near 0, so the stencil may cross the origin;
  // a step of at least 0.01 keeps rounding in the second difference small.
  const double h = 0.01 * std::max(r, 1.0);
  const double e0 = eta_value(dimension, r);
  double first = 0.0;
  double second = d2_center * e0;
  for (int i = 0; i < 4; ++i) {
    const double plus = eta_value(dimension, r + (i + 1) * h);
    const double minus = eta_value(dimension, r - (i + 1) * h);
    first += d1[i] * (plus - minus);
    second += d2[i] * (plus + minus);
  }
  first /= h;
  second /= h * h;
  const Bubble u{dimension, 1.0, BubbleNormalization::UnitPeak};
  double res = -second - (dimension - 1.0) / r * first - u.potential(r) * e0;
  if (include_inverse_square) res += (dimension - 1.0) * e0 / (r * r);
  return res;
}

EtaQuotient eta_rayleigh_quotient(int dimension) {
  require_dimension(dimension);
  const auto parts = eta_integrals(dimension);
  EtaQuotient q;
  q.numerator = parts.energy;
  q.denominator = parts.weight;
  q.quotient = parts.energy / parts.weight;
  q.error_bound = parts.error * (1.0 + std::abs(q.quotient)) / parts.weight;
  return q;
}

double rescaled_potential_gap(int dimension, double exponent, double ball_radius) {
  const auto solution = solve_lane_emden(dimension, exponent);
  const double big_r = solution.unscaled_zero();
  const double peak = solution.peak();
  const Bubble u{dimension, 1.0, BubbleNormalization::UnitPeak};
  constexpr int samples = 2001;
  double gap = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double rho = ball_radius * i / (samples - 1);
    double vp = 0.0;
    if (rho < big_r) {
      const double v = std::max(0.0, solution.value(rho / big_r) / peak);
      vp = exponent * std::pow(v, exponent - 1.0);
    }
    gap = std::max(gap, std::abs(vp - u.potential(rho)));
  }
  return gap;
}

LimitTable limit_study(int dimension, const std::vector<double>& exponents, double tol, int jobs,
                       double ball_radius) {
  require_dimension(dimension);
  for (std::size_t i = 1; i < exponents.size(); ++i) {
    if (!(exponents[i] > exponents[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, kModule, "exponents must be strictly ascending");
    }
  }
  LimitTable table;
  table.dimension = dimension;
  table.tolerance = tol;
  table.ball_radius = ball_radius;
  table.rows = detail::parallel_map<LimitRow>(exponents.size(), jobs, [&](std::size_t i) {
    const double p = exponents[i];
    const auto solution = solve_lane_emden(dimension, p);
    const auto potential = linearized_potential(solution);
    const auto spectrum = negative_singular_eigenvalues(dimension, potential, 1, tol);
    if (spectrum.eigenpairs.empty()) {
      throw Error(ErrorKind::NoNegativeEigenvalue, kModule,
                  "Lane-Emden potential without a negative singular eigenvalue",
                  {{"N", std::to_string(dimension)}, {"p", std::to_string(p)}});
    }
    LimitRow row;
    row.p = p;
    row.lambda_hat_1 = spectrum.eigenpairs.front().value;
    row.gap = row.lambda_hat_1 + (dimension - 1.0);
    row.vp_diagnostic = rescaled_potential_gap(dimension, p, ball_radius);
    return row;
  });
  return table;
}

Step1Form step1_test_function_form(int dimension, int ell, double theta0, double lambda) {
  require_dimension(dimension);
  const auto mode = angular_mode(dimension, ell, theta0, lambda, 1025);
  const auto parts = eta_integrals(dimension);
  const double sphere = unit_sphere_area(dimension - 1);
  Step1Form out;
  out.lambda = lambda;
  out.radial_energy = parts.energy;
  out.radial_weight = parts.weight;
  out.angular_norm = sphere * mode.norm;
  out.angular_energy = sphere * mode.energy;
  out.value = out.radial_energy * out.angular_norm + out.radial_weight * out.angular_energy;
  return out;
}

Step1Form step1_test_function_form(int dimension, double lambda) {
  require_dimension(dimension);
  if (lambda < 0.0) {
    throw Error(ErrorKind::InvalidArgument, kModule, "eigenvalue must be nonnegative");
  }
  const auto parts = eta_integrals(dimension);
  Step1Form out;
  out.lambda = lambda;
  out.radial_energy = parts.energy;
  out.radial_weight = parts.weight;
  out.angular_norm = 1.0;
  out.angular_energy = lambda;
  out.value = out.radial_energy + out.radial_weight * lambda;
  return out;
}

double q_u_on_bubble_area(int dimension, double area) {
  require_dimension(dimension);
  if (!(area > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "domain area must be positive");
  }
  const double n = dimension;
  const double p_s = critical_exponent(dimension);
  const double two_star = 2.0 * n / (n - 2.0);
  const Bubble u{dimension, 1.0, BubbleNormalization::Standard};
  const double peak_power = std::pow(conformal(dimension), 0.5 * n);
  const auto radial = detail::integrate_with_tail(
      [&](double r) { return std::pow(r, n - 1.0) * std::pow(u.value(r), two_star); },
      [&](double big) { return peak_power * std::pow(big, -n) / n; }, kTailBudget, kModule);
  return (1.0 - p_s) * area * radial.value;
}

double q_u_on_bubble(int dimension, double theta0) {
  return q_u_on_bubble_area(dimension, cap_area(dimension, theta0));
}

}  // namespace morsecone
