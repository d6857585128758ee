#include "morsecone/singular_spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>
#include <type_traits>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "morsecone/detail/tridiagonal.hpp"
#include "morsecone/errors.hpp"
#include "morsecone/ode.hpp"

namespace morsecone {

namespace {

constexpr const char* kModule = "singular_spectrum";
constexpr double kPi = std::numbers::pi;

void require_dimension(int dimension) {
  if (dimension < 3) {
    throw Error(ErrorKind::InvalidArgument, kModule, "dimension must be at least 3",
                {{"N", std::to_string(dimension)}});
  }
}

int zeros_from_angle(double angle) {
  return std::max(0, static_cast<int>(std::ceil(angle / kPi)) - 1);
}

// Sign changes of sampled values, ignoring samples at roundoff level (the
// Dirichlet end in particular).
int interior_sign_changes(const std::vector<double>& v) {
  int changes = 0;
  int last = 0;
  for (double x : v) {
    if (std::abs(x) < 1e-8) continue;
    const int sign = x > 0.0 ? 1 : -1;
    if (last != 0 && sign != last) ++changes;
    last = sign;
  }
  return changes;
}

// Radial equation in t = log r:
//   psi_tt + (N-2) psi_t + q(r) psi = 0,   q = c0 + r^2 (a(r) + c2).
// The singular problem has c0 = lambda_hat, c2 = 0; the standard problem
// c0 = -shift, c2 = Lambda.
struct RadialPrufer {
  int dimension;
  double c0;
  double c2;
  const LinearizedPotential& a;

  // state: angle, log amplitude and, for Dim == 4, the running integrals
  // ∫ r^{N-2}(psi_t^2 - r^2 a psi^2) dt and ∫ r^{N-2} psi^2 dt.
  template <std::size_t Dim>
  void operator()(const std::array<double, Dim>& x, std::array<double, Dim>& dx, double t) const {
    const double r = std::exp(t);
    const double r2 = r * r;
    const double pot = a(r);
    const double q = c0 + r2 * (pot + c2);
    const double s = std::sin(x[0]);
    const double c = std::cos(x[0]);
    const double n2 = dimension - 2.0;
    dx[0] = c * c + n2 * s * c + q * s * s;
    dx[1] = s * c * (1.0 - q) - n2 * c * c;
    if constexpr (Dim == 4) {
      const double weight = std::pow(r, n2) * std::exp(2.0 * x[1]);
      dx[2] = weight * (c * c - r2 * pot * s * s);
      dx[3] = weight * s * s;
    }
  }
};

struct PruferRun {
  ShootResult result;
  double energy = 0.0;
  double weight_norm = 0.0;
  std::vector<double> angles;
  std::vector<double> log_amplitudes;
};

double indicial_root(int dimension, double c0) {
  const double n2 = dimension - 2.0;
  const double disc = n2 * n2 - 4.0 * c0;
  if (!(disc > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, kModule,
                "indicial discriminant must be positive (eigenvalue below (N-2)^2/4)",
                {{"N", std::to_string(dimension)}, {"lambda_hat", std::to_string(c0)}});
  }
  // -2 c0 / (n2 + sqrt(disc)) is the + root without cancellation near c0 = 0.
  return -2.0 * c0 / (n2 + std::sqrt(disc));
}

PruferRun run_prufer(const RadialPrufer& problem, const ShootOptions& options,
                     const std::vector<double>* sample_r = nullptr, bool with_integrals = false) {
  const int n = problem.dimension;
  const double beta = indicial_root(n, problem.c0);
  const double a0 = problem.a(options.r_start) + problem.c2;
  double r_s = options.r_start;
  if (a0 != 0.0) r_s = std::min(r_s, 1e-2 / std::sqrt(std::abs(a0)));
  const double corr = -a0 / (4.0 * beta + 2.0 * n);

  const auto series_state = [&](double r) {
    const double rel = 1.0 + corr * r * r;
    const double rel_t = beta + (beta + 2.0) * corr * r * r;
    return std::array<double, 2>{std::atan2(rel, rel_t),
                                 beta * std::log(r) + 0.5 * std::log(rel * rel + rel_t * rel_t)};
  };

  const auto start = series_state(r_s);
  PruferRun run;
  double t = std::log(r_s);

  const auto drive = [&](auto& x) {
    constexpr std::size_t dim = std::tuple_size_v<std::decay_t<decltype(x)>>;
    ode::Integrator<dim> integrator({options.relative, options.absolute}, 1e-2);
    if (sample_r) {
      run.angles.reserve(sample_r->size());
      run.log_amplitudes.reserve(sample_r->size());
      for (double r : *sample_r) {
        if (r < r_s) {
          const auto s = series_state(r);
          run.angles.push_back(s[0]);
          run.log_amplitudes.push_back(s[1]);
          continue;
        }
        const double target = std::min(std::log(r), 0.0);
        if (target > t) integrator.advance(problem, x, t, target);
        run.angles.push_back(x[0]);
        run.log_amplitudes.push_back(x[1]);
      }
    }
    if (t < 0.0) integrator.advance(problem, x, t, 0.0);
    run.result.angle = x[0];
    run.result.log_amplitude = x[1];
  };

  if (with_integrals) {
    const double power = n - 2.0 + 2.0 * beta;
    const double head = std::pow(r_s, power) / power;
    std::array<double, 4> x{start[0], start[1], beta * beta * head, head};
    drive(x);
    run.energy = x[2];
    run.weight_norm = x[3];
  } else {
    std::array<double, 2> x{start[0], start[1]};
    drive(x);
  }
  run.result.endpoint = std::exp(run.result.log_amplitude) * std::sin(run.result.angle);
  run.result.zeros = zeros_from_angle(run.result.angle);
  return run;
}

double root_in_bracket(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                       double f_hi, double tol) {
  boost::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, f_lo, f_hi, [tol](double u, double v) { return std::abs(v - u) <= tol; },
      iterations);
  return 0.5 * (a + b);
}

}  // namespace

IndicialData indicial_exponent(int dimension, double lambda_hat) {
  require_dimension(dimension);
  return {lambda_hat, indicial_root(dimension, lambda_hat)};
}

ShootResult shoot_singular(int dimension, const LinearizedPotential& a, double lambda_hat,
                           const ShootOptions& options) {
  require_dimension(dimension);
  return run_prufer({dimension, lambda_hat, 0.0, a}, options).result;
}

int count_singular_below(int dimension, const LinearizedPotential& a, double lambda_hat,
                         const ShootOptions& options) {
  return shoot_singular(dimension, a, lambda_hat, options).zeros;
}

std::vector<double> SingularSpectrum::values() const {
  std::vector<double> out;
  out.reserve(eigenpairs.size());
  for (const auto& e : eigenpairs) out.push_back(e.value);
  return out;
}

SingularSpectrum negative_singular_eigenvalues(int dimension, const LinearizedPotential& a,
                                               int k_max, double tol,
                                               const ShootOptions& options) {
  require_dimension(dimension);
  if (k_max < 1) {
    throw Error(ErrorKind::InvalidArgument, kModule, "k_max must be at least 1",
                {{"k_max", std::to_string(k_max)}});
  }
  SingularSpectrum spectrum;
  spectrum.dimension = dimension;
  spectrum.tolerance = tol;
  if (const auto* sol = a.solution()) spectrum.exponent = sol->exponent();

  const auto angle_at = [&](double lh) {
    return run_prufer({dimension, lh, 0.0, a}, options).result.angle;
  };
  const double angle_zero = angle_at(0.0);
  const int negative = zeros_from_angle(angle_zero);
  if (negative == 0) return spectrum;

  // Lane-Emden potentials never go below -(N-1); anything found there is a
  // numerical failure. Other potentials are bounded by -(||a|| + 1).
  const bool lane_emden = a.solution() != nullptr;
  const double lower = lane_emden ? -(dimension - 1.0) * (1.0 + kSearchMargin)
                                  : -(a.sup_norm() + 1.0);
  const double angle_lower = angle_at(lower);
  if (zeros_from_angle(angle_lower) > 0) {
    if (lane_emden) {
      throw Error(ErrorKind::BoundViolation, kModule,
                  "singular eigenvalue below the -(N-1) bound for a positive radial solution",
                  {{"N", std::to_string(dimension)}, {"window_lower", std::to_string(lower)}});
    }
    throw Error(ErrorKind::BracketNotFound, kModule, "no bracket for the lowest eigenvalue",
                {{"N", std::to_string(dimension)}, {"window_lower", std::to_string(lower)}});
  }

  double lo = lower;
  double f_lo_offset = angle_lower;
  for (int k = 1; k <= std::min(negative, k_max); ++k) {
    const double level = k * kPi;
    const auto f = [&](double lh) { return angle_at(lh) - level; };
    const double value =
        root_in_bracket(f, lo, 0.0, f_lo_offset - level, angle_zero - level, tol);

    RadialEigenpair pair;
    pair.index = k;
    pair.value = value;
    const auto run = run_prufer({dimension, value, 0.0, a}, options, &a.grid(), true);
    pair.r = a.grid();
    pair.psi.resize(pair.r.size());
    const double peak = *std::max_element(run.log_amplitudes.begin(), run.log_amplitudes.end());
    double largest = 0.0;
    for (std::size_t i = 0; i < pair.r.size(); ++i) {
      pair.psi[i] = std::exp(run.log_amplitudes[i] - peak) * std::sin(run.angles[i]);
      largest = std::max(largest, std::abs(pair.psi[i]));
    }
    for (double& v : pair.psi) v /= largest;
    pair.zeros = interior_sign_changes(pair.psi);
    pair.energy = run.energy;
    pair.weight_norm = run.weight_norm;
    pair.weak_residual = std::abs(run.energy - value * run.weight_norm) / run.weight_norm;
    spectrum.eigenpairs.push_back(std::move(pair));

    lo = value;
    f_lo_offset = level;  // angle at the k-th eigenvalue is exactly k*pi
  }
  return spectrum;
}

ShootResult shoot_standard(int dimension, const LinearizedPotential& a, double shift,
                           double lambda, const ShootOptions& options) {
  require_dimension(dimension);
  if (shift < 0.0) {
    throw Error(ErrorKind::InvalidArgument, kModule, "angular shift must be nonnegative",
                {{"shift", std::to_string(shift)}});
  }
  return run_prufer({dimension, -shift, lambda, a}, options).result;
}

int count_negative_standard(int dimension, const LinearizedPotential& a, double shift,
                            const ShootOptions& options) {
  return shoot_standard(dimension, a, shift, 0.0, options).zeros;
}

std::vector<double> standard_radial_eigenvalues(int dimension, const LinearizedPotential& a,
                                                double shift, int count, double tol,
                                                const ShootOptions& options) {
  require_dimension(dimension);
  if (count < 1) {
    throw Error(ErrorKind::InvalidArgument, kModule, "count must be at least 1");
  }
  const auto angle_at = [&](double lambda) {
    return shoot_standard(dimension, a, shift, lambda, options).angle;
  };
  // Upper bracket: grow until `count` eigenvalues lie below.
  double hi = 1.0;
  double angle_hi = angle_at(hi);
  while (zeros_from_angle(angle_hi) < count) {
    hi *= 2.0;
    angle_hi = angle_at(hi);
    if (hi > 1e12) {
      throw Error(ErrorKind::BracketNotFound, kModule, "no upper bracket for standard eigenvalues");
    }
  }
  // Lower bracket: every eigenvalue exceeds -||a||, so walk down from 0
  // until the count vanishes or that bound is reached.
  const double floor_bound = -(a.sup_norm() + 1.0);
  double lo = 0.0;
  double angle_lo = angle_at(lo);
  double step = 1.0;
  while (zeros_from_angle(angle_lo) > 0) {
    lo = std::max(lo - step, floor_bound);
    angle_lo = angle_at(lo);
    step *= 2.0;
    if (lo == floor_bound && zeros_from_angle(angle_lo) > 0) {
      throw Error(ErrorKind::BracketNotFound, kModule, "no lower bracket for standard eigenvalues");
    }
  }

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(count));
  double left = lo;
  double angle_left = angle_lo;
  for (int k = 1; k <= count; ++k) {
    const double level = k * kPi;
    const auto f = [&](double lambda) { return angle_at(lambda) - level; };
    const double value = root_in_bracket(f, left, hi, angle_left - level, angle_hi - level, tol);
    values.push_back(value);
    left = value;
    angle_left = level;
  }
  return values;
}

namespace {

// Dual cell of vertex i on the uniform grid r_i = i h, clipped to [0, 1].
std::pair<double, double> dual_cell(int i, double h) {
  return {std::max(0.0, (i - 0.5) * h), std::min(1.0, (i + 0.5) * h)};
}

double power_integral(double lo, double hi, double k) {
  return (std::pow(hi, k + 1.0) - std::pow(lo, k + 1.0)) / (k + 1.0);
}

double potential_integral(const LinearizedPotential& a, double lo, double hi, double k) {
  static constexpr std::array<double, 4> nodes = {-0.8611363115940526, -0.3399810435848563,
                                                  0.3399810435848563, 0.8611363115940526};
  static constexpr std::array<double, 4> weights = {0.3478548451374538, 0.6521451548625461,
                                                    0.6521451548625461, 0.3478548451374538};
  double total = 0.0;
  const double mid = 0.5 * (lo + hi);
  for (const auto& [x0, x1] : {std::pair{lo, mid}, std::pair{mid, hi}}) {
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      const double s = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * nodes[q];
      total += 0.5 * (x1 - x0) * weights[q] * std::pow(s, k) * a(s);
    }
  }
  return total;
}

// Vertices 0..n-1, Dirichlet at r_n = 1. `shift` multiplies the r^{N-3}
// weight on the stiffness side; `mass_power` selects the eigenvalue weight.
detail::TridiagonalPencil radial_pencil(int dimension, const LinearizedPotential& a, double shift,
                                        double mass_power, int n) {
  const double h = 1.0 / n;
  const double nn = dimension;
  detail::TridiagonalPencil pencil;
  pencil.diagonal.resize(static_cast<std::size_t>(n));
  pencil.mass.resize(static_cast<std::size_t>(n));
  pencil.off_diagonal.resize(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    const auto [lo, hi] = dual_cell(i, h);
    const double left_flux = i == 0 ? 0.0 : std::pow((i - 0.5) * h, nn - 1.0) / h;
    const double right_flux = std::pow((i + 0.5) * h, nn - 1.0) / h;
    double diag = left_flux + right_flux - potential_integral(a, lo, hi, nn - 1.0);
    if (shift != 0.0) diag += shift * power_integral(lo, hi, nn - 3.0);
    pencil.diagonal[static_cast<std::size_t>(i)] = diag;
    pencil.mass[static_cast<std::size_t>(i)] = power_integral(lo, hi, mass_power);
    if (i + 1 < n) pencil.off_diagonal[static_cast<std::size_t>(i)] = -right_flux;
  }
  pencil.validate(kModule);
  return pencil;
}

void require_grid(int grid_size) {
  if (grid_size < 8) {
    throw Error(ErrorKind::InvalidArgument, kModule, "oracle grid needs at least 8 cells",
                {{"grid_size", std::to_string(grid_size)}});
  }
}

}  // namespace

OracleSpectrum dense_oracle_singular(int dimension, const LinearizedPotential& a, int grid_size) {
  require_dimension(dimension);
  require_grid(grid_size);
  const auto pencil = radial_pencil(dimension, a, 0.0, dimension - 3.0, grid_size);
  OracleSpectrum out;
  out.grid_size = grid_size;
  out.h = 1.0 / grid_size;
  const std::size_t negative = pencil.count_below(0.0);
  for (std::size_t k = 0; k < negative; ++k) out.values.push_back(pencil.eigenvalue(k));
  return out;
}

OracleSpectrum dense_oracle_standard(int dimension, const LinearizedPotential& a, double shift,
                                     int grid_size, int count) {
  require_dimension(dimension);
  require_grid(grid_size);
  if (shift < 0.0) {
    throw Error(ErrorKind::InvalidArgument, kModule, "angular shift must be nonnegative");
  }
  const auto pencil = radial_pencil(dimension, a, shift, dimension - 1.0, grid_size);
  OracleSpectrum out;
  out.grid_size = grid_size;
  out.h = 1.0 / grid_size;
  for (int k = 0; k < count; ++k) out.values.push_back(pencil.eigenvalue(static_cast<std::size_t>(k)));
  return out;
}

double hardy_quotient(int dimension, std::span<const double> r, std::span<const double> v) {
  require_dimension(dimension);
  if (r.size() != v.size() || r.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, kModule, "test function needs matching samples");
  }
  if (std::abs(r.back() - 1.0) > 1e-14 || !(r.front() > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "samples must cover (0, 1] and end at r = 1");
  }
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (std::abs(v.back()) > 1e-12 * scale) {
    throw Error(ErrorKind::InvalidArgument, kModule, "test function must vanish at r = 1");
  }
  static constexpr std::array<double, 8> nodes = {
      -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
      0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static constexpr std::array<double, 8> weights = {
      0.1012285362903763, 0.2223810344533745, 0.3137066638252813, 0.3626837833783620,
      0.3626837833783620, 0.3137066638252813, 0.2223810344533745, 0.1012285362903763};
  const double nn = dimension;
  double numerator = 0.0;
  double denominator = power_integral(0.0, r.front(), nn - 3.0) * v.front() * v.front();
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double h = r[i + 1] - r[i];
    if (!(h > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, kModule, "radii must be strictly increasing");
    }
    const double slope = (v[i + 1] - v[i]) / h;
    numerator += slope * slope * power_integral(r[i], r[i + 1], nn - 1.0);
    double cell = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      const double tau = 0.5 * h * (1.0 + nodes[q]);
      const double value = v[i] + slope * tau;
      cell += weights[q] * std::pow(r[i] + tau, nn - 3.0) * value * value;
    }
    denominator += 0.5 * h * cell;
  }
  if (!(denominator > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "test function has zero weighted norm");
  }
  return numerator / denominator;
}

double hardy_quotient(int dimension, const std::function<double(double)>& v,
                      const std::function<double(double)>& dv) {
  require_dimension(dimension);
  const double nn = dimension;
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double numerator = integrator.integrate(
      [&](double r) { return std::pow(r, nn - 1.0) * dv(r) * dv(r); }, 0.0, 1.0);
  const double denominator = integrator.integrate(
      [&](double r) { return std::pow(r, nn - 3.0) * v(r) * v(r); }, 0.0, 1.0);
  if (!(denominator > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "test function has zero weighted norm");
  }
  return numerator / denominator;
}

double first_singular_eigenvalue(int dimension, double exponent, double tol,
                                 const RadialOptions& radial) {
  const auto solution = solve_lane_emden(dimension, exponent, radial);
  const auto spectrum =
      negative_singular_eigenvalues(dimension, linearized_potential(solution), 1, tol);
  if (spectrum.eigenpairs.empty()) {
    throw Error(ErrorKind::NoNegativeEigenvalue, kModule,
                "Lane-Emden potential produced no negative singular eigenvalue",
                {{"N", std::to_string(dimension)}, {"p", std::to_string(exponent)}});
  }
  return spectrum.eigenpairs.front().value;
}

}  // namespace morsecone
