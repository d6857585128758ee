#include "morsecone/cap_spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <tuple>
#include <type_traits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <nlohmann/json.hpp>

#include "morsecone/detail/tridiagonal.hpp"
#include "morsecone/errors.hpp"
#include "morsecone/ode.hpp"

namespace morsecone {

namespace {

constexpr const char* kModule = "cap_spectrum";
constexpr double kPi = std::numbers::pi;

void require_dimension(int dimension) {
  if (dimension < 3) {
    throw Error(ErrorKind::InvalidArgument, kModule, "dimension must be at least 3",
                {{"N", std::to_string(dimension)}});
  }
}

void require_cap(double theta0) {
  if (!(theta0 > 0.0 && theta0 < kPi)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "cap half-angle must lie in (0, pi)",
                {{"theta0", std::to_string(theta0)}});
  }
}

void require_ell(int ell) {
  if (ell < 0) {
    throw Error(ErrorKind::InvalidArgument, kModule, "azimuthal order must be nonnegative",
                {{"ell", std::to_string(ell)}});
  }
}

// Neumann levels sit at angle pi/2 + m pi.
int count_from_angle(double angle) {
  return std::max(0, static_cast<int>(std::ceil((angle - 0.5 * kPi) / kPi)));
}

int zeros_from_angle(double angle) {
  return std::max(0, static_cast<int>(std::ceil(angle / kPi)) - 1);
}

// Polar equation in s = log tan(theta/2), where sin theta = sech s and
// cos theta = -tanh s:
//   g_ss + (N-3) cos(theta) g_s + (lambda sin^2 theta - L) g = 0.
// Prüfer variables g = rho sin(phi), g_s = rho cos(phi).
struct AngularPrufer {
  int dimension;
  double lambda;
  double casimir;  // L = ell(ell+N-3)

  // Dim == 4 adds ∫ g^2 sin^{N-1} ds and ∫ (g_s^2 + L g^2) sin^{N-3} ds.
  template <std::size_t Dim>
  void operator()(const std::array<double, Dim>& x, std::array<double, Dim>& dx, double s) const {
    const double sin_t = 1.0 / std::cosh(s);
    const double cos_t = -std::tanh(s);
    const double q = lambda * sin_t * sin_t - casimir;
    const double sp = std::sin(x[0]);
    const double cp = std::cos(x[0]);
    const double n3 = dimension - 3.0;
    dx[0] = cp * cp + n3 * cos_t * sp * cp + q * sp * sp;
    dx[1] = sp * cp * (1.0 - q) - n3 * cos_t * cp * cp;
    if constexpr (Dim == 4) {
      const double rho2 = std::exp(2.0 * x[1]);
      const double w = std::pow(sin_t, n3);
      dx[2] = rho2 * sp * sp * w * sin_t * sin_t;
      dx[3] = rho2 * (cp * cp + casimir * sp * sp) * w;
    }
  }
};

struct AngularRun {
  double angle = 0.0;
  double log_amplitude = 0.0;
  double norm = 0.0;
  double energy = 0.0;
  std::vector<double> g;
};

// |S^{m-1}|, the unit sphere in R^m.
double unit_sphere_area(int m) {
  const double half = 0.5 * m;
  return 2.0 * std::pow(kPi, half) / std::tgamma(half);
}

double s_of(double theta) { return std::log(std::tan(0.5 * theta)); }

AngularRun run_angular(int dimension, int ell, double theta0, double lambda,
                       const std::vector<double>* sample_theta = nullptr,
                       bool with_integrals = false) {
  const double n = dimension;
  const double casimir = ell * (ell + n - 3.0);
  double theta_s = std::min(1e-6, 1e-3 / std::sqrt(std::max(1.0, std::abs(lambda))));
  theta_s = std::min(theta_s, 1e-3 * theta0);
  const double corr = (ell * (n - 2.0) / 3.0 + casimir / 3.0 - lambda) / (4.0 * ell + 2.0 * n - 2.0);

  // g = theta^ell (1 + corr theta^2) near the pole, true normalisation.
  const auto series = [&](double theta) {
    const double rel = 1.0 + corr * theta * theta;
    const double g = std::pow(theta, ell) * rel;
    const double dg = (ell == 0 ? 0.0 : ell * std::pow(theta, ell - 1) * rel) +
                      std::pow(theta, ell) * 2.0 * corr * theta;
    return std::pair{g, dg};
  };
  const auto prufer_state = [&](double theta) {
    const double rel = 1.0 + corr * theta * theta;
    const double ratio = std::sin(theta) * (ell / theta + 2.0 * corr * theta / rel);  // g_s / g
    return std::array<double, 2>{std::atan2(1.0, ratio),
                                 ell * std::log(theta) + std::log(rel) +
                                     0.5 * std::log1p(ratio * ratio)};
  };

  AngularRun run;
  const AngularPrufer problem{dimension, lambda, casimir};
  const auto start = prufer_state(theta_s);
  double s = s_of(theta_s);
  const double s_end = s_of(theta0);

  const auto drive = [&](auto& x) {
    constexpr std::size_t dim = std::tuple_size_v<std::decay_t<decltype(x)>>;
    ode::Integrator<dim> integrator({1e-12, 1e-13}, 1e-2);
    if (sample_theta) {
      run.g.reserve(sample_theta->size());
      for (double theta : *sample_theta) {
        if (theta < theta_s) {
          run.g.push_back(series(theta).first);
          continue;
        }
        const double target = std::min(s_of(theta), s_end);
        if (target > s) integrator.advance(problem, x, s, target);
        run.g.push_back(std::exp(x[1]) * std::sin(x[0]));
      }
    }
    if (s < s_end) integrator.advance(problem, x, s, s_end);
    run.angle = x[0];
    run.log_amplitude = x[1];
  };

  if (with_integrals) {
    const double p0 = 2.0 * ell + n - 1.0;
    const double p1 = 2.0 * ell + n - 3.0;
    const double head0 = std::pow(theta_s, p0) / p0;
    const double head1 = ell == 0 ? 0.0 : (ell * ell + casimir) * std::pow(theta_s, p1) / p1;
    std::array<double, 4> x{start[0], start[1], head0, head1};
    drive(x);
    run.norm = x[2];
    run.energy = x[3];
  } else {
    std::array<double, 2> x{start[0], start[1]};
    drive(x);
  }
  return run;
}

double toms748_root(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                    double f_hi, double tol) {
  boost::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, f_lo, f_hi,
      [tol](double u, double v) { return std::abs(v - u) <= tol * std::max(1.0, std::abs(u)); },
      iterations);
  return 0.5 * (a + b);
}

// Upper bracket above the m-th level of a branch.
std::pair<double, double> upper_bracket(int dimension, int ell, double theta0, int mode,
                                        double start) {
  double hi = std::max(1.0, start);
  double angle = run_angular(dimension, ell, theta0, hi).angle;
  while (count_from_angle(angle) <= mode) {
    hi *= 2.0;
    if (hi > 1e9) {
      throw Error(ErrorKind::BracketNotFound, kModule, "no upper bracket for cap eigenvalue",
                  {{"ell", std::to_string(ell)}, {"mode", std::to_string(mode)}});
    }
    angle = run_angular(dimension, ell, theta0, hi).angle;
  }
  return {hi, angle};
}

double branch_root(int dimension, int ell, double theta0, int mode, double lo, double angle_lo,
                   double hi, double angle_hi, double tol) {
  const double level = 0.5 * kPi + mode * kPi;
  const auto f = [&](double lambda) {
    return run_angular(dimension, ell, theta0, lambda).angle - level;
  };
  return toms748_root(f, lo, hi, angle_lo - level, angle_hi - level, tol);
}

void validate_entries(const CapSpectrum& spectrum) {
  if (spectrum.entries.empty()) {
    throw Error(ErrorKind::SpectrumFormat, kModule, "spectrum has no entries");
  }
  const auto& first = spectrum.entries.front();
  if (first.lambda != 0.0 || first.multiplicity != 1) {
    throw Error(ErrorKind::SpectrumFormat, kModule,
                "spectrum must start with the simple zero mode (0, 1)",
                {{"lambda", std::to_string(first.lambda)},
                 {"multiplicity", std::to_string(first.multiplicity)}});
  }
  double previous = -1.0;
  for (std::size_t i = 0; i < spectrum.entries.size(); ++i) {
    const auto& e = spectrum.entries[i];
    const std::map<std::string, std::string> where{{"index", std::to_string(i)},
                                                   {"lambda", std::to_string(e.lambda)}};
    if (!std::isfinite(e.lambda) || e.lambda < 0.0) {
      throw Error(ErrorKind::SpectrumFormat, kModule, "eigenvalues must be finite and nonnegative",
                  where);
    }
    if (e.multiplicity < 1) {
      throw Error(ErrorKind::SpectrumFormat, kModule, "multiplicities must be at least 1", where);
    }
    if (e.lambda < previous) {
      throw Error(ErrorKind::SpectrumFormat, kModule, "eigenvalues must be sorted ascending",
                  where);
    }
    if (i > 0 && e.lambda == 0.0) {
      throw Error(ErrorKind::SpectrumFormat, kModule, "zero mode must be simple", where);
    }
    previous = e.lambda;
  }
}

}  // namespace

std::optional<double> CapSpectrum::lambda1() const {
  for (const auto& e : entries) {
    if (e.lambda > 0.0) return e.lambda;
  }
  return std::nullopt;
}

int CapSpectrum::count_nontrivial_below(double x) const {
  int count = 0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].lambda < x) count += entries[i].multiplicity;
  }
  return count;
}

int CapSpectrum::total_multiplicity() const {
  int total = 0;
  for (const auto& e : entries) total += e.multiplicity;
  return total;
}

int multiplicity(int ell, int dimension) {
  require_dimension(dimension);
  require_ell(ell);
  if (ell == 0) return 1;
  const auto choose = [](int n, int k) {
    if (n < k || k < 0) return 0.0;
    return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n),
                                                     static_cast<unsigned>(k));
  };
  const double d = choose(ell + dimension - 2, dimension - 2) -
                   choose(ell + dimension - 4, dimension - 2);
  return static_cast<int>(std::lround(d));
}

AngularShot angular_shoot(int dimension, int ell, double theta0, double lambda) {
  require_dimension(dimension);
  require_ell(ell);
  require_cap(theta0);
  const auto run = run_angular(dimension, ell, theta0, lambda);
  AngularShot shot;
  shot.angle = run.angle;
  shot.log_amplitude = run.log_amplitude;
  shot.zeros = zeros_from_angle(run.angle);
  // g_s = rho cos(phi) and dg/dtheta = g_s / sin(theta).
  shot.defect = std::exp(run.log_amplitude) * std::cos(run.angle) / std::sin(theta0);
  if (ell == 0 && lambda == 0.0) shot.defect = 0.0;
  return shot;
}

int angular_count_below(int dimension, int ell, double theta0, double lambda) {
  require_dimension(dimension);
  require_ell(ell);
  require_cap(theta0);
  if (ell == 0 && lambda <= 0.0) return 0;
  return count_from_angle(run_angular(dimension, ell, theta0, lambda).angle);
}

double angular_branch_eigenvalue(int dimension, int ell, double theta0, int mode, double tol) {
  require_dimension(dimension);
  require_ell(ell);
  require_cap(theta0);
  if (mode < 0) {
    throw Error(ErrorKind::InvalidArgument, kModule, "mode index must be nonnegative");
  }
  if (ell == 0 && mode == 0) return 0.0;
  const auto [hi, angle_hi] = upper_bracket(dimension, ell, theta0, mode, 1.0);
  // The branch is positive apart from the constant, so 0 sits below every
  // level that is still being searched for.
  const double angle_lo = run_angular(dimension, ell, theta0, 0.0).angle;
  return branch_root(dimension, ell, theta0, mode, 0.0, angle_lo, hi, angle_hi, tol);
}

CapSpectrum cap_neumann_eigenvalues(int dimension, double theta0, double lambda_max, double tol) {
  require_dimension(dimension);
  require_cap(theta0);
  if (!(lambda_max > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "lambda_max must be positive",
                {{"lambda_max", std::to_string(lambda_max)}});
  }
  CapSpectrum spectrum;
  spectrum.dimension = dimension;
  spectrum.theta0 = theta0;
  spectrum.lambda_max = lambda_max;
  const double ceiling = lambda_max * (1.0 + 1e-10) + 1e-10;

  for (int ell = 0;; ++ell) {
    const double angle_top = run_angular(dimension, ell, theta0, ceiling).angle;
    const int found = count_from_angle(angle_top);
    if (ell > 0 && found == 0) break;
    const int mult = multiplicity(ell, dimension);
    double lo = 0.0;
    double angle_lo = run_angular(dimension, ell, theta0, 0.0).angle;
    for (int m = 0; m < found; ++m) {
      double value = 0.0;
      if (!(ell == 0 && m == 0)) {
        value = branch_root(dimension, ell, theta0, m, lo, angle_lo, ceiling, angle_top, tol);
        lo = value;
        angle_lo = 0.5 * kPi + m * kPi;
      }
      if (value <= ceiling) spectrum.entries.push_back({value, ell, m, mult});
    }
  }
  std::stable_sort(spectrum.entries.begin(), spectrum.entries.end(),
                   [](const CapEntry& x, const CapEntry& y) {
                     return std::tie(x.lambda, *x.ell) < std::tie(y.lambda, *y.ell);
                   });
  return spectrum;
}

CapSpectrum make_external_spectrum(int dimension, const std::vector<std::pair<double, int>>& pairs,
                                   std::optional<double> lambda_max) {
  require_dimension(dimension);
  CapSpectrum spectrum;
  spectrum.dimension = dimension;
  for (const auto& [lambda, mult] : pairs) spectrum.entries.push_back({lambda, {}, {}, mult});
  validate_entries(spectrum);
  spectrum.lambda_max = lambda_max.value_or(std::numeric_limits<double>::infinity());
  return spectrum;
}

CapSpectrum load_spectrum(std::string_view document) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::SpectrumFormat, kModule, std::string("malformed JSON: ") + e.what());
  }
  try {
    CapSpectrum spectrum;
    spectrum.dimension = j.at("N").get<int>();
    require_dimension(spectrum.dimension);
    const auto& tag = j.at("theta0");
    if (tag.is_string()) {
      if (tag.get<std::string>() != "external") {
        throw Error(ErrorKind::SpectrumFormat, kModule,
                    "theta0 must be a number or the string \"external\"");
      }
    } else {
      spectrum.theta0 = tag.get<double>();
      require_cap(*spectrum.theta0);
    }
    for (const auto& e : j.at("entries")) {
      CapEntry entry;
      entry.lambda = e.at("lambda").get<double>();
      entry.multiplicity = e.at("multiplicity").get<int>();
      if (e.contains("ell")) entry.ell = e.at("ell").get<int>();
      if (e.contains("mode")) entry.mode = e.at("mode").get<int>();
      spectrum.entries.push_back(entry);
    }
    validate_entries(spectrum);
    spectrum.lambda_max = std::numeric_limits<double>::infinity();
    if (j.contains("lambda_max") && !j.at("lambda_max").is_null()) {
      spectrum.lambda_max = j.at("lambda_max").get<double>();
    }
    return spectrum;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SpectrumFormat, kModule, std::string("bad spectrum document: ") + e.what());
  }
}

CapSpectrum load_spectrum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::Io, kModule, "cannot open spectrum file", {{"path", path}});
  }
  std::ostringstream text;
  text << in.rdbuf();
  return load_spectrum(text.str());
}

AngularMode angular_mode(int dimension, int ell, double theta0, double lambda, int samples) {
  require_dimension(dimension);
  require_ell(ell);
  require_cap(theta0);
  if (samples < 3) {
    throw Error(ErrorKind::InvalidArgument, kModule, "need at least 3 samples");
  }
  AngularMode mode;
  mode.dimension = dimension;
  mode.ell = ell;
  mode.theta0 = theta0;
  mode.lambda = lambda;
  mode.theta.resize(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) mode.theta[i] = theta0 * i / (samples - 1);
  mode.theta.back() = theta0;
  const auto run = run_angular(dimension, ell, theta0, lambda, &mode.theta, true);
  mode.g = run.g;
  double largest = 0.0;
  for (double v : mode.g) largest = std::max(largest, std::abs(v));
  for (double& v : mode.g) v /= largest;
  mode.norm = run.norm / (largest * largest);
  mode.energy = run.energy / (largest * largest);
  int last = 0;
  for (double v : mode.g) {
    if (std::abs(v) < 1e-9) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (last != 0 && sign != last) ++mode.zeros;
    last = sign;
  }
  return mode;
}

AngularOracle dense_oracle_angular(int dimension, int ell, double theta0, int grid_size,
                                   int count) {
  require_dimension(dimension);
  require_ell(ell);
  require_cap(theta0);
  if (grid_size < 8 || count < 1) {
    throw Error(ErrorKind::InvalidArgument, kModule, "oracle needs grid_size >= 8 and count >= 1");
  }
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  const double n = dimension;
  const double casimir = ell * (ell + n - 3.0);
  const double h = theta0 / grid_size;
  const auto weight_integral = [](double lo, double hi, double power) {
    return Gauss::integrate([power](double t) { return std::pow(std::sin(t), power); }, lo, hi);
  };
  // P1 elements on vertices 0..grid_size; the pole is dropped for ell >= 1
  // (g(0) = 0), Neumann at theta0 is natural. Stiffness and the ell term are
  // integrated exactly per element, the mass is lumped onto dual cells. The
  // ell term is kept consistent: lumping it against the 1/sin weight of
  // N = 3 would leave an h^2 log h error.
  const int first = ell == 0 ? 0 : 1;
  const std::size_t size = static_cast<std::size_t>(grid_size - first + 1);
  detail::TridiagonalPencil pencil;
  pencil.diagonal.assign(size, 0.0);
  pencil.off_diagonal.assign(size - 1, 0.0);
  pencil.mass.assign(size, 0.0);
  for (int e = 0; e < grid_size; ++e) {
    const double lo = e * h;
    const double hi = (e + 1) * h;
    const double stiffness = weight_integral(lo, hi, n - 2.0) / (h * h);
    double left_left = stiffness, left_right = -stiffness, right_right = stiffness;
    if (casimir != 0.0) {
      const auto moment = [&](auto shape) {
        return casimir * Gauss::integrate(
                             [&](double t) { return std::pow(std::sin(t), n - 4.0) * shape((t - lo) / h); },
                             lo, hi);
      };
      left_left += moment([](double x) { return (1.0 - x) * (1.0 - x); });
      left_right += moment([](double x) { return x * (1.0 - x); });
      right_right += moment([](double x) { return x * x; });
    }
    const double mid = std::min(theta0, lo + 0.5 * h);
    const bool has_left = e >= first;
    const std::size_t r = static_cast<std::size_t>(e + 1 - first);
    pencil.diagonal[r] += right_right;
    pencil.mass[r] += weight_integral(mid, hi, n - 2.0);
    if (has_left) {
      const std::size_t l = r - 1;
      pencil.diagonal[l] += left_left;
      pencil.off_diagonal[l] += left_right;
      pencil.mass[l] += weight_integral(lo, mid, n - 2.0);
    }
  }
  pencil.validate(kModule);
  AngularOracle out;
  out.grid_size = grid_size;
  out.h = h;
  for (int k = 0; k < count; ++k) out.values.push_back(pencil.eigenvalue(static_cast<std::size_t>(k)));
  if (ell == 0) out.values.front() = std::max(0.0, out.values.front());
  return out;
}

double sphere_area(int dimension) {
  require_dimension(dimension);
  return unit_sphere_area(dimension);
}

double cap_area(int dimension, double theta0) {
  require_dimension(dimension);
  require_cap(theta0);
  // ∫_0^theta sin^k = B(sin^2 theta; (k+1)/2, 1/2) / 2 for theta <= pi/2.
  const double k = dimension - 2.0;
  const double a = 0.5 * (k + 1.0);
  const auto partial = [&](double theta) {
    const double x = std::sin(theta) * std::sin(theta);
    return 0.5 * boost::math::beta(a, 0.5, x);
  };
  const double full_half = 0.5 * boost::math::beta(a, 0.5);
  const double polar = theta0 <= 0.5 * kPi ? partial(theta0) : 2.0 * full_half - partial(kPi - theta0);
  return unit_sphere_area(dimension - 1) * polar;
}

}  // namespace morsecone
