#include "morsecone/morse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "morsecone/detail/parallel.hpp"
#include "morsecone/errors.hpp"

namespace morsecone {

namespace {

constexpr const char* kModule = "morse";

void require_same_dimension(const SingularSpectrum& radial, const CapSpectrum& angular) {
  if (radial.dimension != angular.dimension) {
    throw Error(ErrorKind::InvalidArgument, kModule, "radial and angular dimensions differ",
                {{"radial_N", std::to_string(radial.dimension)},
                 {"angular_N", std::to_string(angular.dimension)}});
  }
}

// Every pair needs lambda_j < -Lambda_hat_1, so the angular list must be
// complete that far.
void require_cutoff(const SingularSpectrum& radial, const CapSpectrum& angular) {
  if (radial.eigenpairs.empty()) return;
  const double needed = -radial.eigenpairs.front().value;
  if (angular.lambda_max < needed) {
    throw Error(ErrorKind::CutoffInsufficient, kModule,
                "angular spectrum not enumerated up to -Lambda_hat_1",
                {{"lambda_max", std::to_string(angular.lambda_max)},
                 {"needed", std::to_string(needed)}});
  }
}

std::string format_tie(int k, int j, double sum) {
  std::ostringstream out;
  out.precision(3);
  out << "near tie Lambda_hat_" << k << " + lambda_" << j << " = " << std::scientific << sum
      << " not counted";
  return out.str();
}

}  // namespace

MorseReport morse_index_direct(const SingularSpectrum& radial, const CapSpectrum& angular,
                               double tie_tolerance) {
  require_same_dimension(radial, angular);
  require_cutoff(radial, angular);
  MorseReport report;
  report.dimension = radial.dimension;
  report.exponent = radial.exponent;
  report.theta0 = angular.theta0;
  report.angular_cutoff = angular.lambda_max;
  report.m_rad = radial.radial_morse_index();
  for (const auto& e : radial.eigenpairs) {
    for (std::size_t j = 0; j < angular.entries.size(); ++j) {
      const auto& entry = angular.entries[j];
      const double sum = e.value + entry.lambda;
      const int jj = static_cast<int>(j);
      if (std::abs(sum) <= tie_tolerance) {
        report.warnings.push_back(format_tie(e.index, jj, sum));
        continue;
      }
      if (sum < 0.0) {
        report.pairs.push_back(
            {e.index, jj, e.value, entry.lambda, sum, entry.multiplicity, entry.ell, entry.mode});
        report.m += entry.multiplicity;
      }
    }
  }
  report.formula_m = morse_index_formula(radial, angular);
  return report;
}

int morse_index_formula(const SingularSpectrum& radial, const CapSpectrum& angular) {
  require_same_dimension(radial, angular);
  require_cutoff(radial, angular);
  const auto values = radial.values();
  const int d = static_cast<int>(values.size());
  if (d == 0) return 0;
  int m = d;
  for (int k = 1; k <= d; ++k) {
    const double upper = -values[static_cast<std::size_t>(k - 1)];
    const double lower = k < d ? -values[static_cast<std::size_t>(k)] : 0.0;
    int bucket = 0;
    for (std::size_t j = 1; j < angular.entries.size(); ++j) {
      const double lambda = angular.entries[j].lambda;
      if (lambda >= lower && lambda < upper) bucket += angular.entries[j].multiplicity;
    }
    m += k * bucket;
  }
  return m;
}

int bubble_morse(const CapSpectrum& angular, int dimension, double tie_tolerance) {
  if (angular.dimension != dimension) {
    throw Error(ErrorKind::InvalidArgument, kModule, "spectrum dimension differs from N",
                {{"N", std::to_string(dimension)},
                 {"spectrum_N", std::to_string(angular.dimension)}});
  }
  const double threshold = dimension - 1.0;
  if (angular.lambda_max < threshold - tie_tolerance) {
    throw Error(ErrorKind::CutoffInsufficient, kModule,
                "angular spectrum not enumerated up to N-1",
                {{"lambda_max", std::to_string(angular.lambda_max)},
                 {"needed", std::to_string(threshold)}});
  }
  return angular.count_nontrivial_below(threshold - tie_tolerance) + 1;
}

CountEquality verify_count_equality(int dimension, const LinearizedPotential& a,
                                    const CapSpectrum& angular) {
  if (angular.dimension != dimension) {
    throw Error(ErrorKind::InvalidArgument, kModule, "spectrum dimension differs from N");
  }
  CountEquality out;
  if (a.identically_zero()) return out;
  out.cutoff = standard_shift_cutoff(dimension, a);
  if (angular.lambda_max < out.cutoff) {
    throw Error(ErrorKind::CutoffInsufficient, kModule,
                "angular spectrum not enumerated up to the standard-count cutoff",
                {{"lambda_max", std::to_string(angular.lambda_max)},
                 {"needed", std::to_string(out.cutoff)}});
  }

  const auto radial = negative_singular_eigenvalues(dimension, a, 64, 1e-11);
  out.k_hat_a = morse_index_direct(radial, angular).m;
  for (const auto& entry : angular.entries) {
    if (entry.lambda >= out.cutoff) break;
    CountEquality::Shift shift;
    shift.lambda = entry.lambda;
    shift.multiplicity = entry.multiplicity;
    shift.standard_negative = count_negative_standard(dimension, a, entry.lambda);
    shift.singular_negative = 0;
    for (double v : radial.values()) {
      if (v + entry.lambda < 0.0) ++shift.singular_negative;
    }
    out.k_a += entry.multiplicity * shift.standard_negative;
    out.shifts.push_back(shift);
  }
  return out;
}

double standard_shift_cutoff(int dimension, const LinearizedPotential& a) {
  // The shifted form grows with the shift, so the count of negative
  // standard eigenvalues is nonincreasing in it and vanishes by ||a||
  // (r <= 1 makes shift/r^2 >= shift).
  if (a.identically_zero() || count_negative_standard(dimension, a, 0.0) == 0) return 0.0;
  double lo = 0.0;
  double hi = a.sup_norm();
  while (hi - lo > 1e-6 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (count_negative_standard(dimension, a, mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

ThresholdSample threshold_sample(int dimension, double lambda1, double p, double eigen_tolerance) {
  const auto solution = solve_lane_emden(dimension, p);
  const auto potential = linearized_potential(solution);
  const auto spectrum = negative_singular_eigenvalues(dimension, potential, 1, eigen_tolerance);
  ThresholdSample sample;
  sample.p = p;
  sample.lambda_hat_1 = spectrum.eigenpairs.empty() ? 0.0 : spectrum.eigenpairs.front().value;
  sample.sum = lambda1 + sample.lambda_hat_1;
  return sample;
}

ThresholdResult symmetry_breaking_threshold(int dimension, const CapSpectrum& angular, double tol,
                                            const ThresholdOptions& options) {
  if (angular.dimension != dimension) {
    throw Error(ErrorKind::InvalidArgument, kModule, "spectrum dimension differs from N");
  }
  if (!(tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "tolerance must be positive",
                {{"tol", std::to_string(tol)}});
  }
  if (options.sweep_points < 2) {
    throw Error(ErrorKind::InvalidArgument, kModule, "sweep needs at least 2 points");
  }
  ThresholdResult result;
  result.dimension = dimension;
  result.theta0 = angular.theta0;
  result.tolerance = tol;
  const double ceiling = dimension - 1.0;
  const auto lambda1 = angular.lambda1();
  if (!lambda1) {
    if (angular.lambda_max < ceiling) {
      throw Error(ErrorKind::CutoffInsufficient, kModule,
                  "no nontrivial eigenvalue listed and cutoff below N-1",
                  {{"lambda_max", std::to_string(angular.lambda_max)}});
    }
    result.lambda1 = angular.lambda_max;
    result.status = "no-breaking-detected";
    return result;
  }
  result.lambda1 = *lambda1;
  if (*lambda1 >= ceiling) {
    result.status = "no-breaking-detected";
    return result;
  }

  const double p_s = critical_exponent(dimension);
  const double span = p_s - 1.0;
  const int n = options.sweep_points;
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = options.edge + (1.0 - 2.0 * options.edge) * i / (n - 1);
    grid[static_cast<std::size_t>(i)] = 1.0 + span * x;
  }
  const auto sweep = detail::parallel_map<ThresholdSample>(
      grid.size(), options.jobs, [&](std::size_t i) {
        return threshold_sample(dimension, *lambda1, grid[i], options.eigen_tolerance);
      });

  std::map<double, ThresholdSample> seen;
  for (const auto& s : sweep) seen[s.p] = s;
  const auto evaluate = [&](double p) {
    auto it = seen.find(p);
    if (it == seen.end()) {
      it = seen.emplace(p, threshold_sample(dimension, *lambda1, p, options.eigen_tolerance)).first;
    }
    return it->second.sum;
  };

  for (std::size_t i = 0; i + 1 < sweep.size(); ++i) {
    const auto& lo = sweep[i];
    const auto& hi = sweep[i + 1];
    if ((lo.sum > 0.0) == (hi.sum > 0.0) || lo.sum == 0.0 || hi.sum == 0.0) continue;
    boost::uintmax_t iterations = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        evaluate, lo.p, hi.p, lo.sum, hi.sum,
        [tol](double u, double v) { return std::abs(v - u) <= tol; }, iterations);
    ThresholdBracket bracket{a, b, evaluate(a), evaluate(b), 0.5 * (a + b)};
    result.brackets.push_back(bracket);
    if (!result.bracket && lo.sum > 0.0) result.bracket = bracket;
  }
  for (const auto& [p, s] : seen) result.samples.push_back(s);

  if (result.bracket) {
    result.status = "threshold-found";
    result.p0 = result.bracket->p0;
  } else {
    result.status = "no-sign-change";
  }
  return result;
}

double reconstruction_residual(const RadialEigenpair& radial, const AngularMode& angular) {
  const double w = radial.weight_norm;
  const double i0 = angular.norm;
  if (!(w > 0.0) || !(i0 > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, kModule, "eigenfunction integrals must be positive");
  }
  // ∫|∇Psi|^2 - a Psi^2 = Q_rad I0 + W I1 against (Lambda_hat + lambda) W I0.
  const double form = radial.energy * i0 + w * angular.energy;
  const double target = (radial.value + angular.lambda) * w * i0;
  return std::abs(form - target) / (w * i0);
}

}  // namespace morsecone
