#include "morsecone/detail/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "morsecone/errors.hpp"

namespace morsecone::detail {

std::size_t TridiagonalPencil::count_below(double x) const {
  std::size_t negatives = 0;
  double pivot = 1.0;
  for (std::size_t i = 0; i < diagonal.size(); ++i) {
    double d = diagonal[i] - x * mass[i];
    if (i > 0) d -= off_diagonal[i - 1] * off_diagonal[i - 1] / pivot;
    if (d == 0.0) d = -std::numeric_limits<double>::epsilon() * (std::abs(diagonal[i]) + 1.0);
    if (d < 0.0) ++negatives;
    pivot = d;
  }
  return negatives;
}

std::pair<double, double> TridiagonalPencil::bounds() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t n = diagonal.size();
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(off_diagonal[i - 1]) / std::sqrt(mass[i] * mass[i - 1]);
    if (i + 1 < n) radius += std::abs(off_diagonal[i]) / std::sqrt(mass[i] * mass[i + 1]);
    const double centre = diagonal[i] / mass[i];
    lo = std::min(lo, centre - radius);
    hi = std::max(hi, centre + radius);
  }
  return {lo, hi};
}

double TridiagonalPencil::eigenvalue(std::size_t k, double rel_tol) const {
  auto [lo, hi] = bounds();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= rel_tol * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

void TridiagonalPencil::validate(const char* module) const {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(diagonal.begin(), diagonal.end(), finite) ||
      !std::all_of(off_diagonal.begin(), off_diagonal.end(), finite) ||
      !std::all_of(mass.begin(), mass.end(), finite)) {
    throw Error(ErrorKind::NonFiniteMatrix, module, "non-finite pencil entries");
  }
  if (std::any_of(mass.begin(), mass.end(), [](double m) { return !(m > 0.0); })) {
    throw Error(ErrorKind::NonFiniteMatrix, module, "mass matrix is not positive definite");
  }
}

}  // namespace morsecone::detail
