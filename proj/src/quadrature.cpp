#include "morsecone/detail/quadrature.hpp"

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "morsecone/errors.hpp"

namespace morsecone::detail {

TailIntegral integrate_with_tail(const std::function<double(double)>& f,
                                 const std::function<double(double)>& tail_bound,
                                 double budget, const char* module) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  TailIntegral out;
  double lo = 0.0;
  double hi = 1.0;
  for (int panel = 0; panel < 200; ++panel) {
    double err = 0.0;
    out.value += GK::integrate(f, lo, hi, 15, 1e-14, &err);
    out.error += err;
    const double bound = tail_bound(hi);
    if (bound < budget) {
      out.truncation = hi;
      out.tail_bound = bound;
      if (out.error > 1e-9 * std::max(1.0, std::abs(out.value))) {
        throw Error(ErrorKind::QuadratureNonconvergence, module,
                    "panel quadrature error above budget",
                    {{"error", std::to_string(out.error)}, {"R", std::to_string(hi)}});
      }
      return out;
    }
    lo = hi;
    hi *= 2.0;
  }
  throw Error(ErrorKind::QuadratureNonconvergence, module, "tail bound never met the budget",
              {{"budget", std::to_string(budget)}});
}

}  // namespace morsecone::detail
