#pragma once

#include <functional>

namespace morsecone::detail {

struct TailIntegral {
  double value = 0.0;
  double error = 0.0;       // summed panel error estimates
  double truncation = 0.0;  // radius where the integral was cut
  double tail_bound = 0.0;  // bound on the discarded ∫_R^inf |f|
};

// ∫_0^inf f over doubling panels [0,1], [1,2], [2,4], ... with adaptive
// Gauss-Kronrod on each, stopping once tail_bound(R) < budget.
TailIntegral integrate_with_tail(const std::function<double(double)>& f,
                                 const std::function<double(double)>& tail_bound,
                                 double budget, const char* module);

}  // namespace morsecone::detail
