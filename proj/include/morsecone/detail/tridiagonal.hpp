#pragma once

#include <cstddef>
#include <vector>

namespace morsecone::detail {

// Symmetric tridiagonal stiffness A with positive diagonal mass B.
struct TridiagonalPencil {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;  // A(i, i+1), size n-1
  std::vector<double> mass;

  std::size_t size() const { return diagonal.size(); }

  // Number of generalized eigenvalues strictly below x (Sylvester inertia of A - xB).
  std::size_t count_below(double x) const;

  // Gershgorin interval for B^{-1/2} A B^{-1/2}.
  std::pair<double, double> bounds() const;

  // k-th eigenvalue (0-based) by bisection on the inertia count.
  double eigenvalue(std::size_t k, double rel_tol = 1e-14) const;

  void validate(const char* module) const;
};

}  // namespace morsecone::detail
