#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "morsecone/radial_solver.hpp"

namespace morsecone {

// Admissible Frobenius exponent of the singular radial equation at r = 0:
// the + root of beta^2 + (N-2) beta + lambda_hat = 0.
struct IndicialData {
  double lambda_hat;
  double beta_plus;
};

IndicialData indicial_exponent(int dimension, double lambda_hat);

struct ShootOptions {
  double relative = 1e-12;
  double absolute = 1e-13;
  double r_start = 1e-6;
};

// Outcome of one shot from r ~ 0 to r = 1. The solution is tracked through
// its Prüfer angle (psi = rho sin(angle), r psi' = rho cos(angle)), so
// overflow never occurs and the zero count is read off the angle.
struct ShootResult {
  double endpoint;       // psi(1), normalised by psi ~ r^beta at the origin
  int zeros;             // sign changes of psi on (r_start, 1)
  double angle;          // Prüfer angle at r = 1
  double log_amplitude;  // log rho at r = 1
};

ShootResult shoot_singular(int dimension, const LinearizedPotential& a, double lambda_hat,
                           const ShootOptions& options = {});

// Number of singular eigenvalues strictly below lambda_hat.
int count_singular_below(int dimension, const LinearizedPotential& a, double lambda_hat,
                         const ShootOptions& options = {});

struct RadialEigenpair {
  int index = 0;  // 1-based
  double value = 0.0;
  int zeros = 0;
  std::vector<double> r;
  std::vector<double> psi;  // max |psi| = 1, positive near the origin
  // Q_a(psi) = ∫ r^{N-1}(psi'^2 - a psi^2) and ∫ r^{N-3} psi^2 for the
  // unnormalised shot; their ratio is the Rayleigh quotient.
  double energy = 0.0;
  double weight_norm = 0.0;
  double weak_residual = 0.0;  // |Q_a(psi) - value ∫ r^{N-3} psi^2| / ∫ r^{N-3} psi^2
};

struct SingularSpectrum {
  int dimension = 3;
  std::optional<double> exponent;  // set when the potential is Lane-Emden
  double tolerance = 1e-9;
  std::vector<RadialEigenpair> eigenpairs;

  std::vector<double> values() const;
  int radial_morse_index() const { return static_cast<int>(eigenpairs.size()); }
};

// Lower end of the search window for Lane-Emden potentials: -(N-1)(1 + margin).
inline constexpr double kSearchMargin = 0.5;

SingularSpectrum negative_singular_eigenvalues(int dimension, const LinearizedPotential& a,
                                               int k_max, double tol = 1e-9,
                                               const ShootOptions& options = {});

// Eigenvalues of -psi'' - (N-1)/r psi' + shift/r^2 psi - a psi = Lambda psi,
// psi(1) = 0, on the H^1-regular branch at the origin.
std::vector<double> standard_radial_eigenvalues(int dimension, const LinearizedPotential& a,
                                                double shift, int count, double tol = 1e-9,
                                                const ShootOptions& options = {});

int count_negative_standard(int dimension, const LinearizedPotential& a, double shift,
                            const ShootOptions& options = {});

ShootResult shoot_standard(int dimension, const LinearizedPotential& a, double shift,
                           double lambda, const ShootOptions& options = {});

// Finite-volume discretisation of the Sturm-Liouville forms on a uniform
// vertex grid with lumped, exactly integrated weights. The resulting
// symmetric-definite tridiagonal pencil is solved by Sturm-sequence
// bisection. Independent of the shooting code; used as a verification oracle.
struct OracleSpectrum {
  int grid_size = 0;
  double h = 0.0;
  std::vector<double> values;
};

// Negative eigenvalues of -(r^{N-1}psi')' - r^{N-1} a psi = L r^{N-3} psi.
OracleSpectrum dense_oracle_singular(int dimension, const LinearizedPotential& a, int grid_size);

// Lowest `count` eigenvalues of the standard problem with angular shift.
OracleSpectrum dense_oracle_standard(int dimension, const LinearizedPotential& a, double shift,
                                     int grid_size, int count);

// (∫ r^{N-1} v'^2) / (∫ r^{N-3} v^2) for the piecewise-linear interpolant of
// the samples, extended by a constant below r.front(). Evaluated exactly; the
// interpolant is itself admissible, so the bound (N-2)^2/4 holds for it.
double hardy_quotient(int dimension, std::span<const double> r, std::span<const double> v);

// Same quotient for a closed-form test function, by double-exponential quadrature.
double hardy_quotient(int dimension, const std::function<double(double)>& v,
                      const std::function<double(double)>& dv);

inline double hardy_constant(int dimension) {
  return 0.25 * (dimension - 2.0) * (dimension - 2.0);
}

// Full radial pipeline: solve, linearise, first singular eigenvalue.
double first_singular_eigenvalue(int dimension, double exponent, double tol = 1e-9,
                                 const RadialOptions& radial = {});

}  // namespace morsecone
