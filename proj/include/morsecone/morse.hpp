#pragma once

#include <optional>
#include <string>
#include <vector>

#include "morsecone/cap_spectrum.hpp"
#include "morsecone/radial_solver.hpp"
#include "morsecone/singular_spectrum.hpp"

namespace morsecone {

// One negative direction Lambda_hat_k + lambda_j < 0 of the separated
// linearized operator; `multiplicity` copies of it.
struct MorsePair {
  int k = 1;  // radial index, 1-based
  int j = 0;  // angular index, lambda_0 = 0
  double lambda_hat = 0.0;
  double lambda = 0.0;
  double sum = 0.0;
  int multiplicity = 1;
  std::optional<int> ell;
  std::optional<int> mode;
};

struct MorseReport {
  int dimension = 3;
  std::optional<double> exponent;
  std::optional<double> theta0;  // empty for external spectra
  double angular_cutoff = 0.0;
  int m_rad = 0;
  int m = 0;
  int formula_m = 0;
  std::vector<MorsePair> pairs;
  // Near-ties |Lambda_hat_k + lambda_j| <= tie_tolerance: not counted, but reported.
  std::vector<std::string> warnings;
};

MorseReport morse_index_direct(const SingularSpectrum& radial, const CapSpectrum& angular,
                               double tie_tolerance = 1e-9);

// Closed-form count: d + sum_k k #{j >= 1 : -Lambda_hat_{k+1} <= lambda_j < -Lambda_hat_k},
// Lambda_hat_{d+1} := 0.
int morse_index_formula(const SingularSpectrum& radial, const CapSpectrum& angular);

// Morse index of the bubble on the cone over D: #{j >= 1 : lambda_j < N-1} + 1.
// Eigenvalues within tie_tolerance of N-1 count as equal to it.
int bubble_morse(const CapSpectrum& angular, int dimension, double tie_tolerance = 1e-9);

// Smallest shift (to 1e-6 relative) from which the standard radial problem
// has no negative eigenvalue; at most ||a||.
double standard_shift_cutoff(int dimension, const LinearizedPotential& a);

struct CountEquality {
  int k_a = 0;      // negative standard eigenvalues, summed over the angular shifts
  int k_hat_a = 0;  // pairs with Lambda_hat_k + lambda_j < 0
  struct Shift {
    double lambda;
    int multiplicity;
    int standard_negative;
    int singular_negative;
  };
  std::vector<Shift> shifts;  // per angular entry below the cutoff
  double cutoff = 0.0;  // angular enumeration needed
  bool equal() const noexcept { return k_a == k_hat_a; }
};

CountEquality verify_count_equality(int dimension, const LinearizedPotential& a,
                                    const CapSpectrum& angular);

struct ThresholdSample {
  double p = 0.0;
  double lambda_hat_1 = 0.0;  // first singular radial eigenvalue, 0 when none is negative
  double sum = 0.0;           // lambda_1(D) + lambda_hat_1
};

struct ThresholdBracket {
  double p_lo = 0.0;
  double p_hi = 0.0;
  double sum_lo = 0.0;
  double sum_hi = 0.0;
  double p0 = 0.0;
};

struct ThresholdResult {
  // "threshold-found", "no-breaking-detected" or "no-sign-change".
  std::string status;
  int dimension = 3;
  std::optional<double> theta0;
  double lambda1 = 0.0;
  double tolerance = 0.0;
  std::optional<double> p0;
  std::optional<ThresholdBracket> bracket;  // the first + to - crossing
  std::vector<ThresholdBracket> brackets;   // every crossing seen by the sweep
  std::vector<ThresholdSample> samples;     // sorted by p
};

struct ThresholdOptions {
  int sweep_points = 16;
  int jobs = 1;
  double edge = 1e-3;  // sweep stays in (1 + edge, p_S - edge) relative to p_S - 1
  double eigen_tolerance = 1e-10;
};

// lambda_1(D) + Lambda_hat_1^rad(p) for the Lane-Emden solution at p.
ThresholdSample threshold_sample(int dimension, double lambda1, double p, double eigen_tolerance);

ThresholdResult symmetry_breaking_threshold(int dimension, const CapSpectrum& angular, double tol,
                                            const ThresholdOptions& options = {});

// Weak-form defect of psi_k(r) Y(omega) as an eigenfunction of the singular
// problem on the sector with eigenvalue Lambda_hat_k + lambda, relative to
// its weighted norm ∫ Psi^2 / |x|^2.
double reconstruction_residual(const RadialEigenpair& radial, const AngularMode& angular);

}  // namespace morsecone
