#pragma once

#include <optional>
#include <vector>

#include "morsecone/cap_spectrum.hpp"

namespace morsecone {

// Standard: U = alpha_N (lambda / (lambda^2 + r^2))^{(N-2)/2},
//           alpha_N = (N(N-2))^{(N-2)/4}.
// UnitPeak: U = (N(N-2) / (N(N-2) + r^2))^{(N-2)/2}, U(0) = 1; the standard
//           family at lambda = sqrt(N(N-2)).
enum class BubbleNormalization { Standard, UnitPeak };

// Radial bubble centred at the vertex; solves -ΔU = U^{p_S} in R^N.
struct Bubble {
  int dimension = 3;
  double scale = 1.0;  // lambda, ignored for UnitPeak
  BubbleNormalization normalization = BubbleNormalization::Standard;

  double value(double r) const;
  double derivative(double r) const;
  double second_derivative(double r) const;
  // Radial Laplacian U'' + (N-1)/r U', from the closed-form derivatives.
  double laplacian(double r) const;
  // p_S U^{p_S - 1}.
  double potential(double r) const;
  // -ΔU - U^{p_S}.
  double residual(double r) const;
};

double bubble_value(int dimension, double scale, double r,
                    BubbleNormalization normalization = BubbleNormalization::Standard);
double bubble_potential(int dimension, double scale, double r,
                        BubbleNormalization normalization = BubbleNormalization::Standard);

// eta(r) = r / (1 + r^2/(N(N-2)))^{N/2}.
double eta_value(int dimension, double r);
double eta_derivative(int dimension, double r);

// -eta'' - (N-1)/r eta' - V eta + (N-1) eta / r^2 by 8th-order central
// differences with step 0.01 max(r, 1), V the unit-peak bubble potential. With
// include_inverse_square = false the last term is dropped.
double eta_residual(int dimension, double r, bool include_inverse_square = true);

// (∫ r^{N-1}(eta'^2 - V eta^2)) / (∫ r^{N-3} eta^2) with truncation and tail bounds.
struct EtaQuotient {
  double numerator = 0.0;
  double denominator = 0.0;
  double quotient = 0.0;
  double error_bound = 0.0;  // quadrature estimates plus discarded tails
};

EtaQuotient eta_rayleigh_quotient(int dimension);

struct LimitRow {
  double p = 0.0;
  double lambda_hat_1 = 0.0;
  double gap = 0.0;           // lambda_hat_1 + (N-1)
  double vp_diagnostic = 0.0; // sup_{rho <= ball} |V_p - V|
};

struct LimitTable {
  int dimension = 3;
  double tolerance = 1e-10;
  double ball_radius = 5.0;
  std::vector<LimitRow> rows;
};

LimitTable limit_study(int dimension, const std::vector<double>& exponents, double tol = 1e-10,
                       int jobs = 1, double ball_radius = 5.0);

// V_p(rho) = p v(rho)^{p-1}, v the u(0) = 1 Lane-Emden profile (zero past its
// first zero), against V = p_S U^{p_S-1}: sup over rho in [0, ball_radius].
double rescaled_potential_gap(int dimension, double exponent, double ball_radius = 5.0);

// Q_U(eta(|x|) phi(x/|x|)) on the cone over the cap, phi a Neumann
// eigenfunction of the ell-branch with eigenvalue lambda. The polar factor
// is normalised with mean square one over S^{N-2}, so phi = 1 gives |D|.
struct Step1Form {
  double lambda = 0.0;
  double radial_energy = 0.0;  // ∫ r^{N-1}(eta'^2 - V eta^2)
  double radial_weight = 0.0;  // ∫ r^{N-3} eta^2
  double angular_norm = 0.0;   // ∫_D phi^2
  double angular_energy = 0.0; // ∫_D |∇phi|^2
  double value = 0.0;          // Q_U(psi)
};

Step1Form step1_test_function_form(int dimension, int ell, double theta0, double lambda);

// Same with only the eigenvalue known (external D), per unit ∫_D phi^2.
Step1Form step1_test_function_form(int dimension, double lambda);

// (1 - p_S) ∫_{Σ_D} U^{2*} for the cone over a domain of the given area.
double q_u_on_bubble_area(int dimension, double area);
double q_u_on_bubble(int dimension, double theta0);

}  // namespace morsecone
