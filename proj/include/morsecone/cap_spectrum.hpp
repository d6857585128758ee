#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace morsecone {

// One Neumann eigenvalue of -Δ on a domain D of S^{N-1}. `ell` (azimuthal
// order) and `mode` (number of interior zeros of the polar factor) are only
// known for caps.
struct CapEntry {
  double lambda = 0.0;
  std::optional<int> ell;
  std::optional<int> mode;
  int multiplicity = 1;
};

// Entries sorted by lambda. Indexing: the constant mode is lambda_0 = 0,
// lambda_1 is the first nontrivial eigenvalue.
struct CapSpectrum {
  int dimension = 3;
  std::optional<double> theta0;  // empty for external spectra
  // Enumeration is complete up to here; external lists without a stated
  // cutoff are taken as complete (infinity).
  double lambda_max = 0.0;
  std::vector<CapEntry> entries;

  bool external() const noexcept { return !theta0.has_value(); }
  // First nontrivial eigenvalue, if enumerated.
  std::optional<double> lambda1() const;
  // Nontrivial eigenvalues strictly below x, counted with multiplicity.
  int count_nontrivial_below(double x) const;
  // Total number of eigenfunctions listed.
  int total_multiplicity() const;
};

// Dimension of degree-ell spherical harmonics on S^{N-2}.
int multiplicity(int ell, int dimension);

struct AngularShot {
  double defect;         // g'(theta0) for g ~ theta^ell at the pole
  int zeros;             // interior zeros of g on (0, theta0)
  double angle;          // Prüfer angle of (g, dg/ds), s = log tan(theta/2)
  double log_amplitude;
};

AngularShot angular_shoot(int dimension, int ell, double theta0, double lambda);

// Number of eigenvalues of the ell-branch strictly below lambda.
int angular_count_below(int dimension, int ell, double theta0, double lambda);

// m-th (0-based) Neumann eigenvalue of the ell-branch.
double angular_branch_eigenvalue(int dimension, int ell, double theta0, int mode,
                                 double tol = 1e-12);

CapSpectrum cap_neumann_eigenvalues(int dimension, double theta0, double lambda_max,
                                    double tol = 1e-12);

// External spectra: the same JSON document CapSpectrum is written as.
CapSpectrum load_spectrum(std::string_view document);
CapSpectrum load_spectrum_file(const std::string& path);

// Validates a list of (lambda, multiplicity) pairs and tags it external.
CapSpectrum make_external_spectrum(int dimension, const std::vector<std::pair<double, int>>& pairs,
                                   std::optional<double> lambda_max = std::nullopt);

// Polar factor g of a separated eigenfunction g(theta) Y_ell(omega) on the
// cap, sampled on a uniform theta grid with max |g| = 1, together with
//   norm   = ∫ g^2 sin^{N-2},
//   energy = ∫ (g'^2 + ell(ell+N-3) g^2 / sin^2) sin^{N-2}
// over (0, theta0). energy / norm reproduces lambda for an eigenfunction.
struct AngularMode {
  int dimension = 3;
  int ell = 0;
  double theta0 = 0.0;
  double lambda = 0.0;
  int zeros = 0;
  std::vector<double> theta;
  std::vector<double> g;
  double norm = 0.0;
  double energy = 0.0;
};

AngularMode angular_mode(int dimension, int ell, double theta0, double lambda,
                         int samples = 513);

// Eigenvalues of the ell-branch from the finite-volume pencil on a uniform
// theta grid; verification oracle.
struct AngularOracle {
  int grid_size = 0;
  double h = 0.0;
  std::vector<double> values;
};

AngularOracle dense_oracle_angular(int dimension, int ell, double theta0, int grid_size,
                                   int count);

// Area of S^{N-1} and of the cap of half-angle theta0 on it.
double sphere_area(int dimension);
double cap_area(int dimension, double theta0);

}  // namespace morsecone
