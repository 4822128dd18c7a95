#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ethlab/basis.hpp"
#include "ethlab/hamiltonian.hpp"
#include "ethlab/linalg.hpp"

namespace ethlab {

/// Ascending eigenvalues; column i of `vectors` belongs to `energies[i]`.
struct EigenSystem {
  SectorTag tag;
  RVector energies;
  CMatrix vectors;

  std::size_t dim() const { return static_cast<std::size_t>(energies.size()); }
};

struct EigenResiduals {
  double orthonormality = 0.0;  ///< max |V^+ V - I|
  double max_residual = 0.0;    ///< max_i ||H v_i - E_i v_i||_2
  double residual_bound = 0.0;  ///< 1e-10 * max(1, ||H||_max * dim)
};

/// Full eigendecomposition. Checks the residual and orthonormality bounds
/// and throws ConvergenceFailure (naming dim and sector) when they fail.
EigenSystem diagonalize(const OperatorMatrix& m);

/// Eigenvalues only, ascending.
RVector eigenvalues(const OperatorMatrix& m);

EigenResiduals eigen_residuals(const EigenSystem& es, const OperatorMatrix& m);

struct UnfoldOptions {
  int degree = 7;
  double trim_fraction = 0.2;  ///< total fraction dropped, split between both edges
};

struct UnfoldedSpectrum {
  std::vector<double> levels;  ///< N(E_i) for the retained window
  std::size_t first = 0;       ///< index of the first retained level in the input
  RVector coefficients;        ///< polynomial in x = (E - center) / half_width
  double center = 0.0;
  double half_width = 1.0;

  double staircase(double energy) const;
};

/// Maps sorted energies onto a fitted smooth staircase N(E). Requires at
/// least 50 levels (TooFewLevels otherwise).
UnfoldedSpectrum unfold(std::span<const double> energies, const UnfoldOptions& options = {});

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  std::vector<double> densities;

  std::vector<double> centers() const;
};

struct SpacingReport {
  std::vector<double> unfolded_spacings;
  Histogram histogram;
  std::vector<double> wigner_density_at_centers;
  std::vector<double> poisson_density_at_centers;
  double mean_spacing = 0.0;
  double mean_r = 0.0;
  std::size_t r_count = 0;
  double ks_wigner = 0.0;
  double ks_poisson = 0.0;
  std::size_t degenerate_spacings = 0;  ///< levels merged into a degenerate multiplet
};

struct SpacingOptions {
  int bins = 40;
  double trim_fraction = 0.2;
  int degree = 7;
  double degeneracy_tolerance = 1e-12;  ///< relative to spectral width
};

SpacingReport spacing_report(std::span<const double> energies, const SpacingOptions& options);

inline SpacingReport spacing_report(std::span<const double> energies, int bins,
                                    double trim_fraction) {
  SpacingOptions options;
  options.bins = bins;
  options.trim_fraction = trim_fraction;
  return spacing_report(energies, options);
}

/// Mean of min(d_i, d_{i+1}) / max(d_i, d_{i+1}) over consecutive raw
/// spacings of sorted levels; spacings below `min_spacing` are dropped first.
double mean_spacing_ratio(std::span<const double> sorted_levels, double min_spacing = 0.0,
                          std::size_t* count = nullptr);

/// sup_s |F_empirical(s) - cdf(s)|
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

double wigner_cdf(double s);
double poisson_density(double s);
double poisson_cdf(double s);

}  // namespace ethlab
