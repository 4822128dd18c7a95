#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ethlab/linalg.hpp"

namespace ethlab {

/// Wigner surmise (pi/2) s exp(-pi s^2 / 4). Throws ParameterOutOfRange
/// for s < 0.
double wigner_surmise(double s);

enum class BandMode { Energy, Index };

/// Integrable diagonal spectrum plus a banded real-symmetric gaussian
/// perturbation with entry scale epsilon * exp(-band_beta * separation),
/// where separation is |E0_i - E0_j| (Energy) or |i - j| (Index).
struct DeutschModel {
  RVector h0;
  double epsilon = 0.0;
  double band_beta = 1.0;
  std::uint64_t seed = 0;
  std::size_t realizations = 1;
  BandMode band_mode = BandMode::Energy;

  std::size_t dim() const { return static_cast<std::size_t>(h0.size()); }
  void validate() const;
};

RVector equally_spaced_levels(std::size_t n, double spacing = 1.0);

/// Sorted i.i.d. uniform levels on [0, n * spacing), so the mean spacing is
/// `spacing` (integrable-like, Poissonian statistics).
RVector poisson_levels(std::size_t n, std::uint64_t seed, double spacing = 1.0);

/// Counter-based normal deviate: a pure function of (seed, stream, i, j).
double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t i,
                      std::uint64_t j);

/// One realization of H = diag(h0) + H1; identical (seed, index) give
/// bit-identical matrices.
RMatrix sample_model(const DeutschModel& model, std::size_t realization);

struct LocalizationProfile {
  std::vector<long> offsets;      ///< j - i from -(n-1) to n-1
  std::vector<double> mean_c2;    ///< row-averaged <c_{i,i+offset}^2>_r
  RMatrix mean_c2_matrix;         ///< <c_ij^2>_r, c_ij = <E_i|E0_j>
  std::vector<double> row_sums;
  double max_row_deviation = 0.0;  ///< max_i |sum_j <c_ij^2> - 1|
  double offset_zero_mass = 0.0;   ///< mean over i of <c_ii^2>
};

/// Ensemble-averaged eigenvector weights. `threads` > 1 fans realizations
/// out; results do not depend on the thread count.
LocalizationProfile localization_profile(const DeutschModel& model, unsigned threads = 1);

struct ExpectationPrediction {
  RVector predicted;  ///< sum_k <c_ik^2>_r O0_kk
  RVector direct;     ///< realization mean of <E_i|O|E_i>
  RVector variance;   ///< sample variance of <E_i|O|E_i> across realizations
  RVector standard_error;
  double max_abs_deviation = 0.0;
  LocalizationProfile profile;
};

/// O given by its diagonal in the integrable basis.
ExpectationPrediction expectation_prediction(const DeutschModel& model,
                                             std::span<const double> o_diagonal,
                                             unsigned threads = 1);

/// O given as a full real-symmetric matrix in the integrable basis. The
/// direct values keep the cross terms c_ik c_il O_kl; the prediction only
/// uses the diagonal.
ExpectationPrediction expectation_prediction(const DeutschModel& model,
                                             const RMatrix& o_integrable,
                                             unsigned threads = 1);

/// Eigenvalues of realization `realization`, ascending.
RVector sample_spectrum(const DeutschModel& model, std::size_t realization);

/// Real symmetric GOE-style matrix: i.i.d. N(0,1) entries, symmetrized as
/// (A + A^T) / 2.
RMatrix sample_goe(std::size_t n, std::uint64_t seed, std::uint64_t stream);

}  // namespace ethlab
