#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ethlab/hamiltonian.hpp"
#include "ethlab/linalg.hpp"
#include "ethlab/spectral.hpp"

namespace ethlab {

struct EnergyValue {
  double energy = 0.0;
  double value = 0.0;
};

/// (E_i, <E_i|O|E_i>) for every eigenstate. The imaginary part must stay
/// below 1e-10 (DimensionMismatch / Error otherwise) and is dropped.
std::vector<EnergyValue> eigenstate_expectations(const EigenSystem& es, const OperatorMatrix& o);

/// O expressed in the eigenbasis: V^+ O V.
CMatrix to_eigenbasis(const EigenSystem& es, const OperatorMatrix& o);

struct MicroWindow {
  enum class Mode { FixedCount, FixedWidth };
  Mode mode = Mode::FixedCount;
  std::size_t count = 50;  ///< FixedCount: number of nearest states
  double width = 0.0;      ///< FixedWidth: Delta E of the shell [E, E + Delta E]

  static MicroWindow fixed_count(std::size_t m) { return {Mode::FixedCount, m, 0.0}; }
  static MicroWindow fixed_width(double w) { return {Mode::FixedWidth, 0, w}; }
};

/// Mean of O_ii over the shell [E, E + width] (FixedWidth) or over the
/// `count` states closest in energy to E (FixedCount). EmptyWindow if no
/// state is selected.
double microcanonical_average(std::span<const EnergyValue> pairs, double energy,
                              const MicroWindow& window);

/// Boltzmann average sum exp(-beta E) O / Z, computed with energies shifted
/// by E_min. Throws EmptyWindow on empty input.
double canonical_average(std::span<const EnergyValue> pairs, double beta);

/// <H>_beta for a spectrum.
double canonical_energy(std::span<const double> energies, double beta);

/// S(beta) = beta (<H> - F) = beta <H> + ln Z.
double canonical_entropy(std::span<const double> energies, double beta);

/// Default search limit for the inverse temperature: 1e4 / spectral width.
double default_beta_max(std::span<const double> energies);

/// beta >= 0 with <H>_beta = E_target by bisection, to 1e-8 * width.
/// ParameterOutOfRange when E_target is not attainable on [0, beta_max].
double temperature_of_energy(std::span<const double> energies, double target,
                             std::optional<double> beta_max = std::nullopt);

/// Same search on [-beta_max, beta_max]; states above the infinite
/// temperature energy map to negative beta.
double signed_temperature_of_energy(std::span<const double> energies, double target,
                                    std::optional<double> beta_max = std::nullopt);

struct DiagonalOptions {
  MicroWindow window = MicroWindow::fixed_count(50);
  double edge_fraction = 0.1;     ///< dropped at each end of the spectrum
  std::size_t min_states = 20;    ///< per window
  double central_fraction = 0.5;  ///< part of the spectrum used for central_variance
  double degeneracy_tolerance = 1e-12;  ///< relative to spectral width
};

struct EthWindow {
  std::size_t id = 0;
  double energy_lo = 0.0;
  double energy_hi = 0.0;
  double energy_mean = 0.0;
  std::size_t count = 0;
  double micro_average = 0.0;
  double delta_mean = 0.0;
  double delta_variance = 0.0;
  double entropy = 0.0;  ///< ln(count)
  bool central = false;
};

struct EthDiagonalReport {
  std::vector<EnergyValue> pairs;  ///< sorted by energy
  std::vector<long> window_id;     ///< per pair, -1 when excluded
  std::vector<double> delta;       ///< per pair, NaN when excluded
  std::vector<double> micro;       ///< per pair window average, NaN when excluded
  std::vector<EthWindow> windows;
  std::vector<EnergyValue> micro_curve;  ///< (window mean energy, micro average)
  DiagonalOptions options;
  std::size_t degenerate_excluded = 0;
  std::size_t edge_excluded = 0;
  double central_variance = 0.0;  ///< mean Delta^2 over central windows
  std::size_t central_count = 0;
  double max_abs_window_mean = 0.0;
};

/// Partitions the retained spectrum into consecutive microcanonical windows
/// and reports Delta_i = O_ii - <O>_window. Windows with fewer than
/// `min_states` states are merged into a neighbour (FixedCount) or dropped
/// (FixedWidth); InsufficientStates when no window survives.
EthDiagonalReport diagonal_fluctuations(std::span<const EnergyValue> pairs,
                                        const DiagonalOptions& options = {});

struct OmegaBins {
  std::size_t count = 30;
  double omega_max = 0.0;  ///< 0 picks the largest |omega| found
  std::size_t min_pairs = 10;
};

struct EnergyWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// Window of `fraction` of the states centred on the middle of the spectrum.
EnergyWindow central_energy_window(const RVector& energies, double fraction);

struct EthOffdiagReport {
  std::vector<double> omega_edges;
  std::vector<double> mean_abs2;
  std::vector<std::size_t> pair_count;
  std::vector<double> f_estimate;
  std::vector<bool> flagged;  ///< bin with fewer than min_pairs pairs
  double diag_variance_ref = 0.0;
  double diag_mean_ref = 0.0;
  std::size_t states_in_window = 0;
  std::size_t total_pairs = 0;
  double small_omega_decile_mean = 0.0;
  double large_omega_decile_mean = 0.0;

  std::vector<double> omega_centers() const;
};

/// |O_ij|^2 statistics for pairs i < j whose mean energy lies in `window`,
/// binned by omega = E_j - E_i >= 0. f = mean|O_ij|^2 / <Delta_i^2> where the
/// reference variance is taken over the diagonal elements inside the window.
EthOffdiagReport offdiagonal_statistics(const EigenSystem& es, const OperatorMatrix& o,
                                        const EnergyWindow& window, const OmegaBins& bins);

struct SumRuleResult {
  std::vector<double> residuals;
  double bound = 0.0;  ///< 1e-9 * ||A||_max^2 * dim
  double max_residual = 0.0;
  bool ok() const { return max_residual < bound; }
};

/// Per eigenstate | <E_i|(A - A_ii)^2|E_i> - sum_{j != i} |A_ij|^2 |, the
/// left side from A applied to the eigenvector, the right from V^+ A V.
SumRuleResult sum_rule_check(const EigenSystem& es, const OperatorMatrix& a);

}  // namespace ethlab
