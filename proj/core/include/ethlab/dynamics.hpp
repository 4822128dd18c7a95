#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "ethlab/basis.hpp"
#include "ethlab/eth.hpp"
#include "ethlab/hamiltonian.hpp"
#include "ethlab/linalg.hpp"
#include "ethlab/spectral.hpp"

namespace ethlab {

/// Normalized amplitudes in the momentum basis of one sector.
struct StateVector {
  SectorTag tag;
  CVector amplitudes;
};

/// c_E = <E|psi0> for every eigenstate, so that sum |c_E|^2 = 1.
CVector expand_in_eigenbasis(const StateVector& psi0, const EigenSystem& es);

/// c_E(t) = c_E exp(-i E t), hbar = 1.
CVector evolve(const CVector& coefficients, const RVector& energies, double t);

/// <psi|O|psi> for eigenbasis coefficients and O already in the eigenbasis.
double expectation(const CVector& coefficients, const CMatrix& o_eigenbasis);

/// sum_E |c_E|^2 O_EE
double diagonal_ensemble(const CVector& coefficients, std::span<const double> o_diagonal);

/// 1 / sum_E |c_E|^4
double participation_ratio(const CVector& coefficients);

/// Piecewise linear <O>_micro(E) through sample points sorted by energy.
struct MicroCurve {
  std::vector<double> energy;
  std::vector<double> value;

  static MicroCurve from_samples(std::span<const EnergyValue> samples);
  /// One sample per eigenstate: its energy and the average of its window.
  /// Degenerate levels borrow the nearest window; trimmed edges are left out.
  static MicroCurve per_state(const EthDiagonalReport& report);

  double front() const { return energy.front(); }
  double back() const { return energy.back(); }
  double at(double e) const;
};

/// sum_E |c_E|^2 <O>_micro(E). SupportNotCovered when more than
/// `weight_tolerance` of the weight sits outside the curve's energy range.
double eth_prediction(const CVector& coefficients, const RVector& energies,
                      const MicroCurve& curve, double weight_tolerance = 1e-10);

/// Log-spaced grid from t_min to t_max inclusive.
std::vector<double> log_time_grid(double t_min = 0.1, double t_max = 1e4,
                                  std::size_t points = 400);

namespace initial {
/// Ground state of the sector Hamiltonian with these parameters.
struct GroundState {
  HcbParams params;
};
/// Occupation state projected into the sector and renormalized.
struct BasisState {
  Bits bits = 0;
};
/// Explicit momentum-basis amplitudes (renormalized).
struct Amplitudes {
  CVector values;
};
}  // namespace initial

using InitialState = std::variant<initial::GroundState, initial::BasisState, initial::Amplitudes>;

StateVector prepare_state(const InitialState& init, const MomentumSector& sector);

struct QuenchTrace {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> running_average;  ///< (1/t) int_0^t <O>(s) ds, exact
  std::vector<double> energies;         ///< <H_post>(t), for conservation checks
  std::vector<double> norms;
  double diagonal_ensemble_value = 0.0;
  double eth_prediction_value = 0.0;
  double participation_ratio = 0.0;
  double initial_energy = 0.0;
  double max_imaginary = 0.0;  ///< largest imaginary residue of <O>(t)
};

struct QuenchOptions {
  DiagonalOptions micro = {MicroWindow::fixed_count(50), 0.0, 10, 0.5, 1e-12};
};

/// Evolution under a diagonalized Hamiltonian, with O given in its eigenbasis.
QuenchTrace quench_trace(const EigenSystem& es, const CMatrix& o_eigenbasis, const CVector& c0,
                         std::span<const double> times, const MicroCurve& curve);

QuenchTrace run_quench(const InitialState& init, const HcbParams& post,
                       const MomentumSector& sector, const ObservableSpec& observable,
                       std::span<const double> times, const QuenchOptions& options = {});

/// Prepare the ground state of `pre`, evolve under `post`.
inline QuenchTrace run_quench(const HcbParams& pre, const HcbParams& post,
                              const MomentumSector& sector, const ObservableSpec& observable,
                              std::span<const double> times,
                              const QuenchOptions& options = {}) {
  return run_quench(InitialState{initial::GroundState{pre}}, post, sector, observable, times,
                    options);
}

}  // namespace ethlab
