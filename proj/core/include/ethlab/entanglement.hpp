#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ethlab/basis.hpp"
#include "ethlab/linalg.hpp"
#include "ethlab/spectral.hpp"

namespace ethlab {

/// Amplitudes over all C(L, N) occupation states, in enumeration order.
struct FullBasisState {
  int sites = 0;
  std::vector<Bits> states;
  CVector amplitudes;
};

/// Expands a momentum-sector vector into site-occupation amplitudes:
/// T^r|a> receives v_a exp(i 2 pi k r / L) / sqrt(p_a).
FullBasisState lift_to_full_basis(const CVector& sector_vector, const MomentumSector& sector);

/// Inverse of lift_to_full_basis for states inside the sector.
CVector project_to_sector(const FullBasisState& full, const MomentumSector& sector);

/// Contiguous block of `length` sites starting at `offset` (mod L).
struct Cut {
  int length = 1;
  int offset = 0;
};

/// Largest subsystem for which a dense 2^L_A density matrix is built.
inline constexpr int kMaxSubsystemSites = 14;

struct ReducedDensityMatrix {
  Cut cut;
  CMatrix entries;  ///< indexed by the subsystem occupation pattern

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
  double trace() const { return entries.trace().real(); }
  /// Eigenvalues, ascending, with values above -1e-10 clipped to >= 0.
  RVector spectrum() const;
};

/// rho_A = tr_B |psi><psi| in the 2^L_A occupation basis of the block.
/// InvalidCut unless 1 <= L_A <= L - 1 and L_A <= kMaxSubsystemSites.
ReducedDensityMatrix reduced_density_matrix(const FullBasisState& psi, const Cut& cut);

/// -sum lambda ln lambda over the positive eigenvalues.
double von_neumann_entropy(const ReducedDensityMatrix& rho);

/// -ln tr rho^2
double renyi2_entropy(const ReducedDensityMatrix& rho);

/// Largest |rho_ab| between subsystem patterns with different particle
/// counts; zero for fixed-N states.
double particle_number_block_residual(const ReducedDensityMatrix& rho);

struct EntropyRow {
  std::size_t state_index = 0;
  double energy = 0.0;
  int cut = 0;
  double s_vn = 0.0;
  double s_renyi2 = 0.0;
  double s_thermo_ref = 0.0;  ///< NaN when no reference spectrum is given
};

/// Reference for the thermodynamic comparison column: canonical entropy of
/// `energies` at the temperature matching E_i, scaled by L_A / L.
struct EntropyComparison {
  std::vector<double> energies;
};

/// S_A for the listed eigenstates (all when `states` is empty) and cuts
/// starting at site 0.
std::vector<EntropyRow> eigenstate_entropy_scan(const EigenSystem& es,
                                                const MomentumSector& sector,
                                                std::span<const int> cuts,
                                                const EntropyComparison& comparison,
                                                std::span<const std::size_t> states = {});

}  // namespace ethlab
