#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ethlab {

/// Occupation pattern: bit i set means site i holds a boson.
using Bits = std::uint64_t;

inline constexpr int kDefaultMaxSites = 28;

struct OccupationState {
  Bits bits = 0;
  int sites = 0;
  int particles = 0;

  friend bool operator==(const OccupationState&, const OccupationState&) = default;
};

/// (L, N, k) label carried by every sector-resolved object.
struct SectorTag {
  int sites = 0;
  int particles = 0;
  int momentum = 0;

  friend bool operator==(const SectorTag&, const SectorTag&) = default;
  std::string to_string() const;
};

/// Cyclic translation T: site i -> i+1 (mod L), applied `shift` times.
Bits translate(Bits bits, int sites, int shift);

/// Smallest p > 0 with T^p bits == bits.
int orbit_period(Bits bits, int sites);

struct OrbitRepresentative {
  Bits representative = 0;
  /// bits == T^offset(representative)
  int offset = 0;
};

/// Orbit minimum under translation, together with the shift that produces
/// the input from it.
OrbitRepresentative orbit_representative(Bits bits, int sites);

/// All states with `particles` bosons on `sites` sites, strictly increasing.
std::vector<OccupationState> enumerate_states(int sites, int particles,
                                              int max_sites = kDefaultMaxSites);

/// Binomial coefficient C(n, r) in 64-bit arithmetic.
std::uint64_t binomial(int n, int r);

struct SectorLookup {
  std::size_t index = 0;  ///< position of the representative in the sector
  int offset = 0;         ///< state == T^offset(representative)

  friend bool operator==(const SectorLookup&, const SectorLookup&) = default;
};

/// Translation-symmetric basis at fixed particle number and lattice momentum
/// 2*pi*k/L.
///
/// Basis vector for representative a with orbit period p:
///   |a(k)> = p^{-1/2} * sum_{r=0}^{p-1} exp(i 2 pi k r / L) T^r |a>
/// which is only nonzero when k*p = 0 (mod L). `norms()[a]` is sqrt(p), the
/// norm of the unnormalized orbit sum.
class MomentumSector {
 public:
  static MomentumSector build(int sites, int particles, int momentum,
                              int max_sites = kDefaultMaxSites);

  int sites() const { return sites_; }
  int particles() const { return particles_; }
  int momentum() const { return momentum_; }
  SectorTag tag() const { return {sites_, particles_, momentum_}; }
  std::size_t dim() const { return reps_.size(); }

  std::span<const Bits> representatives() const { return reps_; }
  std::span<const int> periods() const { return periods_; }
  std::span<const double> norms() const { return norms_; }

  /// Index of a representative; absent if `rep` is not one of ours.
  std::optional<std::size_t> find_representative(Bits rep) const;

  /// Locate any state (not necessarily a representative) in this sector.
  /// Throws DimensionMismatch when (L, N) disagree.
  std::optional<SectorLookup> lookup(const OccupationState& state) const;

  /// Same as `lookup` without the (L, N) check; `bits` must have N bits set.
  std::optional<SectorLookup> lookup_bits(Bits bits) const;

 private:
  MomentumSector() = default;

  int sites_ = 0;
  int particles_ = 0;
  int momentum_ = 0;
  std::vector<Bits> reps_;
  std::vector<int> periods_;
  std::vector<double> norms_;
};

inline MomentumSector build_momentum_sector(int sites, int particles, int momentum,
                                            int max_sites = kDefaultMaxSites) {
  return MomentumSector::build(sites, particles, momentum, max_sites);
}

inline std::optional<SectorLookup> state_index(const MomentumSector& sector,
                                               const OccupationState& state) {
  return sector.lookup(state);
}

/// "0011"-style rendering, most significant site first.
std::string to_bit_string(Bits bits, int sites);

}  // namespace ethlab
