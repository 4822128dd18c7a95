#include "ethlab/basis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "ethlab/error.hpp"

namespace ethlab {
namespace {

Bits site_mask(int sites) {
  return sites >= 64 ? ~Bits{0} : ((Bits{1} << sites) - 1);
}

void check_lattice(int sites, int particles, int max_sites) {
  if (sites < 1 || sites > max_sites) {
    throw ParameterOutOfRange("site count L=" + std::to_string(sites) +
                              " outside [1, " + std::to_string(max_sites) + "]");
  }
  if (particles < 0 || particles > sites) {
    throw ParameterOutOfRange("particle count N=" + std::to_string(particles) +
                              " outside [0, L=" + std::to_string(sites) + "]");
  }
}

}  // namespace

std::string SectorTag::to_string() const {
  return "(L=" + std::to_string(sites) + ", N=" + std::to_string(particles) +
         ", k=" + std::to_string(momentum) + ")";
}

Bits translate(Bits bits, int sites, int shift) {
  shift %= sites;
  if (shift < 0) shift += sites;
  if (shift == 0) return bits;
  const Bits mask = site_mask(sites);
  return ((bits << shift) | (bits >> (sites - shift))) & mask;
}

int orbit_period(Bits bits, int sites) {
  Bits t = bits;
  for (int p = 1; p <= sites; ++p) {
    t = translate(t, sites, 1);
    if (t == bits) return p;
  }
  return sites;
}

OrbitRepresentative orbit_representative(Bits bits, int sites) {
  // bits = T^r(candidate) with candidate = T^{-r}(bits)
  OrbitRepresentative best{bits, 0};
  Bits t = bits;
  for (int r = 1; r < sites; ++r) {
    t = translate(t, sites, -1);
    if (t < best.representative) best = {t, r};
  }
  return best;
}

std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t value = 1;
  for (int i = 1; i <= r; ++i) {
    value = value * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
  }
  return value;
}

std::vector<OccupationState> enumerate_states(int sites, int particles, int max_sites) {
  check_lattice(sites, particles, max_sites);
  std::vector<OccupationState> states;
  states.reserve(binomial(sites, particles));
  if (particles == 0) {
    states.push_back({0, sites, 0});
    return states;
  }
  const Bits limit = Bits{1} << sites;
  // Gosper's hack: next integer with the same popcount.
  Bits v = (Bits{1} << particles) - 1;
  while (v < limit) {
    states.push_back({v, sites, particles});
    const Bits c = v & (~v + 1);
    const Bits r = v + c;
    v = (((r ^ v) >> 2) / c) | r;
  }
  return states;
}

MomentumSector MomentumSector::build(int sites, int particles, int momentum, int max_sites) {
  check_lattice(sites, particles, max_sites);
  if (momentum < 0 || momentum >= sites) {
    throw ParameterOutOfRange("momentum index k=" + std::to_string(momentum) +
                              " outside [0, L=" + std::to_string(sites) + ")");
  }
  MomentumSector sector;
  sector.sites_ = sites;
  sector.particles_ = particles;
  sector.momentum_ = momentum;
  for (const auto& s : enumerate_states(sites, particles, max_sites)) {
    if (orbit_representative(s.bits, sites).representative != s.bits) continue;
    const int period = orbit_period(s.bits, sites);
    if ((static_cast<long>(momentum) * period) % sites != 0) continue;
    sector.reps_.push_back(s.bits);
    sector.periods_.push_back(period);
    sector.norms_.push_back(std::sqrt(static_cast<double>(period)));
  }
  return sector;
}

std::optional<std::size_t> MomentumSector::find_representative(Bits rep) const {
  const auto it = std::lower_bound(reps_.begin(), reps_.end(), rep);
  if (it == reps_.end() || *it != rep) return std::nullopt;
  return static_cast<std::size_t>(it - reps_.begin());
}

std::optional<SectorLookup> MomentumSector::lookup_bits(Bits bits) const {
  const auto orbit = orbit_representative(bits, sites_);
  const auto index = find_representative(orbit.representative);
  if (!index) return std::nullopt;
  return SectorLookup{*index, orbit.offset};
}

std::optional<SectorLookup> MomentumSector::lookup(const OccupationState& state) const {
  if (state.sites != sites_ || state.particles != particles_ ||
      std::popcount(state.bits) != particles_ || (state.bits & ~site_mask(sites_)) != 0) {
    throw DimensionMismatch("state with (L=" + std::to_string(state.sites) +
                            ", N=" + std::to_string(state.particles) +
                            ") does not belong to sector " + tag().to_string());
  }
  return lookup_bits(state.bits);
}

std::string to_bit_string(Bits bits, int sites) {
  std::string out(static_cast<std::size_t>(sites), '0');
  for (int i = 0; i < sites; ++i) {
    if ((bits >> i) & 1U) out[static_cast<std::size_t>(sites - 1 - i)] = '1';
  }
  return out;
}

}  // namespace ethlab
