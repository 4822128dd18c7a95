#include <gtest/gtest.h>

#include <set>

#include "ethlab/basis.hpp"
#include "ethlab/error.hpp"
#include "oracles.hpp"

using namespace ethlab;

namespace {

std::vector<std::string> bit_strings(const std::vector<OccupationState>& states) {
  std::vector<std::string> out;
  for (const auto& s : states) out.push_back(to_bit_string(s.bits, s.sites));
  return out;
}

}  // namespace

TEST(Enumerate, FourSitesTwoParticles) {
  const auto states = enumerate_states(4, 2);
  EXPECT_EQ(bit_strings(states),
            (std::vector<std::string>{"0011", "0101", "0110", "1001", "1010", "1100"}));
  for (const auto& s : states) {
    EXPECT_EQ(s.sites, 4);
    EXPECT_EQ(s.particles, 2);
  }
}

TEST(Enumerate, EmptyLattice) {
  const auto states = enumerate_states(3, 0);
  ASSERT_EQ(states.size(), 1U);
  EXPECT_EQ(to_bit_string(states[0].bits, 3), "000");
}

TEST(Enumerate, CountMatchesBinomial) {
  EXPECT_EQ(enumerate_states(17, 6).size(), oracle::choose(17, 6));
  EXPECT_EQ(oracle::choose(17, 6), 12376U);
  for (int L = 1; L <= 12; ++L) {
    for (int N = 0; N <= L; ++N) {
      const auto states = enumerate_states(L, N);
      std::vector<Bits> bits;
      for (const auto& s : states) bits.push_back(s.bits);
      EXPECT_EQ(bits, oracle::patterns(L, N)) << "L=" << L << " N=" << N;
      EXPECT_EQ(binomial(L, N), oracle::choose(L, N));
    }
  }
}

TEST(Enumerate, RejectsBadArguments) {
  EXPECT_THROW(enumerate_states(4, 5), ParameterOutOfRange);
  EXPECT_THROW(enumerate_states(29, 2), ParameterOutOfRange);
  EXPECT_THROW(enumerate_states(10, 2, 8), ParameterOutOfRange);
  EXPECT_THROW(enumerate_states(4, -1), ParameterOutOfRange);
}

TEST(Enumerate, Deterministic) {
  EXPECT_EQ(enumerate_states(14, 5), enumerate_states(14, 5));
}

TEST(Translation, ShiftsSitesUp) {
  // site i -> i + 1: 0011 becomes 0110, and the top site wraps to site 0
  EXPECT_EQ(translate(0b0011, 4, 1), 0b0110U);
  EXPECT_EQ(translate(0b1001, 4, 1), 0b0011U);
  EXPECT_EQ(translate(0b1001, 4, -1), 0b1100U);
  EXPECT_EQ(translate(0b0101, 4, 4), 0b0101U);
  EXPECT_EQ(orbit_period(0b0101, 4), 2);
  EXPECT_EQ(orbit_period(0b0011, 4), 4);
  EXPECT_EQ(orbit_period(0, 5), 1);
}

TEST(Sector, FourSitesTwoParticles) {
  const std::vector<std::size_t> dims{2, 1, 2, 1};
  std::size_t total = 0;
  for (int k = 0; k < 4; ++k) {
    const auto s = build_momentum_sector(4, 2, k);
    EXPECT_EQ(s.dim(), dims[k]) << "k=" << k;
    total += s.dim();
  }
  EXPECT_EQ(total, 6U);
}

TEST(Sector, SeventeenSitesSixParticles) {
  for (int k = 0; k < 17; ++k) EXPECT_EQ(build_momentum_sector(17, 6, k).dim(), 728U);
}

TEST(Sector, SingleOrbit) {
  const auto s = build_momentum_sector(3, 1, 2);
  ASSERT_EQ(s.dim(), 1U);
  EXPECT_EQ(s.representatives()[0], 0b001U);
  EXPECT_DOUBLE_EQ(s.norms()[0], std::sqrt(3.0));
}

TEST(Sector, DimensionsSumToBinomial) {
  for (int L = 1; L <= 12; ++L) {
    for (int N = 0; N <= L; ++N) {
      std::uint64_t total = 0;
      for (int k = 0; k < L; ++k) total += build_momentum_sector(L, N, k).dim();
      EXPECT_EQ(total, oracle::choose(L, N)) << "L=" << L << " N=" << N;
    }
  }
}

TEST(Sector, RepresentativesAreOrbitMinima) {
  for (int k = 0; k < 12; ++k) {
    const auto s = build_momentum_sector(12, 5, k);
    EXPECT_TRUE(std::is_sorted(s.representatives().begin(), s.representatives().end()));
    for (std::size_t a = 0; a < s.dim(); ++a) {
      const Bits rep = s.representatives()[a];
      const int p = s.periods()[a];
      EXPECT_EQ((k * p) % 12, 0);
      EXPECT_GT(s.norms()[a], 0.0);
      for (int r = 1; r < 12; ++r) EXPECT_LE(rep, translate(rep, 12, r));
    }
  }
}

TEST(Sector, EveryStateInExactlyOneOrbit) {
  const int L = 10;
  const int N = 4;
  std::set<Bits> reps;
  for (const auto& s : enumerate_states(L, N)) {
    const auto r = orbit_representative(s.bits, L);
    EXPECT_EQ(translate(r.representative, L, r.offset), s.bits);
    reps.insert(r.representative);
  }
  std::size_t k0 = build_momentum_sector(L, N, 0).dim();
  EXPECT_EQ(reps.size(), k0);  // every orbit is present at k = 0
}

TEST(StateIndex, Examples) {
  const auto k0 = build_momentum_sector(4, 2, 0);
  const auto hit = state_index(k0, {0b0110, 4, 2});
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(k0.representatives()[hit->index], 0b0011U);
  EXPECT_EQ(hit->offset, 1);

  const auto k1 = build_momentum_sector(4, 2, 1);
  EXPECT_FALSE(state_index(k1, {0b0101, 4, 2}).has_value());

  for (std::size_t a = 0; a < k0.dim(); ++a) {
    const auto self = state_index(k0, {k0.representatives()[a], 4, 2});
    ASSERT_TRUE(self.has_value());
    EXPECT_EQ(self->index, a);
    EXPECT_EQ(self->offset, 0);
  }
}

TEST(StateIndex, MismatchThrows) {
  const auto s = build_momentum_sector(4, 2, 0);
  EXPECT_THROW(state_index(s, {0b0111, 4, 3}), DimensionMismatch);
  EXPECT_THROW(state_index(s, {0b0011, 5, 2}), DimensionMismatch);
}

TEST(Sector, RejectsBadMomentum) {
  EXPECT_THROW(build_momentum_sector(4, 2, 4), ParameterOutOfRange);
  EXPECT_THROW(build_momentum_sector(4, 2, -1), ParameterOutOfRange);
}
