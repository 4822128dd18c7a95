#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "ethlab/error.hpp"
#include "ethlab/hamiltonian.hpp"
#include "ethlab/rmt.hpp"
#include "ethlab/spectral.hpp"
#include "oracles.hpp"

using namespace ethlab;

namespace {

OperatorMatrix wrap(const CMatrix& m, SectorTag tag = {}) { return {tag, m}; }

std::vector<double> goe_levels(int n, std::uint64_t seed) {
  const RMatrix a = sample_goe(static_cast<std::size_t>(n), seed, 0);
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(a, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST(Diagonalize, PauliX) {
  CMatrix m(2, 2);
  m << 0.0, -1.0, -1.0, 0.0;
  const auto es = diagonalize(wrap(m));
  EXPECT_NEAR(es.energies[0], -1.0, 1e-14);
  EXPECT_NEAR(es.energies[1], 1.0, 1e-14);
}

TEST(Diagonalize, OneByOne) {
  CMatrix m(1, 1);
  m << 3.25;
  const auto es = diagonalize(wrap(m));
  EXPECT_EQ(es.energies[0], 3.25);
  EXPECT_NEAR(std::abs(es.vectors(0, 0)), 1.0, 1e-15);
}

TEST(Diagonalize, SingleParticleBlocks) {
  HcbParams p;
  p.sites = 4;
  p.particles = 1;
  p.V = 0.0;
  std::vector<double> all;
  for (int k = 0; k < 4; ++k) {
    const auto es = diagonalize(build_hcb_hamiltonian(p, build_momentum_sector(4, 1, k)));
    all.push_back(es.energies[0]);
  }
  std::sort(all.begin(), all.end());
  const std::vector<double> expected{-2.0, 0.0, 0.0, 2.0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(all[i], expected[i], 1e-14);
}

TEST(Diagonalize, ResidualAndOrthonormalityBounds) {
  HcbParams p;
  p.sites = 12;
  p.particles = 4;
  p.t_prime = 0.96;
  p.V_prime = 0.96;
  for (int k : {0, 1, 6}) {
    const auto h = build_hcb_hamiltonian(p, build_momentum_sector(12, 4, k));
    const auto es = diagonalize(h);
    const auto r = eigen_residuals(es, h);
    EXPECT_LT(r.orthonormality, 1e-10);
    EXPECT_LT(r.max_residual, r.residual_bound);
    EXPECT_TRUE(std::is_sorted(es.energies.data(), es.energies.data() + es.energies.size()));
    EXPECT_EQ(es.tag, h.tag);
  }
}

TEST(Diagonalize, FailureNamesDimensionAndSector) {
  CMatrix m = CMatrix::Identity(3, 3);
  m(1, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    diagonalize(wrap(m, {9, 2, 4}));
    FAIL() << "expected ConvergenceFailure";
  } catch (const ConvergenceFailure& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("3x3"), std::string::npos) << what;
    EXPECT_NE(what.find(SectorTag{9, 2, 4}.to_string()), std::string::npos) << what;
  }
}

TEST(Diagonalize, UnitaryInvariance) {
  std::mt19937_64 rng(11);
  for (int n : {5, 40, 200}) {
    const CMatrix h = oracle::random_hermitian(n, rng);
    const CMatrix u = oracle::random_unitary(n, rng);
    CMatrix rotated = u.adjoint() * h * u;
    rotated = (rotated + rotated.adjoint()).eval() / 2.0;
    const auto a = eigenvalues(wrap(h));
    const auto b = eigenvalues(wrap(rotated));
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-8) << "n=" << n;
  }
}

TEST(Unfold, EquallySpaced) {
  std::vector<double> e(100);
  for (int i = 0; i < 100; ++i) e[i] = i;
  const auto u = unfold(e);
  for (std::size_t i = 1; i < u.levels.size(); ++i) {
    EXPECT_NEAR(u.levels[i] - u.levels[i - 1], 1.0, 1e-6);
  }
}

TEST(Unfold, TooFewLevels) {
  std::vector<double> e(49);
  for (int i = 0; i < 49; ++i) e[i] = i;
  EXPECT_THROW(unfold(e), TooFewLevels);
  EXPECT_THROW(spacing_report(e, 40, 0.2), TooFewLevels);
}

TEST(Unfold, UniformLevelsArePoissonian) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> e(2000);
  for (auto& x : e) x = u(rng);
  std::sort(e.begin(), e.end());
  const auto rep = spacing_report(e, 40, 0.2);
  EXPECT_LT(rep.ks_poisson, 0.05);
  EXPECT_GT(rep.ks_wigner, rep.ks_poisson);
  EXPECT_NEAR(rep.mean_r, 2.0 * std::numbers::ln2 - 1.0, 0.03);
}

TEST(Unfold, GoeLevelsFollowWigner) {
  const auto e = goe_levels(500, 3);
  const auto rep = spacing_report(e, 40, 0.2);
  EXPECT_LT(rep.ks_wigner, 0.05);
  EXPECT_GT(rep.ks_poisson, rep.ks_wigner);
  EXPECT_NEAR(rep.mean_r, 0.53, 0.03);
}

TEST(SpacingReport, UnitMeanAndNormalizedHistogram) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto rep = spacing_report(goe_levels(400, seed), 30, 0.2);
    const double m = mean(rep.unfolded_spacings);
    EXPECT_GE(m, 0.98);
    EXPECT_LE(m, 1.02);
    EXPECT_DOUBLE_EQ(rep.mean_spacing, m);
    double integral = 0.0;
    for (std::size_t b = 0; b < rep.histogram.densities.size(); ++b) {
      integral += rep.histogram.densities[b] * (rep.histogram.edges[b + 1] - rep.histogram.edges[b]);
    }
    EXPECT_NEAR(integral, 1.0, 0.01);
    const auto centers = rep.histogram.centers();
    ASSERT_EQ(centers.size(), 30U);
    for (std::size_t b = 0; b < centers.size(); ++b) {
      EXPECT_DOUBLE_EQ(rep.wigner_density_at_centers[b], wigner_surmise(centers[b]));
      EXPECT_DOUBLE_EQ(rep.poisson_density_at_centers[b], std::exp(-centers[b]));
    }
  }
}

TEST(SpacingReport, DegenerateLevelsAreMerged) {
  // GOE levels, each appearing twice: the merged spectrum is the original
  auto e = goe_levels(300, 9);
  auto doubled = e;
  doubled.insert(doubled.end(), e.begin(), e.end());
  std::sort(doubled.begin(), doubled.end());
  const auto a = spacing_report(e, 40, 0.2);
  const auto b = spacing_report(doubled, 40, 0.2);
  EXPECT_EQ(b.degenerate_spacings, 300U);
  EXPECT_NEAR(mean(b.unfolded_spacings), 1.0, 0.02);
  EXPECT_NEAR(b.ks_wigner, a.ks_wigner, 1e-9);
}

TEST(SpacingRatio, HandComputed) {
  const std::vector<double> levels{0.0, 1.0, 3.0, 4.0};
  // spacings 1, 2, 1 -> ratios 1/2, 1/2
  std::size_t count = 0;
  EXPECT_DOUBLE_EQ(mean_spacing_ratio(levels, 0.0, &count), 0.5);
  EXPECT_EQ(count, 2U);
}

TEST(SpacingRatio, PoissonReferenceByQuadrature) {
  EXPECT_NEAR(oracle::poisson_mean_r(), 2.0 * std::numbers::ln2 - 1.0, 1e-10);
}

TEST(Wigner, ClosedFormValues) {
  EXPECT_EQ(wigner_surmise(0.0), 0.0);
  EXPECT_NEAR(wigner_surmise(1.0), std::numbers::pi / 2.0 * std::exp(-std::numbers::pi / 4.0),
              1e-12);
  EXPECT_NEAR(wigner_surmise(1.0), 0.716186, 1e-6);
  EXPECT_THROW(wigner_surmise(-0.1), ParameterOutOfRange);
}

TEST(Wigner, NormalizationAndMeanByQuadrature) {
  const double norm = oracle::simpson(wigner_surmise, 0.0, 12.0, 20000);
  const double first = oracle::simpson([](double s) { return s * wigner_surmise(s); }, 0.0, 12.0,
                                       20000);
  EXPECT_NEAR(norm, 1.0, 1e-8);
  EXPECT_NEAR(first, 1.0, 1e-8);
  for (double s : {0.3, 1.0, 2.5}) {
    EXPECT_NEAR(wigner_cdf(s), oracle::simpson(wigner_surmise, 0.0, s, 4000), 1e-10);
    EXPECT_NEAR(poisson_cdf(s), oracle::simpson(poisson_density, 0.0, s, 4000), 1e-10);
  }
}

TEST(KsDistance, ExactSample) {
  // against the uniform CDF the gap is 1/2 just below 0.5 and just below 1
  const std::vector<double> s{0.5, 1.0};
  EXPECT_NEAR(ks_distance(s, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.5, 1e-15);
}
