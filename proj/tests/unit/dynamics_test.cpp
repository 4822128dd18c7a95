#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ethlab/dynamics.hpp"
#include "ethlab/error.hpp"
#include "oracles.hpp"

using namespace ethlab;

namespace {

HcbParams hcb(int L, int N, double tp, double V = 1.0) {
  HcbParams p;
  p.sites = L;
  p.particles = N;
  p.t_prime = tp;
  p.V_prime = tp;
  p.V = V;
  return p;
}

EigenSystem two_level() {
  EigenSystem es;
  es.energies = RVector(2);
  es.energies << -1.0, 1.0;
  es.vectors = CMatrix::Identity(2, 2);
  return es;
}

MicroCurve flat_curve(double lo, double hi, double value) {
  const std::vector<EnergyValue> samples{{lo, value}, {hi, value}};
  return MicroCurve::from_samples(samples);
}

}  // namespace

TEST(Expand, EigenvectorsAndSuperpositions) {
  const auto s = build_momentum_sector(10, 4, 1);
  const auto es = diagonalize(build_hcb_hamiltonian(hcb(10, 4, 0.5), s));
  const auto c3 = expand_in_eigenbasis({s.tag(), es.vectors.col(3)}, es);
  for (Eigen::Index i = 0; i < c3.size(); ++i) EXPECT_NEAR(std::abs(c3(i)), i == 3 ? 1.0 : 0.0, 1e-12);

  const CVector mix = (es.vectors.col(0) + es.vectors.col(1)) / std::sqrt(2.0);
  const auto c = expand_in_eigenbasis({s.tag(), mix}, es);
  EXPECT_NEAR(std::norm(c(0)), 0.5, 1e-12);
  EXPECT_NEAR(std::norm(c(1)), 0.5, 1e-12);

  std::mt19937_64 rng(1);
  const CVector psi = oracle::random_state(static_cast<int>(s.dim()), rng);
  const auto cr = expand_in_eigenbasis({s.tag(), psi}, es);
  EXPECT_NEAR(cr.squaredNorm(), 1.0, 1e-10);
  EXPECT_LT((es.vectors * cr - psi).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Expand, SectorMismatch) {
  const auto s = build_momentum_sector(10, 4, 1);
  const auto es = diagonalize(build_hcb_hamiltonian(hcb(10, 4, 0.5), s));
  const auto other = build_momentum_sector(10, 4, 2);
  EXPECT_THROW(expand_in_eigenbasis({other.tag(), CVector::Zero(other.dim())}, es), DimensionMismatch);
}

TEST(Evolve, IdentityAtZeroAndStationaryStates) {
  std::mt19937_64 rng(2);
  const CVector c = oracle::random_state(12, rng);
  RVector e = RVector::LinSpaced(12, -3.0, 4.0);
  EXPECT_EQ(evolve(c, e, 0.0), c);

  const auto es = two_level();
  CMatrix o(2, 2);
  o << 0.3, 0.7, 0.7, -0.2;
  CVector single = CVector::Zero(2);
  single(1) = 1.0;
  for (double t : {0.0, 0.7, 15.0}) EXPECT_NEAR(expectation(evolve(single, es.energies, t), o), -0.2, 1e-15);
}

TEST(Evolve, RabiOscillation) {
  const auto es = two_level();
  CMatrix o(2, 2);
  o << 0.0, 1.0, 1.0, 0.0;
  CVector c(2);
  c << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  for (double t = 0.0; t < 10.0; t += 0.37) {
    EXPECT_NEAR(expectation(evolve(c, es.energies, t), o), std::cos(2.0 * t), 1e-14);
  }
}

TEST(Evolve, NormAndTimeReversal) {
  std::mt19937_64 rng(3);
  const CVector c = oracle::random_state(200, rng);
  RVector e = RVector::LinSpaced(200, -30.0, 30.0);
  for (double t : {0.1, 10.0, 1e4}) {
    const auto ct = evolve(c, e, t);
    EXPECT_NEAR(ct.norm(), 1.0, 1e-12);
    EXPECT_LT((evolve(ct, e, -t) - c).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DiagonalEnsemble, Examples) {
  CVector c = CVector::Zero(4);
  c(2) = cplx(0.0, 1.0);
  const std::vector<double> o{0.1, 0.2, 0.3, 0.4};
  EXPECT_DOUBLE_EQ(diagonal_ensemble(c, o), 0.3);
  std::mt19937_64 rng(4);
  const CVector r = oracle::random_state(4, rng);
  EXPECT_NEAR(diagonal_ensemble(r, std::vector<double>(4, 1.0)), 1.0, 1e-14);
  EXPECT_NEAR(participation_ratio(c), 1.0, 1e-15);
  CVector flat = CVector::Constant(4, 0.5);
  EXPECT_NEAR(participation_ratio(flat), 4.0, 1e-14);
}

TEST(DiagonalEnsemble, MatchesLongTimeAverage) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 6 + trial;
    const auto es = diagonalize({{}, oracle::random_hermitian(n, rng)});
    const CMatrix o = oracle::random_hermitian(n, rng);
    const CVector c = oracle::random_state(n, rng);
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 1; i < n; ++i) gap = std::min(gap, es.energies(i) - es.energies(i - 1));
    const double T = 1e3 / gap;
    const int steps = 200000;
    double sum = 0.0;
    for (int s = 0; s <= steps; ++s) {
      const double w = (s == 0 || s == steps) ? 0.5 : 1.0;
      sum += w * expectation(evolve(c, es.energies, T * s / steps), o);
    }
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = o(i, i).real();
    EXPECT_NEAR(sum / steps, diagonal_ensemble(c, diag), 2.0 / std::sqrt(T * gap) * o.norm());
  }
}

TEST(EthPrediction, Examples) {
  RVector e(4);
  e << -1.0, -0.9, 2.0, 2.1;
  const std::vector<EnergyValue> samples{{-1.0, 0.2}, {-0.9, 0.2}, {2.0, 0.8}, {2.1, 0.8}};
  const auto curve = MicroCurve::from_samples(samples);

  CVector c = CVector::Zero(4);
  c(0) = std::sqrt(0.5);
  c(1) = std::sqrt(0.5);
  EXPECT_NEAR(eth_prediction(c, e, curve), 0.2, 1e-15);

  // bimodal: weight p near E_a, 1 - p near E_b
  const double p = 0.3;
  c = CVector::Zero(4);
  c(1) = std::sqrt(p);
  c(2) = std::sqrt(1.0 - p);
  EXPECT_NEAR(eth_prediction(c, e, curve), p * 0.2 + (1.0 - p) * 0.8, 1e-15);

  std::mt19937_64 rng(6);
  EXPECT_NEAR(eth_prediction(oracle::random_state(4, rng), e, flat_curve(-1.0, 2.1, 0.61)), 0.61,
              1e-14);
}

TEST(EthPrediction, SupportNotCovered) {
  RVector e(3);
  e << 0.0, 1.0, 5.0;
  CVector c = CVector::Constant(3, 1.0 / std::sqrt(3.0));
  EXPECT_THROW(eth_prediction(c, e, flat_curve(0.0, 1.0, 1.0)), SupportNotCovered);
  c(2) = 0.0;
  c.normalize();
  EXPECT_NO_THROW(eth_prediction(c, e, flat_curve(0.0, 1.0, 1.0)));
}

TEST(MicroCurve, Interpolation) {
  const std::vector<EnergyValue> samples{{2.0, 4.0}, {0.0, 0.0}, {1.0, 1.0}};
  const auto curve = MicroCurve::from_samples(samples);
  EXPECT_DOUBLE_EQ(curve.at(0.5), 0.5);
  EXPECT_DOUBLE_EQ(curve.at(1.5), 2.5);
  EXPECT_DOUBLE_EQ(curve.at(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(curve.at(3.0), 4.0);
}

TEST(TimeGrid, LogSpacing) {
  const auto g = log_time_grid();
  ASSERT_EQ(g.size(), 400U);
  EXPECT_NEAR(g.front(), 0.1, 1e-15);
  EXPECT_NEAR(g.back(), 1e4, 1e-9);
  EXPECT_NEAR(g[1] / g[0], g[300] / g[299], 1e-12);
  EXPECT_THROW(log_time_grid(0.0, 1.0, 10), ParameterOutOfRange);
}

TEST(PrepareState, BasisAndAmplitudes) {
  const auto s = build_momentum_sector(8, 3, 1);
  const auto psi = prepare_state(initial::BasisState{0b00010011}, s);
  EXPECT_NEAR(psi.amplitudes.norm(), 1.0, 1e-15);
  EXPECT_EQ((psi.amplitudes.array().abs() > 0.5).count(), 1);
  // period-2 state 0101 0101 has no k = 1 component
  const auto k1 = build_momentum_sector(8, 4, 1);
  EXPECT_THROW(prepare_state(initial::BasisState{0b01010101}, k1), ParameterOutOfRange);

  CVector raw = CVector::Constant(s.dim(), cplx(2.0, 1.0));
  EXPECT_NEAR(prepare_state(initial::Amplitudes{raw}, s).amplitudes.norm(), 1.0, 1e-14);
  EXPECT_THROW(prepare_state(initial::Amplitudes{CVector::Zero(3)}, s), DimensionMismatch);
}

TEST(Quench, SameHamiltonianIsStationary) {
  const auto s = build_momentum_sector(10, 3, 0);
  const auto p = hcb(10, 3, 0.96);
  const auto times = log_time_grid(0.1, 1e3, 50);
  const auto trace = run_quench(p, p, s, observable::DensityProduct{0, 1}, times);
  for (double v : trace.values) EXPECT_NEAR(v, trace.values.front(), 1e-10);
  EXPECT_NEAR(trace.participation_ratio, 1.0, 1e-8);
}

TEST(Quench, Conservation) {
  const auto s = build_momentum_sector(12, 4, 0);
  const auto post = hcb(12, 4, 0.96);
  const auto h = build_hcb_hamiltonian(post, s);
  const auto es = diagonalize(h);
  const auto psi0 = prepare_state(initial::GroundState{hcb(12, 4, 0.0, 3.0)}, s);
  const CVector c0 = expand_in_eigenbasis(psi0, es);
  const double e0 = psi0.amplitudes.dot(h.entries * psi0.amplitudes).real();
  for (double t : log_time_grid(0.1, 1e4, 40)) {
    const CVector psi = es.vectors * evolve(c0, es.energies, t);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
    EXPECT_NEAR(psi.dot(h.entries * psi).real(), e0, 1e-10);
  }
  const auto trace = run_quench(hcb(12, 4, 0.0, 3.0), post, s, observable::DensityProduct{0, 1},
                                log_time_grid(0.1, 1e4, 40));
  EXPECT_NEAR(trace.initial_energy, e0, 1e-10);
  EXPECT_LT(trace.max_imaginary, 1e-10);
}

TEST(Quench, RunningAverageApproachesDiagonalEnsemble) {
  const auto s = build_momentum_sector(11, 4, 1);
  const auto trace = run_quench(initial::BasisState{0b00100100101}, hcb(11, 4, 0.96), s,
                                observable::DensityProduct{0, 1}, log_time_grid(1.0, 1e6, 7));
  std::vector<double> gaps;
  for (double r : trace.running_average) gaps.push_back(std::abs(r - trace.diagonal_ensemble_value));
  for (std::size_t i = 2; i < gaps.size(); ++i) EXPECT_LT(gaps[i], gaps[i - 2]);
  EXPECT_LT(gaps.back(), 1e-4);
}

TEST(Quench, EthPredictionCloserWhenNonintegrable) {
  const int L = 14;
  const int N = 5;
  const auto s = build_momentum_sector(L, N, 0);
  const auto times = log_time_grid(0.1, 10.0, 2);
  const auto pre = hcb(L, N, 0.0, 3.0);
  const auto chaotic = run_quench(pre, hcb(L, N, 0.96), s, observable::DensityProduct{0, 1}, times);
  const auto integrable = run_quench(pre, hcb(L, N, 0.0), s, observable::DensityProduct{0, 1}, times);
  EXPECT_LT(std::abs(chaotic.diagonal_ensemble_value - chaotic.eth_prediction_value),
            std::abs(integrable.diagonal_ensemble_value - integrable.eth_prediction_value));
}
