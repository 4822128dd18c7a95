#include "ethlab/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "ethlab/error.hpp"
#include "ethlab/parallel.hpp"

namespace ethlab {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t i,
                           std::uint64_t j, std::uint64_t lane) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ i);
  h = splitmix64(h ^ j);
  return splitmix64(h ^ lane);
}

// Uniform in (0, 1), never exactly 0.
double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

struct Realization {
  RVector energies;
  RMatrix vectors;
};

Realization solve_realization(const DeutschModel& model, std::size_t index) {
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(sample_model(model, index));
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("Deutsch ensemble aborted: realization " + std::to_string(index) +
                             " (dim " + std::to_string(model.dim()) +
                             ") failed to diagonalize");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

struct EnsembleSums {
  RMatrix c2;
  RVector direct_sum;
  RVector direct_sq_sum;
};

// Streams realizations in batches of `threads`, reducing in index order so
// serial and threaded runs give bit-identical sums.
template <class DirectFn>
EnsembleSums accumulate(const DeutschModel& model, unsigned threads, DirectFn&& direct_of) {
  const auto n = static_cast<Eigen::Index>(model.dim());
  EnsembleSums sums{RMatrix::Zero(n, n), RVector::Zero(n), RVector::Zero(n)};
  const std::size_t batch = std::max(1U, threads);
  for (std::size_t start = 0; start < model.realizations; start += batch) {
    const std::size_t count = std::min(batch, model.realizations - start);
    std::vector<Realization> solved(count);
    parallel_for(count, threads, [&](std::size_t b) {
      solved[b] = solve_realization(model, start + b);
    });
    for (auto& r : solved) {
      // c_ij = <E_i|E0_j> = vectors(j, i)
      sums.c2 += r.vectors.transpose().cwiseAbs2();
      const RVector direct = direct_of(r.vectors);
      sums.direct_sum += direct;
      sums.direct_sq_sum += direct.cwiseAbs2();
    }
  }
  return sums;
}

LocalizationProfile profile_from(const RMatrix& mean_c2) {
  LocalizationProfile p;
  p.mean_c2_matrix = mean_c2;
  const auto n = mean_c2.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double row = mean_c2.row(i).sum();
    p.row_sums.push_back(row);
    p.max_row_deviation = std::max(p.max_row_deviation, std::abs(row - 1.0));
  }
  p.offset_zero_mass = n > 0 ? mean_c2.diagonal().mean() : 0.0;
  for (Eigen::Index d = -(n - 1); d <= n - 1; ++d) {
    double sum = 0.0;
    Eigen::Index rows = 0;
    for (Eigen::Index i = std::max<Eigen::Index>(0, -d); i < std::min(n, n - d); ++i) {
      sum += mean_c2(i, i + d);
      ++rows;
    }
    p.offsets.push_back(static_cast<long>(d));
    p.mean_c2.push_back(rows ? sum / static_cast<double>(rows) : 0.0);
  }
  return p;
}

template <class DirectFn>
ExpectationPrediction predict(const DeutschModel& model, std::span<const double> o_diagonal,
                              unsigned threads, DirectFn&& direct_of) {
  model.validate();
  const auto sums = accumulate(model, threads, direct_of);
  const double r = static_cast<double>(model.realizations);
  const auto n = static_cast<Eigen::Index>(model.dim());

  ExpectationPrediction out;
  out.profile = profile_from(sums.c2 / r);
  const Eigen::Map<const RVector> o0(o_diagonal.data(), n);
  out.predicted = out.profile.mean_c2_matrix * o0;
  out.direct = sums.direct_sum / r;
  out.variance = RVector::Zero(n);
  if (model.realizations > 1) {
    out.variance = ((sums.direct_sq_sum - r * out.direct.cwiseAbs2()) / (r - 1.0))
                       .cwiseMax(0.0);
  }
  out.standard_error = (out.variance / r).cwiseSqrt();
  out.max_abs_deviation = n > 0 ? (out.predicted - out.direct).cwiseAbs().maxCoeff() : 0.0;
  return out;
}

}  // namespace

double wigner_surmise(double s) {
  if (!(s >= 0.0)) throw ParameterOutOfRange("Wigner surmise needs s >= 0");
  return 0.5 * std::numbers::pi * s * std::exp(-std::numbers::pi * s * s / 4.0);
}

void DeutschModel::validate() const {
  if (h0.size() == 0) throw ParameterOutOfRange("Deutsch model needs a nonempty h0");
  for (Eigen::Index i = 1; i < h0.size(); ++i) {
    if (h0(i) < h0(i - 1)) throw ParameterOutOfRange("h0 diagonal must be ascending");
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ParameterOutOfRange("epsilon must be finite and >= 0");
  }
  if (!(band_beta > 0.0) || !std::isfinite(band_beta)) {
    throw ParameterOutOfRange("band_beta must be finite and > 0");
  }
  if (realizations < 1) throw ParameterOutOfRange("need at least one realization");
}

RVector equally_spaced_levels(std::size_t n, double spacing) {
  RVector h(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) h(static_cast<Eigen::Index>(i)) = spacing * static_cast<double>(i);
  return h;
}

RVector poisson_levels(std::size_t n, std::uint64_t seed, double spacing) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = to_unit(counter_hash(seed, 0x706f6973ULL, i, 0, 0)) * spacing * static_cast<double>(n);
  }
  std::sort(v.begin(), v.end());
  return Eigen::Map<RVector>(v.data(), static_cast<Eigen::Index>(n));
}

double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t i,
                      std::uint64_t j) {
  const double u1 = to_unit(counter_hash(seed, stream, i, j, 0));
  const double u2 = to_unit(counter_hash(seed, stream, i, j, 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RMatrix sample_model(const DeutschModel& model, std::size_t realization) {
  model.validate();
  const auto n = static_cast<Eigen::Index>(model.dim());
  RMatrix h = RMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = model.h0(i);
    if (model.epsilon == 0.0) continue;
    for (Eigen::Index j = i; j < n; ++j) {
      const double separation = model.band_mode == BandMode::Energy
                                    ? std::abs(model.h0(j) - model.h0(i))
                                    : static_cast<double>(j - i);
      const double scale = model.epsilon * std::exp(-model.band_beta * separation);
      if (scale == 0.0) continue;
      const double x = scale * counter_normal(model.seed, realization,
                                              static_cast<std::uint64_t>(i),
                                              static_cast<std::uint64_t>(j));
      h(i, j) += x;
      if (j != i) h(j, i) = x;
    }
  }
  return h;
}

RVector sample_spectrum(const DeutschModel& model, std::size_t realization) {
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(sample_model(model, realization),
                                                Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("realization " + std::to_string(realization) +
                             " failed to diagonalize");
  }
  return solver.eigenvalues();
}

RMatrix sample_goe(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  const auto m = static_cast<Eigen::Index>(n);
  RMatrix a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      a(i, j) = counter_normal(seed, stream, static_cast<std::uint64_t>(i),
                               static_cast<std::uint64_t>(j));
    }
  }
  return (a + a.transpose()) * 0.5;
}

LocalizationProfile localization_profile(const DeutschModel& model, unsigned threads) {
  model.validate();
  const auto sums =
      accumulate(model, threads, [](const RMatrix& v) { return RVector::Zero(v.cols()).eval(); });
  return profile_from(sums.c2 / static_cast<double>(model.realizations));
}

ExpectationPrediction expectation_prediction(const DeutschModel& model,
                                             std::span<const double> o_diagonal,
                                             unsigned threads) {
  if (o_diagonal.size() != model.dim()) {
    throw DimensionMismatch("observable diagonal has " + std::to_string(o_diagonal.size()) +
                            " entries, model dim is " + std::to_string(model.dim()));
  }
  const Eigen::Map<const RVector> o0(o_diagonal.data(), static_cast<Eigen::Index>(o_diagonal.size()));
  return predict(model, o_diagonal, threads, [&](const RMatrix& v) {
    // <E_i|O|E_i> = sum_k c_ik^2 O0_k
    return (v.cwiseAbs2().transpose() * o0).eval();
  });
}

ExpectationPrediction expectation_prediction(const DeutschModel& model,
                                             const RMatrix& o_integrable, unsigned threads) {
  if (o_integrable.rows() != static_cast<Eigen::Index>(model.dim()) ||
      o_integrable.cols() != o_integrable.rows()) {
    throw DimensionMismatch("observable matrix is " + std::to_string(o_integrable.rows()) +
                            "x" + std::to_string(o_integrable.cols()) + ", model dim is " +
                            std::to_string(model.dim()));
  }
  const RVector diag = o_integrable.diagonal();
  return predict(model, std::span<const double>(diag.data(), static_cast<std::size_t>(diag.size())),
                 threads, [&](const RMatrix& v) {
                   return (v.transpose() * o_integrable * v).diagonal().eval();
                 });
}

}  // namespace ethlab
