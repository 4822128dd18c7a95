#include "ethlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "ethlab/error.hpp"
#include "ethlab/rmt.hpp"

namespace ethlab {
namespace {

std::string describe_failure(const OperatorMatrix& m, const std::string& what) {
  return "diagonalization of " + std::to_string(m.dim()) + "x" + std::to_string(m.dim()) +
         " block in sector " + m.tag.to_string() + " failed: " + what;
}

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

EigenSystem diagonalize(const OperatorMatrix& m) {
  // Eigen's solver does not accept an empty matrix; empty sectors do occur
  if (m.dim() == 0) return EigenSystem{m.tag, RVector(0), CMatrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m.entries, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure(describe_failure(m, "eigensolver did not converge"));
  }
  EigenSystem es{m.tag, solver.eigenvalues(), solver.eigenvectors()};
  const auto r = eigen_residuals(es, m);
  if (!(r.orthonormality < 1e-10) || !(r.max_residual < r.residual_bound)) {
    throw ConvergenceFailure(describe_failure(
        m, "residual " + std::to_string(r.max_residual) + " (bound " +
               std::to_string(r.residual_bound) + "), orthonormality error " +
               std::to_string(r.orthonormality)));
  }
  return es;
}

RVector eigenvalues(const OperatorMatrix& m) {
  if (m.dim() == 0) return RVector(0);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure(describe_failure(m, "eigensolver did not converge"));
  }
  return solver.eigenvalues();
}

EigenResiduals eigen_residuals(const EigenSystem& es, const OperatorMatrix& m) {
  if (es.dim() != m.dim()) {
    throw DimensionMismatch("eigensystem dim " + std::to_string(es.dim()) +
                            " vs matrix dim " + std::to_string(m.dim()));
  }
  EigenResiduals r;
  const auto n = static_cast<Eigen::Index>(es.dim());
  if (n == 0) return r;
  const CMatrix gram = es.vectors.adjoint() * es.vectors;
  r.orthonormality = (gram - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  const CMatrix residual = m.entries * es.vectors - es.vectors * es.energies.asDiagonal();
  r.max_residual = residual.colwise().norm().maxCoeff();
  const double hmax = m.entries.cwiseAbs().maxCoeff();
  r.residual_bound = 1e-10 * std::max(1.0, hmax * static_cast<double>(n));
  return r;
}

double UnfoldedSpectrum::staircase(double energy) const {
  const double x = (energy - center) / half_width;
  double value = 0.0;
  for (Eigen::Index p = coefficients.size() - 1; p >= 0; --p) {
    value = value * x + coefficients(p);
  }
  return value;
}

UnfoldedSpectrum unfold(std::span<const double> energies, const UnfoldOptions& options) {
  constexpr std::size_t kMinLevels = 50;
  if (energies.size() < kMinLevels) {
    throw TooFewLevels("unfolding needs at least " + std::to_string(kMinLevels) +
                       " levels, got " + std::to_string(energies.size()));
  }
  if (options.degree < 1) throw ParameterOutOfRange("unfolding degree must be >= 1");
  if (!(options.trim_fraction >= 0.0 && options.trim_fraction < 1.0)) {
    throw ParameterOutOfRange("trim fraction must lie in [0, 1)");
  }
  const auto sorted = sorted_copy(energies);
  const std::size_t n = sorted.size();
  const auto cut = static_cast<std::size_t>(std::floor(n * options.trim_fraction / 2.0));
  const std::size_t kept = n - 2 * cut;
  if (kept < kMinLevels / 2) {
    throw TooFewLevels("only " + std::to_string(kept) + " levels left after trimming");
  }

  UnfoldedSpectrum out;
  out.first = cut;
  const double lo = sorted[cut];
  const double hi = sorted[cut + kept - 1];
  out.center = 0.5 * (lo + hi);
  out.half_width = hi > lo ? 0.5 * (hi - lo) : 1.0;

  const int degree = std::min<int>(options.degree, static_cast<int>(kept) - 1);
  RMatrix design(static_cast<Eigen::Index>(kept), degree + 1);
  RVector target(static_cast<Eigen::Index>(kept));
  for (std::size_t i = 0; i < kept; ++i) {
    const double x = (sorted[cut + i] - out.center) / out.half_width;
    double power = 1.0;
    for (int p = 0; p <= degree; ++p) {
      design(static_cast<Eigen::Index>(i), p) = power;
      power *= x;
    }
    // Staircase midpoint: the (cut + i)-th level sits at count cut + i + 1/2.
    target(static_cast<Eigen::Index>(i)) = static_cast<double>(cut + i) + 0.5;
  }
  out.coefficients = design.colPivHouseholderQr().solve(target);
  out.levels.reserve(kept);
  for (std::size_t i = 0; i < kept; ++i) out.levels.push_back(out.staircase(sorted[cut + i]));
  return out;
}

std::vector<double> Histogram::centers() const {
  std::vector<double> c;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) c.push_back(0.5 * (edges[b] + edges[b + 1]));
  return c;
}

double wigner_cdf(double s) { return s <= 0.0 ? 0.0 : 1.0 - std::exp(-std::numbers::pi * s * s / 4.0); }
double poisson_density(double s) { return s < 0.0 ? 0.0 : std::exp(-s); }
double poisson_cdf(double s) { return s <= 0.0 ? 0.0 : 1.0 - std::exp(-s); }

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) return 0.0;
  const auto sorted = sorted_copy(samples);
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f),
                  std::abs(f - static_cast<double>(i) / n)});
  }
  return d;
}

double mean_spacing_ratio(std::span<const double> sorted_levels, double min_spacing,
                          std::size_t* count) {
  std::vector<double> gaps;
  for (std::size_t i = 0; i + 1 < sorted_levels.size(); ++i) {
    const double g = sorted_levels[i + 1] - sorted_levels[i];
    if (g > min_spacing) gaps.push_back(g);
  }
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
    sum += std::min(gaps[i], gaps[i + 1]) / std::max(gaps[i], gaps[i + 1]);
    ++used;
  }
  if (count) *count = used;
  return used ? sum / static_cast<double>(used) : 0.0;
}

SpacingReport spacing_report(std::span<const double> energies, const SpacingOptions& options) {
  if (options.bins < 1) throw ParameterOutOfRange("histogram needs at least one bin");
  const auto all = sorted_copy(energies);
  const double width = all.empty() ? 0.0 : all.back() - all.front();
  const double min_spacing = options.degeneracy_tolerance * width;

  // Degenerate multiplets count as a single level.
  SpacingReport report;
  std::vector<double> sorted;
  sorted.reserve(all.size());
  for (double e : all) {
    if (!sorted.empty() && e - sorted.back() <= min_spacing) {
      ++report.degenerate_spacings;
      continue;
    }
    sorted.push_back(e);
  }
  const auto unfolded = unfold(sorted, {options.degree, options.trim_fraction});
  const std::size_t first = unfolded.first;
  const std::size_t kept = unfolded.levels.size();
  for (std::size_t i = 0; i + 1 < kept; ++i) {
    report.unfolded_spacings.push_back(unfolded.levels[i + 1] - unfolded.levels[i]);
  }
  const auto& s = report.unfolded_spacings;

  double sum = 0.0;
  double largest = 0.0;
  for (double v : s) {
    sum += v;
    largest = std::max(largest, v);
  }
  report.mean_spacing = sum / static_cast<double>(s.size());

  auto& h = report.histogram;
  const double upper = std::max(4.0, std::ceil(largest * 1.0000001));
  const double bin_width = upper / options.bins;
  h.counts.assign(static_cast<std::size_t>(options.bins), 0);
  for (int b = 0; b <= options.bins; ++b) h.edges.push_back(b * bin_width);
  for (double v : s) {
    auto b = static_cast<std::size_t>(std::max(0.0, v) / bin_width);
    b = std::min(b, h.counts.size() - 1);
    ++h.counts[b];
  }
  for (auto c : h.counts) {
    h.densities.push_back(static_cast<double>(c) / (static_cast<double>(s.size()) * bin_width));
  }
  for (double c : h.centers()) {
    report.wigner_density_at_centers.push_back(wigner_surmise(c));
    report.poisson_density_at_centers.push_back(poisson_density(c));
  }

  report.ks_wigner = ks_distance(s, wigner_cdf);
  report.ks_poisson = ks_distance(s, poisson_cdf);
  report.mean_r = mean_spacing_ratio(std::span(sorted).subspan(first, kept), min_spacing,
                                     &report.r_count);
  return report;
}

}  // namespace ethlab
