#include "ethlab/eth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ethlab/error.hpp"

namespace ethlab {
namespace {

void require_same_dim(const EigenSystem& es, const OperatorMatrix& o) {
  if (es.dim() != o.dim()) {
    throw DimensionMismatch("eigensystem of " + es.tag.to_string() + " has dim " +
                            std::to_string(es.dim()) + ", operator has dim " +
                            std::to_string(o.dim()));
  }
}

double spectral_width(std::span<const double> energies) {
  if (energies.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
  return *hi - *lo;
}

// Shifted Boltzmann weights exp(-beta (E - E_ref)) with E_ref chosen so the
// largest exponent is zero.
std::vector<double> boltzmann_weights(std::span<const double> energies, double beta) {
  const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
  const double ref = beta >= 0.0 ? *lo : *hi;
  std::vector<double> w;
  w.reserve(energies.size());
  for (double e : energies) w.push_back(std::exp(-beta * (e - ref)));
  return w;
}

double bisect_beta(std::span<const double> energies, double target, double lo, double hi,
                   double tol) {
  // <H>_beta decreases monotonically in beta.
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double e = canonical_energy(energies, mid);
    if (std::abs(e - target) < tol) return mid;
    if (e > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) {
      return mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CMatrix to_eigenbasis(const EigenSystem& es, const OperatorMatrix& o) {
  require_same_dim(es, o);
  return es.vectors.adjoint() * o.entries * es.vectors;
}

std::vector<EnergyValue> eigenstate_expectations(const EigenSystem& es, const OperatorMatrix& o) {
  require_same_dim(es, o);
  const CMatrix ov = o.entries * es.vectors;
  const double scale = std::max(1.0, o.dim() ? o.entries.cwiseAbs().maxCoeff() : 0.0);
  std::vector<EnergyValue> out;
  out.reserve(es.dim());
  for (Eigen::Index i = 0; i < es.energies.size(); ++i) {
    const cplx value = es.vectors.col(i).dot(ov.col(i));
    if (std::abs(value.imag()) > 1e-10 * scale) {
      throw Error("expectation value of state " + std::to_string(i) + " in " +
                  es.tag.to_string() + " has imaginary part " + std::to_string(value.imag()));
    }
    out.push_back({es.energies(i), value.real()});
  }
  return out;
}

double microcanonical_average(std::span<const EnergyValue> pairs, double energy,
                              const MicroWindow& window) {
  double sum = 0.0;
  std::size_t count = 0;
  if (window.mode == MicroWindow::Mode::FixedWidth) {
    for (const auto& p : pairs) {
      if (p.energy >= energy && p.energy <= energy + window.width) {
        sum += p.value;
        ++count;
      }
    }
  } else {
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(pairs[a].energy - energy) < std::abs(pairs[b].energy - energy);
    });
    count = std::min(window.count, pairs.size());
    for (std::size_t r = 0; r < count; ++r) sum += pairs[order[r]].value;
  }
  if (count == 0) {
    throw EmptyWindow("microcanonical window at E=" + std::to_string(energy) +
                      " contains no states");
  }
  return sum / static_cast<double>(count);
}

double canonical_average(std::span<const EnergyValue> pairs, double beta) {
  if (pairs.empty()) throw EmptyWindow("canonical average of an empty spectrum");
  if (!std::isfinite(beta)) throw ParameterOutOfRange("beta must be finite");
  std::vector<double> energies;
  energies.reserve(pairs.size());
  for (const auto& p : pairs) energies.push_back(p.energy);
  const auto w = boltzmann_weights(energies, beta);
  double z = 0.0;
  double num = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    z += w[i];
    num += w[i] * pairs[i].value;
  }
  return num / z;
}

double canonical_energy(std::span<const double> energies, double beta) {
  if (energies.empty()) throw EmptyWindow("canonical energy of an empty spectrum");
  const auto w = boltzmann_weights(energies, beta);
  double z = 0.0;
  double num = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    z += w[i];
    num += w[i] * energies[i];
  }
  return num / z;
}

double canonical_entropy(std::span<const double> energies, double beta) {
  if (energies.empty()) throw EmptyWindow("canonical entropy of an empty spectrum");
  const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
  const double ref = beta >= 0.0 ? *lo : *hi;
  const auto w = boltzmann_weights(energies, beta);
  double z = 0.0;
  double num = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    z += w[i];
    num += w[i] * (energies[i] - ref);
  }
  // ln Z = ln z - beta * ref and <H> = num / z + ref
  return beta * (num / z) + std::log(z);
}

double default_beta_max(std::span<const double> energies) {
  const double width = spectral_width(energies);
  return width > 0.0 ? 1e4 / width : 1.0;
}

double temperature_of_energy(std::span<const double> energies, double target,
                             std::optional<double> beta_max) {
  if (energies.empty()) throw EmptyWindow("temperature of an empty spectrum");
  const double width = spectral_width(energies);
  const double tol = 1e-8 * std::max(width, std::numeric_limits<double>::min());
  const double bmax = beta_max.value_or(default_beta_max(energies));
  const double top = canonical_energy(energies, 0.0);
  if (std::abs(target - top) < tol) return 0.0;
  if (target > top) {
    throw ParameterOutOfRange("target energy " + std::to_string(target) +
                              " exceeds the infinite-temperature energy " +
                              std::to_string(top));
  }
  const double bottom = canonical_energy(energies, bmax);
  if (target < bottom - tol) {
    throw ParameterOutOfRange("target energy " + std::to_string(target) +
                              " is below <H> at beta_max=" + std::to_string(bmax));
  }
  if (std::abs(target - bottom) < tol) return bmax;
  return bisect_beta(energies, target, 0.0, bmax, tol);
}

double signed_temperature_of_energy(std::span<const double> energies, double target,
                                    std::optional<double> beta_max) {
  if (energies.empty()) throw EmptyWindow("temperature of an empty spectrum");
  if (target <= canonical_energy(energies, 0.0)) {
    return temperature_of_energy(energies, target, beta_max);
  }
  std::vector<double> flipped(energies.begin(), energies.end());
  for (double& e : flipped) e = -e;
  return -temperature_of_energy(flipped, -target, beta_max);
}

EthDiagonalReport diagonal_fluctuations(std::span<const EnergyValue> input,
                                        const DiagonalOptions& options) {
  if (!(options.edge_fraction >= 0.0 && options.edge_fraction < 0.5)) {
    throw ParameterOutOfRange("edge fraction must lie in [0, 0.5)");
  }
  if (options.min_states < 1) throw ParameterOutOfRange("min_states must be >= 1");
  if (options.window.mode == MicroWindow::Mode::FixedCount && options.window.count < 1) {
    throw ParameterOutOfRange("window count must be >= 1");
  }
  if (options.window.mode == MicroWindow::Mode::FixedWidth && !(options.window.width > 0.0)) {
    throw ParameterOutOfRange("window width must be > 0");
  }

  EthDiagonalReport report;
  report.options = options;
  report.pairs.assign(input.begin(), input.end());
  std::stable_sort(report.pairs.begin(), report.pairs.end(),
                   [](const EnergyValue& a, const EnergyValue& b) { return a.energy < b.energy; });
  const auto& pairs = report.pairs;
  const std::size_t n = pairs.size();
  report.window_id.assign(n, -1);
  report.delta.assign(n, std::numeric_limits<double>::quiet_NaN());
  report.micro.assign(n, std::numeric_limits<double>::quiet_NaN());

  const double width = n ? pairs.back().energy - pairs.front().energy : 0.0;
  const double degenerate_gap = options.degeneracy_tolerance * width;
  const auto edge = static_cast<std::size_t>(std::floor(n * options.edge_fraction));
  report.edge_excluded = std::min(n, 2 * edge);

  std::vector<std::size_t> eligible;
  for (std::size_t i = edge; i + edge < n; ++i) {
    const bool below = i > 0 && pairs[i].energy - pairs[i - 1].energy <= degenerate_gap;
    const bool above = i + 1 < n && pairs[i + 1].energy - pairs[i].energy <= degenerate_gap;
    if (below || above) {
      ++report.degenerate_excluded;
      continue;
    }
    eligible.push_back(i);
  }

  // Contiguous groups of indices into `eligible`.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  if (options.window.mode == MicroWindow::Mode::FixedCount) {
    if (eligible.size() < options.min_states) {
      throw InsufficientStates("only " + std::to_string(eligible.size()) +
                               " eligible states, need " + std::to_string(options.min_states));
    }
    const std::size_t m = options.window.count;
    for (std::size_t start = 0; start < eligible.size(); start += m) {
      groups.emplace_back(start, std::min(start + m, eligible.size()));
    }
    if (groups.size() > 1 && groups.back().second - groups.back().first < options.min_states) {
      groups[groups.size() - 2].second = groups.back().second;
      groups.pop_back();
    }
  } else {
    std::size_t start = 0;
    while (start < eligible.size()) {
      const double lo = pairs[eligible[start]].energy;
      std::size_t stop = start;
      while (stop < eligible.size() && pairs[eligible[stop]].energy < lo + options.window.width) {
        ++stop;
      }
      if (stop - start >= options.min_states) groups.emplace_back(start, stop);
      start = stop;
    }
    if (groups.empty()) {
      throw InsufficientStates("no energy shell of width " + std::to_string(options.window.width) +
                               " holds " + std::to_string(options.min_states) + " states");
    }
  }

  const double central_lo = 0.5 * static_cast<double>(n) * (1.0 - options.central_fraction);
  const double central_hi = 0.5 * static_cast<double>(n) * (1.0 + options.central_fraction);
  double max_abs_value = 0.0;
  for (const auto& p : pairs) max_abs_value = std::max(max_abs_value, std::abs(p.value));

  double central_sum = 0.0;
  for (const auto& [first, last] : groups) {
    EthWindow w;
    w.id = report.windows.size();
    w.count = last - first;
    double sum = 0.0;
    double esum = 0.0;
    for (std::size_t g = first; g < last; ++g) {
      sum += pairs[eligible[g]].value;
      esum += pairs[eligible[g]].energy;
    }
    w.micro_average = sum / static_cast<double>(w.count);
    w.energy_mean = esum / static_cast<double>(w.count);
    w.energy_lo = pairs[eligible[first]].energy;
    w.energy_hi = pairs[eligible[last - 1]].energy;
    double dsum = 0.0;
    for (std::size_t g = first; g < last; ++g) {
      const std::size_t i = eligible[g];
      const double d = pairs[i].value - w.micro_average;
      report.delta[i] = d;
      report.micro[i] = w.micro_average;
      report.window_id[i] = static_cast<long>(w.id);
      dsum += d;
    }
    w.delta_mean = dsum / static_cast<double>(w.count);
    double var = 0.0;
    for (std::size_t g = first; g < last; ++g) {
      const double d = report.delta[eligible[g]] - w.delta_mean;
      var += d * d;
    }
    w.delta_variance = var / static_cast<double>(w.count);
    w.entropy = std::log(static_cast<double>(w.count));
    const double middle = 0.5 * static_cast<double>(eligible[first] + eligible[last - 1]);
    w.central = middle >= central_lo && middle <= central_hi;
    report.max_abs_window_mean = std::max(report.max_abs_window_mean, std::abs(w.delta_mean));
    if (w.central) {
      central_sum += w.delta_variance * static_cast<double>(w.count);
      report.central_count += w.count;
    }
    report.micro_curve.push_back({w.energy_mean, w.micro_average});
    report.windows.push_back(w);
  }

  if (report.central_count == 0) {
    // No window centre falls in the central band: use the one nearest the middle.
    const double mid = 0.5 * static_cast<double>(n);
    auto best = report.windows.begin();
    double best_distance = std::numeric_limits<double>::infinity();
    for (auto it = report.windows.begin(); it != report.windows.end(); ++it) {
      const auto& [first, last] = groups[it->id];
      const double middle = 0.5 * static_cast<double>(eligible[first] + eligible[last - 1]);
      if (std::abs(middle - mid) < best_distance) {
        best_distance = std::abs(middle - mid);
        best = it;
      }
    }
    best->central = true;
    central_sum = best->delta_variance * static_cast<double>(best->count);
    report.central_count = best->count;
  }
  report.central_variance = central_sum / static_cast<double>(report.central_count);

  if (report.max_abs_window_mean > 1e-12 * std::max(1.0, max_abs_value)) {
    throw Error("window mean of Delta is " + std::to_string(report.max_abs_window_mean) +
                ", expected zero");
  }
  return report;
}

EnergyWindow central_energy_window(const RVector& energies, double fraction) {
  const auto n = static_cast<std::size_t>(energies.size());
  if (n == 0) throw EmptyWindow("empty spectrum");
  std::vector<double> sorted(energies.data(), energies.data() + n);
  std::sort(sorted.begin(), sorted.end());
  const double half = 0.5 * std::clamp(fraction, 0.0, 1.0) * static_cast<double>(n);
  const double mid = 0.5 * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(mid - half)));
  const auto hi = std::min(n - 1, static_cast<std::size_t>(std::ceil(mid + half)));
  return {sorted[lo], sorted[hi]};
}

std::vector<double> EthOffdiagReport::omega_centers() const {
  std::vector<double> c;
  for (std::size_t b = 0; b + 1 < omega_edges.size(); ++b) {
    c.push_back(0.5 * (omega_edges[b] + omega_edges[b + 1]));
  }
  return c;
}

EthOffdiagReport offdiagonal_statistics(const EigenSystem& es, const OperatorMatrix& o,
                                        const EnergyWindow& window, const OmegaBins& bins) {
  constexpr std::size_t kMinStates = 30;
  if (bins.count < 1) throw ParameterOutOfRange("need at least one omega bin");
  const CMatrix oe = to_eigenbasis(es, o);
  const auto n = es.energies.size();
  const auto& e = es.energies;

  EthOffdiagReport report;
  double dsum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (e(i) >= window.lo && e(i) <= window.hi) {
      ++report.states_in_window;
      dsum += oe(i, i).real();
    }
  }
  if (report.states_in_window < kMinStates) {
    throw InsufficientStates("energy window [" + std::to_string(window.lo) + ", " +
                             std::to_string(window.hi) + "] holds " +
                             std::to_string(report.states_in_window) + " states, need " +
                             std::to_string(kMinStates));
  }
  report.diag_mean_ref = dsum / static_cast<double>(report.states_in_window);
  double vsum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (e(i) >= window.lo && e(i) <= window.hi) {
      const double d = oe(i, i).real() - report.diag_mean_ref;
      vsum += d * d;
    }
  }
  report.diag_variance_ref = vsum / static_cast<double>(report.states_in_window);

  std::vector<std::pair<double, double>> samples;  // (omega, |O_ij|^2)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double mean_energy = 0.5 * (e(i) + e(j));
      if (mean_energy < window.lo || mean_energy > window.hi) continue;
      samples.emplace_back(e(j) - e(i), std::norm(oe(i, j)));
    }
  }
  report.total_pairs = samples.size();
  if (samples.empty()) throw InsufficientStates("no eigenstate pairs in the energy window");

  double omega_max = bins.omega_max;
  if (!(omega_max > 0.0)) {
    for (const auto& s : samples) omega_max = std::max(omega_max, s.first);
    if (!(omega_max > 0.0)) omega_max = 1.0;
  }
  const double bin_width = omega_max / static_cast<double>(bins.count);
  for (std::size_t b = 0; b <= bins.count; ++b) report.omega_edges.push_back(b * bin_width);
  std::vector<double> sums(bins.count, 0.0);
  report.pair_count.assign(bins.count, 0);
  for (const auto& [omega, abs2] : samples) {
    if (omega > omega_max) continue;
    const auto b = std::min(bins.count - 1, static_cast<std::size_t>(omega / bin_width));
    sums[b] += abs2;
    ++report.pair_count[b];
  }
  for (std::size_t b = 0; b < bins.count; ++b) {
    const auto c = report.pair_count[b];
    const double mean = c ? sums[b] / static_cast<double>(c) : 0.0;
    report.mean_abs2.push_back(mean);
    report.flagged.push_back(c < bins.min_pairs);
    if (mean == 0.0) {
      report.f_estimate.push_back(0.0);
    } else {
      report.f_estimate.push_back(report.diag_variance_ref > 0.0
                                      ? mean / report.diag_variance_ref
                                      : std::numeric_limits<double>::infinity());
    }
  }

  std::stable_sort(samples.begin(), samples.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const std::size_t decile = std::max<std::size_t>(1, samples.size() / 10);
  double small = 0.0;
  double large = 0.0;
  for (std::size_t i = 0; i < decile; ++i) {
    small += samples[i].second;
    large += samples[samples.size() - 1 - i].second;
  }
  report.small_omega_decile_mean = small / static_cast<double>(decile);
  report.large_omega_decile_mean = large / static_cast<double>(decile);
  return report;
}

SumRuleResult sum_rule_check(const EigenSystem& es, const OperatorMatrix& a) {
  require_same_dim(es, a);
  const auto n = static_cast<Eigen::Index>(es.dim());
  SumRuleResult result;
  if (n == 0) return result;
  const CMatrix av = a.entries * es.vectors;
  const CMatrix ae = es.vectors.adjoint() * av;
  const double amax = a.entries.cwiseAbs().maxCoeff();
  result.bound = 1e-9 * amax * amax * static_cast<double>(n);
  if (result.bound == 0.0) result.bound = std::numeric_limits<double>::min();
  result.residuals.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx aii = es.vectors.col(i).dot(av.col(i));
    const double lhs = (av.col(i) - aii * es.vectors.col(i)).squaredNorm();
    double rhs = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) rhs += std::norm(ae(j, i));
    }
    const double r = std::abs(lhs - rhs);
    result.residuals.push_back(r);
    result.max_residual = std::max(result.max_residual, r);
  }
  return result;
}

}  // namespace ethlab
