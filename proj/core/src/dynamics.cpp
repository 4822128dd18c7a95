#include "ethlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ethlab/error.hpp"

namespace ethlab {
namespace {

// (exp(ix) - 1) / (ix): the time average of exp(i omega s) over [0, t], x = omega t.
cplx phase_average(double x) {
  if (std::abs(x) < 1e-8) return {1.0, 0.5 * x};
  const double half = std::sin(0.5 * x);
  return {std::sin(x) / x, 2.0 * half * half / x};
}

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + " has dim " + std::to_string(got) +
                            ", expected " + std::to_string(want));
  }
}

}  // namespace

CVector expand_in_eigenbasis(const StateVector& psi0, const EigenSystem& es) {
  require_dim(static_cast<std::size_t>(psi0.amplitudes.size()), es.dim(), "initial state");
  if (!(psi0.tag == es.tag)) {
    throw DimensionMismatch("initial state in " + psi0.tag.to_string() +
                            " but eigensystem in " + es.tag.to_string());
  }
  return es.vectors.adjoint() * psi0.amplitudes;
}

CVector evolve(const CVector& coefficients, const RVector& energies, double t) {
  require_dim(static_cast<std::size_t>(coefficients.size()),
              static_cast<std::size_t>(energies.size()), "coefficient vector");
  CVector out(coefficients.size());
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
    const double angle = -energies(i) * t;
    out(i) = coefficients(i) * cplx(std::cos(angle), std::sin(angle));
  }
  return out;
}

double expectation(const CVector& coefficients, const CMatrix& o_eigenbasis) {
  return coefficients.dot(o_eigenbasis * coefficients).real();
}

double diagonal_ensemble(const CVector& coefficients, std::span<const double> o_diagonal) {
  require_dim(o_diagonal.size(), static_cast<std::size_t>(coefficients.size()),
              "observable diagonal");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
    sum += std::norm(coefficients(i)) * o_diagonal[static_cast<std::size_t>(i)];
  }
  return sum;
}

double participation_ratio(const CVector& coefficients) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
    const double p = std::norm(coefficients(i));
    sum += p * p;
  }
  return 1.0 / sum;
}

MicroCurve MicroCurve::from_samples(std::span<const EnergyValue> samples) {
  if (samples.empty()) throw EmptyWindow("microcanonical curve needs at least one sample");
  std::vector<EnergyValue> sorted(samples.begin(), samples.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const EnergyValue& a, const EnergyValue& b) { return a.energy < b.energy; });
  MicroCurve curve;
  for (const auto& s : sorted) {
    curve.energy.push_back(s.energy);
    curve.value.push_back(s.value);
  }
  return curve;
}

MicroCurve MicroCurve::per_state(const EthDiagonalReport& report) {
  // Degenerate levels are left out of the fluctuation statistics but still
  // belong to the spectrum; they take the average of the nearest window.
  // Only the trimmed edges stay uncovered.
  const std::size_t n = report.pairs.size();
  const std::size_t edge = report.edge_excluded / 2;
  std::vector<EnergyValue> samples;
  for (std::size_t i = edge; i + edge < n; ++i) {
    if (report.window_id[i] >= 0) {
      samples.push_back({report.pairs[i].energy, report.micro[i]});
      continue;
    }
    std::size_t best = n;
    for (std::size_t d = 1; d < n && best == n; ++d) {
      if (i >= d && report.window_id[i - d] >= 0) best = i - d;
      else if (i + d < n && report.window_id[i + d] >= 0) best = i + d;
    }
    if (best < n) samples.push_back({report.pairs[i].energy, report.micro[best]});
  }
  return from_samples(samples);
}

double MicroCurve::at(double e) const {
  if (e <= energy.front()) return value.front();
  if (e >= energy.back()) return value.back();
  const auto it = std::upper_bound(energy.begin(), energy.end(), e);
  const auto hi = static_cast<std::size_t>(it - energy.begin());
  const auto lo = hi - 1;
  const double span = energy[hi] - energy[lo];
  if (span <= 0.0) return value[lo];
  const double w = (e - energy[lo]) / span;
  return (1.0 - w) * value[lo] + w * value[hi];
}

double eth_prediction(const CVector& coefficients, const RVector& energies,
                      const MicroCurve& curve, double weight_tolerance) {
  require_dim(static_cast<std::size_t>(coefficients.size()),
              static_cast<std::size_t>(energies.size()), "coefficient vector");
  if (curve.energy.empty()) throw EmptyWindow("empty microcanonical curve");
  double sum = 0.0;
  double outside = 0.0;
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
    const double w = std::norm(coefficients(i));
    if (energies(i) < curve.front() || energies(i) > curve.back()) outside += w;
    sum += w * curve.at(energies(i));
  }
  if (outside > weight_tolerance) {
    throw SupportNotCovered("weight " + std::to_string(outside) +
                            " lies outside the microcanonical curve [" +
                            std::to_string(curve.front()) + ", " +
                            std::to_string(curve.back()) + "]");
  }
  return sum;
}

std::vector<double> log_time_grid(double t_min, double t_max, std::size_t points) {
  if (!(t_min > 0.0) || !(t_max >= t_min) || points < 1) {
    throw ParameterOutOfRange("log time grid needs 0 < t_min <= t_max and points >= 1");
  }
  std::vector<double> grid;
  if (points == 1) return {t_min};
  const double a = std::log(t_min);
  const double b = std::log(t_max);
  for (std::size_t i = 0; i < points; ++i) {
    grid.push_back(std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1)));
  }
  grid.front() = t_min;
  grid.back() = t_max;
  return grid;
}

StateVector prepare_state(const InitialState& init, const MomentumSector& sector) {
  const auto dim = static_cast<Eigen::Index>(sector.dim());
  if (const auto* g = std::get_if<initial::GroundState>(&init)) {
    const auto es = diagonalize(build_hcb_hamiltonian(g->params, sector));
    return {sector.tag(), es.vectors.col(0)};
  }
  if (const auto* b = std::get_if<initial::BasisState>(&init)) {
    const OccupationState state{b->bits, sector.sites(), sector.particles()};
    const auto hit = sector.lookup(state);
    if (!hit) {
      throw ParameterOutOfRange("occupation state " + to_bit_string(b->bits, sector.sites()) +
                                " has no component in sector " + sector.tag().to_string());
    }
    // <a(k)|T^d a> = exp(-i 2 pi k d / L) / sqrt(p); renormalized to unit modulus.
    const double angle = -2.0 * std::numbers::pi *
                         static_cast<double>((static_cast<long>(sector.momentum()) * hit->offset) %
                                             sector.sites()) /
                         sector.sites();
    CVector psi = CVector::Zero(dim);
    psi(static_cast<Eigen::Index>(hit->index)) = cplx(std::cos(angle), std::sin(angle));
    return {sector.tag(), psi};
  }
  const auto& a = std::get<initial::Amplitudes>(init);
  require_dim(static_cast<std::size_t>(a.values.size()), sector.dim(), "amplitude vector");
  const double norm = a.values.norm();
  if (!(norm > 0.0)) throw ParameterOutOfRange("initial amplitudes have zero norm");
  return {sector.tag(), a.values / norm};
}

QuenchTrace quench_trace(const EigenSystem& es, const CMatrix& o_eigenbasis, const CVector& c0,
                         std::span<const double> times, const MicroCurve& curve) {
  const auto n = c0.size();
  require_dim(static_cast<std::size_t>(n), es.dim(), "coefficient vector");
  require_dim(static_cast<std::size_t>(o_eigenbasis.rows()), es.dim(), "observable");

  QuenchTrace trace;
  trace.times.assign(times.begin(), times.end());
  std::vector<double> diag(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = o_eigenbasis(i, i).real();
  trace.diagonal_ensemble_value = diagonal_ensemble(c0, diag);
  trace.eth_prediction_value = eth_prediction(c0, es.energies, curve);
  trace.participation_ratio = participation_ratio(c0);
  trace.initial_energy = c0.cwiseAbs2().dot(es.energies);

  // A_mn = conj(c_m) c_n O_mn; <O>(s) = sum_mn A_mn exp(i (E_m - E_n) s).
  CMatrix weights(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    for (Eigen::Index row = 0; row < n; ++row) {
      weights(row, col) = std::conj(c0(row)) * c0(col) * o_eigenbasis(row, col);
    }
  }
  for (double t : times) {
    const CVector ct = evolve(c0, es.energies, t);
    const cplx value = ct.dot(o_eigenbasis * ct);
    trace.max_imaginary = std::max(trace.max_imaginary, std::abs(value.imag()));
    trace.values.push_back(value.real());
    trace.norms.push_back(ct.norm());
    trace.energies.push_back(ct.cwiseAbs2().dot(es.energies));

    double avg = trace.diagonal_ensemble_value;
    for (Eigen::Index col = 0; col < n; ++col) {
      for (Eigen::Index row = 0; row < col; ++row) {
        const double omega = es.energies(row) - es.energies(col);
        // The (row, col) and (col, row) terms are complex conjugates.
        avg += 2.0 * (weights(row, col) * phase_average(omega * t)).real();
      }
    }
    trace.running_average.push_back(avg);
  }
  return trace;
}

QuenchTrace run_quench(const InitialState& init, const HcbParams& post,
                       const MomentumSector& sector, const ObservableSpec& observable,
                       std::span<const double> times, const QuenchOptions& options) {
  const auto es = diagonalize(build_hcb_hamiltonian(post, sector));
  const auto o = build_observable(observable, sector);
  const auto psi0 = prepare_state(init, sector);
  const CVector c0 = expand_in_eigenbasis(psi0, es);
  const auto report = diagonal_fluctuations(eigenstate_expectations(es, o), options.micro);
  return quench_trace(es, to_eigenbasis(es, o), c0, times, MicroCurve::per_state(report));
}

}  // namespace ethlab
