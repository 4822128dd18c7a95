#include "ethlab/entanglement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>

#include <Eigen/Dense>

#include "ethlab/error.hpp"
#include "ethlab/eth.hpp"

namespace ethlab {
namespace {

// Site (offset + s) mod L of the lattice -> bit s of the subsystem pattern.
Bits extract_sites(Bits bits, int sites, int offset, int length) {
  Bits out = 0;
  for (int s = 0; s < length; ++s) {
    const int site = (offset + s) % sites;
    if ((bits >> site) & 1U) out |= Bits{1} << s;
  }
  return out;
}

}  // namespace

FullBasisState lift_to_full_basis(const CVector& v, const MomentumSector& sector) {
  if (static_cast<std::size_t>(v.size()) != sector.dim()) {
    throw DimensionMismatch("vector of dim " + std::to_string(v.size()) +
                            " does not match sector " + sector.tag().to_string() + " of dim " +
                            std::to_string(sector.dim()));
  }
  FullBasisState full;
  full.sites = sector.sites();
  for (const auto& s : enumerate_states(sector.sites(), sector.particles())) {
    full.states.push_back(s.bits);
  }
  full.amplitudes = CVector::Zero(static_cast<Eigen::Index>(full.states.size()));

  const int sites = sector.sites();
  const double theta = 2.0 * std::numbers::pi * sector.momentum() / sites;
  const auto reps = sector.representatives();
  const auto periods = sector.periods();
  const auto norms = sector.norms();
  for (std::size_t a = 0; a < sector.dim(); ++a) {
    const cplx va = v(static_cast<Eigen::Index>(a));
    for (int r = 0; r < periods[a]; ++r) {
      const Bits s = translate(reps[a], sites, r);
      const auto it = std::lower_bound(full.states.begin(), full.states.end(), s);
      const double angle = theta * r;
      full.amplitudes(it - full.states.begin()) =
          va * cplx(std::cos(angle), std::sin(angle)) / norms[a];
    }
  }
  return full;
}

CVector project_to_sector(const FullBasisState& full, const MomentumSector& sector) {
  if (full.sites != sector.sites()) {
    throw DimensionMismatch("full-basis state on L=" + std::to_string(full.sites) +
                            " vs sector " + sector.tag().to_string());
  }
  const double theta = 2.0 * std::numbers::pi * sector.momentum() / sector.sites();
  CVector v = CVector::Zero(static_cast<Eigen::Index>(sector.dim()));
  const auto norms = sector.norms();
  for (std::size_t i = 0; i < full.states.size(); ++i) {
    const auto hit = sector.lookup_bits(full.states[i]);
    if (!hit) continue;
    // <a(k)|T^r a> = exp(-i theta r) / sqrt(p)
    const double angle = -theta * hit->offset;
    v(static_cast<Eigen::Index>(hit->index)) +=
        cplx(std::cos(angle), std::sin(angle)) / norms[hit->index] *
        full.amplitudes(static_cast<Eigen::Index>(i));
  }
  return v;
}

RVector ReducedDensityMatrix::spectrum() const {
  RVector lambda;
  if (particle_number_block_residual(*this) == 0.0) {
    // Fixed total N makes rho_A block diagonal in the subsystem particle
    // number; the blocks are far cheaper than the full 2^l matrix.
    const auto n = entries.rows();
    std::vector<std::vector<Eigen::Index>> blocks;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto count = static_cast<std::size_t>(std::popcount(static_cast<Bits>(i)));
      if (blocks.size() <= count) blocks.resize(count + 1);
      blocks[count].push_back(i);
    }
    std::vector<double> values;
    for (const auto& idx : blocks) {
      const auto m = static_cast<Eigen::Index>(idx.size());
      CMatrix block(m, m);
      for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) block(a, b) = entries(idx[a], idx[b]);
      }
      Eigen::SelfAdjointEigenSolver<CMatrix> solver(block, Eigen::EigenvaluesOnly);
      values.insert(values.end(), solver.eigenvalues().data(), solver.eigenvalues().data() + m);
    }
    std::sort(values.begin(), values.end());
    lambda = Eigen::Map<const RVector>(values.data(), static_cast<Eigen::Index>(values.size()));
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries, Eigen::EigenvaluesOnly);
    lambda = solver.eigenvalues();
  }
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < 0.0 && lambda(i) > -1e-10) lambda(i) = 0.0;
  }
  return lambda;
}

ReducedDensityMatrix reduced_density_matrix(const FullBasisState& psi, const Cut& cut) {
  const int sites = psi.sites;
  if (cut.length < 1 || cut.length > sites - 1) {
    throw InvalidCut("cut length " + std::to_string(cut.length) + " outside [1, L-1=" +
                     std::to_string(sites - 1) + "]");
  }
  if (cut.length > kMaxSubsystemSites) {
    throw InvalidCut("subsystem of " + std::to_string(cut.length) + " sites exceeds the " +
                     std::to_string(kMaxSubsystemSites) + "-site dense limit");
  }
  if (cut.offset < 0 || cut.offset >= sites) {
    throw InvalidCut("cut offset " + std::to_string(cut.offset) + " outside [0, L)");
  }
  const int rest = sites - cut.length;
  const int rest_offset = (cut.offset + cut.length) % sites;
  const auto dim_a = Eigen::Index{1} << cut.length;

  // psi as a matrix M(a, b) over subsystem patterns a and the environment
  // patterns b that actually occur.
  std::unordered_map<Bits, Eigen::Index> columns;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> slots;
  slots.reserve(psi.states.size());
  for (const Bits s : psi.states) {
    const Bits a = extract_sites(s, sites, cut.offset, cut.length);
    const Bits b = extract_sites(s, sites, rest_offset, rest);
    const auto [it, inserted] = columns.try_emplace(b, static_cast<Eigen::Index>(columns.size()));
    slots.emplace_back(static_cast<Eigen::Index>(a), it->second);
  }
  CMatrix m = CMatrix::Zero(dim_a, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < slots.size(); ++i) {
    m(slots[i].first, slots[i].second) = psi.amplitudes(static_cast<Eigen::Index>(i));
  }
  ReducedDensityMatrix rho{cut, m * m.adjoint()};
  // Exact Hermitian symmetry.
  rho.entries = (0.5 * (rho.entries + rho.entries.adjoint())).eval();
  return rho;
}

double von_neumann_entropy(const ReducedDensityMatrix& rho) {
  const RVector lambda = rho.spectrum();
  double s = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > 0.0) s -= lambda(i) * std::log(lambda(i));
  }
  return std::max(0.0, s);
}

double renyi2_entropy(const ReducedDensityMatrix& rho) {
  const double purity = rho.entries.cwiseAbs2().sum();
  return std::max(0.0, -std::log(purity));
}

double particle_number_block_residual(const ReducedDensityMatrix& rho) {
  double worst = 0.0;
  const auto n = rho.entries.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    const int nj = std::popcount(static_cast<Bits>(j));
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::popcount(static_cast<Bits>(i)) != nj) {
        worst = std::max(worst, std::abs(rho.entries(i, j)));
      }
    }
  }
  return worst;
}

std::vector<EntropyRow> eigenstate_entropy_scan(const EigenSystem& es,
                                                const MomentumSector& sector,
                                                std::span<const int> cuts,
                                                const EntropyComparison& comparison,
                                                std::span<const std::size_t> states) {
  if (es.dim() != sector.dim() || !(es.tag == sector.tag())) {
    throw DimensionMismatch("eigensystem " + es.tag.to_string() + " does not match sector " +
                            sector.tag().to_string());
  }
  std::vector<std::size_t> selected(states.begin(), states.end());
  if (selected.empty()) {
    for (std::size_t i = 0; i < es.dim(); ++i) selected.push_back(i);
  }
  std::vector<EntropyRow> rows;
  for (const std::size_t i : selected) {
    if (i >= es.dim()) {
      throw DimensionMismatch("state index " + std::to_string(i) + " outside eigensystem");
    }
    const auto full = lift_to_full_basis(es.vectors.col(static_cast<Eigen::Index>(i)), sector);
    const double energy = es.energies(static_cast<Eigen::Index>(i));
    double s_density = std::numeric_limits<double>::quiet_NaN();
    if (!comparison.energies.empty()) {
      try {
        const double beta = signed_temperature_of_energy(comparison.energies, energy);
        s_density = canonical_entropy(comparison.energies, beta) / sector.sites();
      } catch (const ParameterOutOfRange&) {
        // E_i outside the canonical range of the reference spectrum.
      }
    }
    for (const int length : cuts) {
      const auto rho = reduced_density_matrix(full, {length, 0});
      rows.push_back({i, energy, length, von_neumann_entropy(rho), renyi2_entropy(rho),
                      s_density * length});
    }
  }
  return rows;
}

}  // namespace ethlab
