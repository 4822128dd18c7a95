#include "ethlab/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ethlab/error.hpp"

namespace ethlab {
namespace {

struct Term {
  Bits target;
  cplx amplitude;
};

int wrap(int i, int sites) {
  i %= sites;
  return i < 0 ? i + sites : i;
}

// Number of occupied bonds (i, i+d) around the ring.
int bond_count(Bits bits, int sites, int distance) {
  return std::popcount(bits & translate(bits, sites, -distance));
}

// Hopping terms -amp * (b+_i b_{i+d} + h.c.) summed over i, acting on |bits>.
void add_hops(Bits bits, int sites, int distance, double amp, std::vector<Term>& out) {
  if (amp == 0.0) return;
  for (int i = 0; i < sites; ++i) {
    const int j = (i + distance) % sites;
    const Bits bi = Bits{1} << i;
    const Bits bj = Bits{1} << j;
    const bool ni = (bits & bi) != 0;
    const bool nj = (bits & bj) != 0;
    if (ni != nj) out.push_back({bits ^ bi ^ bj, cplx(amp, 0.0)});
  }
}

// Projects a translation-invariant operator, given by its action on
// occupation states, into the momentum sector.
//   <b(k)|O|a(k)> = sum_terms amp * exp(-i 2 pi k d / L) * sqrt(p_a / p_b)
// where each term's target state equals T^d |b>.
template <class Apply>
OperatorMatrix project(const MomentumSector& sector, Apply&& apply) {
  const int sites = sector.sites();
  const int k = sector.momentum();
  const auto dim = static_cast<Eigen::Index>(sector.dim());

  std::vector<cplx> phase(static_cast<std::size_t>(sites));
  for (int m = 0; m < sites; ++m) {
    const double angle = -2.0 * std::numbers::pi * m / sites;
    phase[static_cast<std::size_t>(m)] = cplx(std::cos(angle), std::sin(angle));
  }

  CMatrix raw = CMatrix::Zero(dim, dim);
  const auto reps = sector.representatives();
  const auto norms = sector.norms();
  std::vector<Term> terms;
  for (Eigen::Index a = 0; a < dim; ++a) {
    terms.clear();
    apply(reps[static_cast<std::size_t>(a)], terms);
    for (const auto& term : terms) {
      const auto hit = sector.lookup_bits(term.target);
      if (!hit) continue;
      const auto b = static_cast<Eigen::Index>(hit->index);
      const auto m = static_cast<std::size_t>((static_cast<long>(k) * hit->offset) % sites);
      raw(b, a) += term.amplitude * phase[m] * (norms[static_cast<std::size_t>(a)] /
                                                norms[static_cast<std::size_t>(b)]);
    }
  }

  // Average with the adjoint so entries are exact conjugates of each other.
  OperatorMatrix out{sector.tag(), CMatrix(dim, dim)};
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      out.entries(i, j) = (raw(i, j) + std::conj(raw(j, i))) * 0.5;
    }
  }
  return out;
}

}  // namespace

void HcbParams::validate(int max_sites) const {
  if (sites < 3 || sites > max_sites) {
    throw ParameterOutOfRange("HCB ring needs 3 <= L <= " + std::to_string(max_sites) +
                              ", got L=" + std::to_string(sites));
  }
  if (particles < 0 || particles > sites) {
    throw ParameterOutOfRange("particle count N=" + std::to_string(particles) +
                              " outside [0, L=" + std::to_string(sites) + "]");
  }
  for (double v : {t, t_prime, V, V_prime}) {
    if (!std::isfinite(v)) throw ParameterOutOfRange("HCB couplings must be finite");
  }
}

std::string describe(const ObservableSpec& spec) {
  struct Visitor {
    std::string operator()(const observable::DensityProduct& o) const {
      return "density_product(" + std::to_string(o.i) + "," + std::to_string(o.j) + ")";
    }
    std::string operator()(const observable::Occupancy& o) const {
      return "occupancy(" + std::to_string(o.i) + ")";
    }
    std::string operator()(const observable::NearestNeighborHop& o) const {
      return "nn_hop(" + std::to_string(o.i) + ")";
    }
    std::string operator()(const observable::StructureFactor& o) const {
      return "structure_factor(" + std::to_string(o.q) + ")";
    }
  };
  return std::visit(Visitor{}, spec);
}

OperatorMatrix build_hcb_hamiltonian(const HcbParams& params, const MomentumSector& sector) {
  params.validate();
  if (params.sites != sector.sites() || params.particles != sector.particles()) {
    throw DimensionMismatch("HCB parameters (L=" + std::to_string(params.sites) +
                            ", N=" + std::to_string(params.particles) +
                            ") do not match sector " + sector.tag().to_string());
  }
  const int sites = params.sites;
  return project(sector, [&](Bits bits, std::vector<Term>& out) {
    const double diag = params.V * bond_count(bits, sites, 1) +
                        params.V_prime * bond_count(bits, sites, 2);
    if (diag != 0.0) out.push_back({bits, cplx(diag, 0.0)});
    add_hops(bits, sites, 1, -params.t, out);
    add_hops(bits, sites, 2, -params.t_prime, out);
  });
}

OperatorMatrix build_observable(const ObservableSpec& spec, const MomentumSector& sector) {
  const int sites = sector.sites();
  const double inv_l = 1.0 / sites;

  if (const auto* o = std::get_if<observable::DensityProduct>(&spec)) {
    const int distance = wrap(o->j - o->i, sites);
    if (distance == 0) {
      throw InvalidSpec("density_product(" + std::to_string(o->i) + "," +
                        std::to_string(o->j) +
                        ") refers to a single site; use occupancy instead");
    }
    return project(sector, [&](Bits bits, std::vector<Term>& out) {
      out.push_back({bits, cplx(inv_l * bond_count(bits, sites, distance), 0.0)});
    });
  }
  if (std::holds_alternative<observable::Occupancy>(spec)) {
    return project(sector, [&](Bits bits, std::vector<Term>& out) {
      out.push_back({bits, cplx(inv_l * std::popcount(bits), 0.0)});
    });
  }
  if (std::holds_alternative<observable::NearestNeighborHop>(spec)) {
    return project(sector, [&](Bits bits, std::vector<Term>& out) {
      add_hops(bits, sites, 1, inv_l, out);
    });
  }
  const auto& sf = std::get<observable::StructureFactor>(spec);
  const int q = wrap(sf.q, sites);
  std::vector<double> cosines(static_cast<std::size_t>(sites));
  std::vector<double> sines(static_cast<std::size_t>(sites));
  for (int m = 0; m < sites; ++m) {
    const double angle = 2.0 * std::numbers::pi * m / sites;
    cosines[static_cast<std::size_t>(m)] = m == 0 ? 1.0 : std::cos(angle);
    sines[static_cast<std::size_t>(m)] = m == 0 ? 0.0 : std::sin(angle);
  }
  return project(sector, [&](Bits bits, std::vector<Term>& out) {
    double re = 0.0;
    double im = 0.0;
    for (int j = 0; j < sites; ++j) {
      if (((bits >> j) & 1U) == 0) continue;
      const auto m = static_cast<std::size_t>((static_cast<long>(q) * j) % sites);
      re += cosines[m];
      im += sines[m];
    }
    out.push_back({bits, cplx(inv_l * (re * re + im * im), 0.0)});
  });
}

double hermiticity_residual(const OperatorMatrix& m) {
  double worst = 0.0;
  const auto n = m.entries.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      worst = std::max(worst, std::abs(m.entries(i, j) - std::conj(m.entries(j, i))));
    }
  }
  return worst;
}

}  // namespace ethlab
