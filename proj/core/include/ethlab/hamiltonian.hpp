#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <variant>

#include "ethlab/basis.hpp"
#include "ethlab/linalg.hpp"

namespace ethlab {

/// Hard-core bosons on a periodic ring with NN and NNN hopping/interaction:
///   H = sum_i [ -t (b+_i b_{i+1} + h.c.) + V n_i n_{i+1}
///               -t'(b+_i b_{i+2} + h.c.) + V' n_i n_{i+2} ]
struct HcbParams {
  double t = 1.0;
  double t_prime = 0.0;
  double V = 1.0;
  double V_prime = 0.0;
  int sites = 0;
  int particles = 0;

  /// Throws ParameterOutOfRange unless 3 <= L <= max and 0 <= N <= L.
  void validate(int max_sites = kDefaultMaxSites) const;
};

/// Dense Hermitian matrix of an operator restricted to one momentum sector.
struct OperatorMatrix {
  SectorTag tag;
  CMatrix entries;

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
};

namespace observable {
struct DensityProduct {
  int i = 0;
  int j = 1;
};
struct Occupancy {
  int i = 0;
};
struct NearestNeighborHop {
  int i = 0;
};
/// S(q) = (1/L) |sum_j exp(i 2 pi q j / L) n_j|^2, q an integer mode index.
struct StructureFactor {
  int q = 0;
};
}  // namespace observable

/// Local observable. Site-resolved kinds are averaged over all translations
/// before projection so that they stay block diagonal in k.
using ObservableSpec = std::variant<observable::DensityProduct, observable::Occupancy,
                                    observable::NearestNeighborHop,
                                    observable::StructureFactor>;

std::string describe(const ObservableSpec& spec);

OperatorMatrix build_hcb_hamiltonian(const HcbParams& params, const MomentumSector& sector);

OperatorMatrix build_observable(const ObservableSpec& spec, const MomentumSector& sector);

/// max_ij |M_ij - conj(M_ji)|
double hermiticity_residual(const OperatorMatrix& m);

// Matrix dumps. Binary layout (little endian):
//   char[8] "ETHLABM1", int64 dim, int32 L, int32 N, int32 k,
//   then dim*dim (re, im) float64 pairs in row-major order.
// CSV layout: header line "dim,L,N,k", one line with those values, then
// dim lines each holding 2*dim values re_0,im_0,re_1,im_1,...
void write_matrix_binary(const std::filesystem::path& path, const OperatorMatrix& m);
OperatorMatrix read_matrix_binary(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const OperatorMatrix& m);
OperatorMatrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace ethlab
