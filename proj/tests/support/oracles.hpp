#pragma once

// Reference implementations that share no code with the library: plain
// site-basis construction, brute-force sums and simple quadrature.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline std::uint64_t choose(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j > 0; --j) row[j] += row[j - 1];
  }
  return row[static_cast<std::size_t>(r)];
}

/// All L-bit patterns with N bits set, by scanning every integer.
inline std::vector<std::uint64_t> patterns(int sites, int particles) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << sites); ++s) {
    if (std::popcount(s) == particles) out.push_back(s);
  }
  return out;
}

struct Couplings {
  double t = 1.0, tp = 0.0, V = 1.0, Vp = 0.0;
};

/// H in the plain occupation basis (real, since hopping amplitudes are real
/// and hard-core bosons carry no sign).
inline Eigen::MatrixXd site_hamiltonian(int L, int N, const Couplings& c) {
  const auto states = patterns(L, N);
  std::map<std::uint64_t, int> index;
  for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = static_cast<int>(i);
  const int dim = static_cast<int>(states.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  auto occ = [](std::uint64_t s, int i) { return static_cast<int>((s >> i) & 1U); };
  for (int a = 0; a < dim; ++a) {
    const auto s = states[a];
    for (int i = 0; i < L; ++i) {
      for (int r : {1, 2}) {
        const int j = (i + r) % L;
        const double hop = r == 1 ? c.t : c.tp;
        const double v = r == 1 ? c.V : c.Vp;
        h(a, a) += v * occ(s, i) * occ(s, j);
        // b+_i b_j and b+_j b_i
        if (occ(s, j) && !occ(s, i)) {
          const auto t = s ^ (std::uint64_t{1} << j) ^ (std::uint64_t{1} << i);
          h(index.at(t), a) -= hop;
        }
        if (occ(s, i) && !occ(s, j)) {
          const auto t = s ^ (std::uint64_t{1} << i) ^ (std::uint64_t{1} << j);
          h(index.at(t), a) -= hop;
        }
      }
    }
  }
  return h;
}

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

inline Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  }
  return (a + a.adjoint()) / 2.0;
}

inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

inline Eigen::VectorXcd random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = {g(rng), g(rng)};
  return v.normalized();
}

/// Poisson r-ratio: for i.i.d. exponential spacings r = min/max has density
/// 2 / (1 + r)^2 on [0, 1].
inline double poisson_mean_r() {
  return simpson([](double r) { return 2.0 * r / ((1.0 + r) * (1.0 + r)); }, 0.0, 1.0, 20000);
}

}  // namespace oracle
