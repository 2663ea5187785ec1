#include "lmgent/oracle.hpp"

#include <cmath>
#include <limits>

#include "lmgent/errors.hpp"

namespace lmgent::oracle {

namespace {

void check_size(const ModelParams& p) {
  if (p.n < 1 || p.n > kMaxSpins)
    throw DomainError("dense oracle supports 1 <= n <= " + std::to_string(kMaxSpins) +
                      ", got n=" + std::to_string(p.n));
}

double site_sz(unsigned x, int i) { return (x >> i) & 1u ? -0.5 : 0.5; }

}  // namespace

Eigen::MatrixXd full_hamiltonian(const ModelParams& params) {
  const ModelParams p = canonicalize(params);
  check_size(p);
  const unsigned dim = 1u << p.n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const double pair = 2.0 / p.n;  // i != j counts every pair twice
  for (unsigned x = 0; x < dim; ++x) {
    for (int i = 0; i < p.n; ++i) h(x, x) += p.b * site_sz(x, i);
    for (int i = 0; i < p.n; ++i)
      for (int j = i + 1; j < p.n; ++j) {
        h(x, x) -= pair * p.vz * site_sz(x, i) * site_sz(x, j);
        const unsigned y = x ^ (1u << i) ^ (1u << j);
        const bool same = ((x >> i) & 1u) == ((x >> j) & 1u);
        // <y| s_x s_x |x> = 1/4; <y| s_y s_y |x> = -1/4 (same) or +1/4 (opposite)
        h(y, x) -= pair * (0.25 * p.vx + (same ? -0.25 : 0.25) * p.vy);
      }
  }
  return h;
}

Eigen::MatrixXd collective_hamiltonian(const ModelParams& params) {
  const ModelParams p = canonicalize(params);
  check_size(p);
  const unsigned dim = 1u << p.n;
  Eigen::MatrixXd sx = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd ay = Eigen::MatrixXd::Zero(dim, dim);  // S_y = i * ay
  Eigen::MatrixXd sz = Eigen::MatrixXd::Zero(dim, dim);
  for (unsigned x = 0; x < dim; ++x)
    for (int i = 0; i < p.n; ++i) {
      sz(x, x) += site_sz(x, i);
      const unsigned y = x ^ (1u << i);
      sx(y, x) += 0.5;
      // s_y|u> = (i/2)|d>, s_y|d> = (-i/2)|u>
      ay(y, x) += ((x >> i) & 1u) ? -0.5 : 0.5;
    }
  const double n = p.n;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  return p.b * sz - (p.vx * (sx * sx - 0.25 * n * id) + p.vy * (-ay * ay - 0.25 * n * id) +
                     p.vz * (sz * sz - 0.25 * n * id)) /
                        n;
}

DenseSystem::DenseSystem(const ModelParams& p) : params_(canonicalize(p)) {
  check_size(params_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full_hamiltonian(params_));
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

Eigen::VectorXd DenseSystem::weights(double T) const {
  if (T < 0.0 || !std::isfinite(T)) throw DomainError("temperature must be finite and >= 0");
  const double e0 = energies_.minCoeff();
  Eigen::VectorXd w(energies_.size());
  if (T == 0.0) {
    const double tol = 1e-12 * params_.vx;
    for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = energies_(k) - e0 <= tol ? 1.0 : 0.0;
  } else {
    for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = std::exp(-(energies_(k) - e0) / T);
  }
  return w / w.sum();
}

double DenseSystem::log_partition(double T) const {
  const double e0 = energies_.minCoeff();
  if (T == 0.0) {
    double count = 0.0;
    for (Eigen::Index k = 0; k < energies_.size(); ++k)
      if (energies_(k) - e0 <= 1e-12 * params_.vx) count += 1.0;
    return std::log(count);
  }
  double acc = 0.0;
  for (Eigen::Index k = 0; k < energies_.size(); ++k) acc += std::exp(-(energies_(k) - e0) / T);
  return std::log(acc) - e0 / T;
}

DenseThermalState DenseSystem::thermal_state(double T) const {
  const Eigen::VectorXd w = weights(T);
  return DenseThermalState{params_.n, vectors_ * w.asDiagonal() * vectors_.transpose()};
}

Eigen::Matrix4d DenseSystem::reduced_pair_matrix(double T, int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= params_.n || j >= params_.n)
    throw DomainError("reduced pair needs two distinct valid sites");
  const Eigen::VectorXd w = weights(T);
  const unsigned dim = 1u << params_.n;
  const Eigen::MatrixXd vw = vectors_ * w.asDiagonal();
  Eigen::Matrix4d out = Eigen::Matrix4d::Zero();
  const unsigned mask = (1u << i) | (1u << j);
  for (unsigned x = 0; x < dim; ++x) {
    const int a = 2 * ((x >> i) & 1u) + ((x >> j) & 1u);
    for (int c = 0; c < 4; ++c) {
      const unsigned y = (x & ~mask) | ((c >> 1) ? (1u << i) : 0u) | ((c & 1) ? (1u << j) : 0u);
      out(a, c) += vw.row(x).dot(vectors_.row(y));
    }
  }
  return out;
}

Eigen::Matrix4d partial_trace_pair(const DenseThermalState& state, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= state.n || j >= state.n)
    throw DomainError("reduced pair needs two distinct valid sites");
  const unsigned dim = 1u << state.n;
  const unsigned mask = (1u << i) | (1u << j);
  Eigen::Matrix4d out = Eigen::Matrix4d::Zero();
  for (unsigned x = 0; x < dim; ++x) {
    const int a = 2 * ((x >> i) & 1u) + ((x >> j) & 1u);
    for (int c = 0; c < 4; ++c) {
      const unsigned y = (x & ~mask) | ((c >> 1) ? (1u << i) : 0u) | ((c & 1) ? (1u << j) : 0u);
      out(a, c) += state.rho(x, y);
    }
  }
  return out;
}

PairDensity to_pair_density(const Eigen::Matrix4d& rho) {
  constexpr double tol = 1e-10;
  const int forbidden[][2] = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  for (const auto& f : forbidden)
    if (std::abs(rho(f[0], f[1])) > tol || std::abs(rho(f[1], f[0])) > tol)
      throw SymmetryViolation("reduced pair density has parity-forbidden coherences");
  if (std::abs(rho(1, 1) - rho(2, 2)) > tol || std::abs(rho(0, 3) - rho(3, 0)) > tol ||
      std::abs(rho(1, 2) - rho(2, 1)) > tol)
    throw SymmetryViolation("reduced pair density is not exchange symmetric");
  PairDensity pd;
  pd.p_plus = rho(0, 0);
  pd.p_minus = rho(3, 3);
  pd.p_zero = 0.5 * (rho(1, 1) + rho(2, 2));
  pd.alpha_plus = rho(0, 3);
  pd.alpha_minus = rho(1, 2);
  pd.obs.ax = 0.5 * (pd.alpha_plus + pd.alpha_minus);
  pd.obs.ay = 0.5 * (pd.alpha_minus - pd.alpha_plus);
  pd.obs.az = 0.25 - pd.p_zero;
  pd.obs.sz = 0.5 * (pd.p_plus - pd.p_minus);
  return pd;
}

PairDensity reduced_pair(const DenseThermalState& state, int i, int j) {
  return to_pair_density(partial_trace_pair(state, i, j));
}

OracleResult oracle_concurrence(const DenseSystem& sys, double T, int i, int j) {
  const Eigen::Matrix4d rho = sys.reduced_pair_matrix(T, i, j);
  OracleResult r;
  r.log_z = sys.log_partition(T);
  r.pair = to_pair_density(rho);
  r.report = concurrence(r.pair);
  r.wootters = wootters_concurrence(0.5 * (rho + rho.transpose()));
  if (std::abs(r.wootters - r.report.c) > 1e-8)
    throw SymmetryViolation("X-form and Wootters concurrences disagree: " +
                            std::to_string(r.report.c) + " vs " + std::to_string(r.wootters));
  return r;
}

OracleResult oracle_concurrence(const ModelParams& p, double T, int i, int j) {
  return oracle_concurrence(DenseSystem(p), T, i, j);
}

}  // namespace lmgent::oracle
