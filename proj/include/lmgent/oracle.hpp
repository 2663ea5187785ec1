#pragma once

#include <Eigen/Dense>

#include "lmgent/concurrence.hpp"
#include "lmgent/params.hpp"

namespace lmgent::oracle {

inline constexpr int kMaxSpins = 12;

/// Site-by-site construction, b sum_i s_z^i - (1/n) sum_{i != j} v_mu s_mu^i s_mu^j.
/// Basis bit i = 0 is spin up on site i.
Eigen::MatrixXd full_hamiltonian(const ModelParams& p);

/// The same operator from collective spins, b S_z - (1/n) sum_mu v_mu (S_mu^2 - n/4).
Eigen::MatrixXd collective_hamiltonian(const ModelParams& p);

struct DenseThermalState {
  int n = 0;
  Eigen::MatrixXd rho;
};

/// Dense reference: full eigendecomposition reused across temperatures.
class DenseSystem {
 public:
  explicit DenseSystem(const ModelParams& p);

  [[nodiscard]] int n() const { return params_.n; }
  [[nodiscard]] const Eigen::VectorXd& energies() const { return energies_; }
  [[nodiscard]] double log_partition(double T) const;
  [[nodiscard]] DenseThermalState thermal_state(double T) const;
  /// Two-site reduced density built directly from the eigenvectors.
  [[nodiscard]] Eigen::Matrix4d reduced_pair_matrix(double T, int i, int j) const;

 private:
  [[nodiscard]] Eigen::VectorXd weights(double T) const;

  ModelParams params_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
};

/// Partial trace over all sites except i, j.
Eigen::Matrix4d partial_trace_pair(const DenseThermalState& state, int i, int j);

/// Maps a two-site density to PairDensity after asserting the X structure
/// (forbidden entries and the p_0 asymmetry below 1e-10).
PairDensity to_pair_density(const Eigen::Matrix4d& rho);
PairDensity reduced_pair(const DenseThermalState& state, int i, int j);

struct OracleResult {
  double log_z = 0.0;
  PairDensity pair;
  ConcurrenceReport report;
  double wootters = 0.0;
};

/// Concurrence from the X form and from the general Wootters formula; throws
/// SymmetryViolation when the two differ by more than 1e-8.
OracleResult oracle_concurrence(const DenseSystem& sys, double T, int i = 0, int j = 1);
OracleResult oracle_concurrence(const ModelParams& p, double T, int i = 0, int j = 1);

}  // namespace lmgent::oracle
