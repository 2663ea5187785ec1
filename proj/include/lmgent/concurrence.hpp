#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string_view>

namespace lmgent {

/// Pair correlators alpha_mu = <s_mu^i s_mu^j> (i != j) and sz = <s_z^i>.
struct PairObservables {
  double ax = 0.0;
  double ay = 0.0;
  double az = 0.0;
  double sz = 0.0;
};

/// Two-spin reduced state in the X form imposed by permutation and parity
/// symmetry, basis |uu>, |ud>, |du>, |dd>.
struct PairDensity {
  double p_plus = 0.25;
  double p_minus = 0.25;
  double p_zero = 0.25;
  double alpha_plus = 0.0;   ///< <s_+ s_+> = ax - ay
  double alpha_minus = 0.0;  ///< <s_+ s_-> = ax + ay
  PairObservables obs;

  [[nodiscard]] Eigen::Matrix4d matrix() const;
};

enum class EntanglementType { parallel, antiparallel, separable };
std::string_view to_string(EntanglementType t);

struct ConcurrenceReport {
  double c_plus = 0.0;
  double c_minus = 0.0;
  double c = 0.0;
  EntanglementType type = EntanglementType::separable;
  std::optional<double> formation;
};

/// Tolerance used when checking PairDensity invariants.
inline constexpr double kPairTol = 1e-10;

/// n is only used for the bound -1/(4(n-1)) <= alpha_mu <= 1/4; pass n = 0 to skip it.
PairDensity pair_density(const PairObservables& obs, int n = 0);

/// C_+ = 2(|alpha_+| - p_0), C_- = 2(|alpha_-| - sqrt(p_+ p_-)), C = max(C_+, C_-, 0).
/// Throws DomainError if p_+ p_- is negative beyond tolerance.
ConcurrenceReport concurrence(const PairDensity& pd, bool with_formation = false);

ConcurrenceReport concurrence(const PairObservables& obs, int n, bool with_formation = false);

/// Entanglement of formation from the concurrence (binary entropy of q_+).
double formation_entanglement(double c);

/// General Wootters concurrence of a real symmetric two-qubit density.
double wootters_concurrence(const Eigen::Matrix4d& rho);

}  // namespace lmgent
