#pragma once

#include <array>
#include <optional>

#include "lmgent/concurrence.hpp"
#include "lmgent/params.hpp"

namespace lmgent {

using Vec3 = std::array<double, 3>;

struct PhaseConstants {
  double b_c = 0.0;           ///< vx - vz
  bool normal_only = false;   ///< vz >= vx: no symmetry-breaking solution
  std::optional<double> chi;  ///< (vy - vz)/(vx - vz)
  double vx = 1.0;

  /// T_c(b) = (vx b/b_c) / ln[(1 + b/b_c)/(1 - b/b_c)], vx/2 at b = 0, 0 for b >= b_c.
  [[nodiscard]] double critical_temperature(double b) const;
};

PhaseConstants critical_constants(const ModelParams& p);

enum class Phase { symmetry_breaking, normal };

struct MeanFieldSolution {
  Phase phase = Phase::normal;
  double T = 0.0;
  Vec3 m{};  ///< magnetisation r_mu / v_mu (finite as v_mu -> 0)
  Vec3 r{};  ///< static fields
  Vec3 f{};  ///< f_mu = v_mu tanh(lambda/2T)/lambda
  double lambda = 0.0;
  double tanh_half = 1.0;  ///< tanh(lambda/2T)
  double omega_sq = 0.0;
  double omega = 0.0;
  double zeta = 0.0;
  /// lambda - RHS of the gap equation at the returned lambda
  double gap_residual = 0.0;
};

/// Selects the stable mean-field minimum (parity breaking for b < b_c and
/// T < T_c(b), normal otherwise) and evaluates lambda, omega and zeta there.
MeanFieldSolution solve_mean_field(const ModelParams& p, double T);

/// Signed omega^2 from the closed form at an arbitrary static point; omega is
/// present only when omega^2 >= 0.
struct RpaEnergy {
  double omega_sq = 0.0;
  std::optional<double> omega;
};
RpaEnergy rpa_energy_general(const Vec3& r, const ModelParams& p, double T);

/// det[1 - 2 v Pi(omega)] from the two-level response of -lambda.s.
double rpa_determinant(const Vec3& r, const ModelParams& p, double T, double omega);

/// Smallest positive root of the RPA determinant in (0, 2 lambda); none if absent.
std::optional<double> rpa_energy_determinant(const Vec3& r, const ModelParams& p, double T);

/// ln Z(r) of the linearised Hamiltonian. Axes with v_mu = 0 must have r_mu = 0.
double log_hartree_partition(const Vec3& r, const ModelParams& p, double T);

/// ln Z_MF + ln[sinh(lambda/2T)/sinh(omega/2T)] - ln(1 - zeta)/2.
/// Throws DivergenceError when omega -> 0 or zeta -> 1.
double log_partition_mfrpa(const ModelParams& p, double T);

struct MfrpaOptions {
  bool hartree_only = false;  ///< drop the delta_eta corrections
  double rel_step = 1e-5;
};

struct MfrpaObservables {
  PairObservables obs;
  MeanFieldSolution mf;
  Vec3 delta_v{};  ///< delta_{v_mu}
  double delta_b = 0.0;
};

/// Hartree terms plus O(1/n) corrections delta_eta from derivatives of lambda,
/// omega, zeta. d lambda/d eta is analytic; omega and zeta use Richardson
/// extrapolated central differences.
MfrpaObservables mfrpa_observables(const ModelParams& p, double T, const MfrpaOptions& opt = {});

/// d lambda / d eta from implicit differentiation of the gap equation; eta
/// indexes (vx, vy, vz, b).
std::array<double, 4> gap_derivatives(const ModelParams& p, const MeanFieldSolution& mf);

/// Same derivatives by central differences of solve_mean_field (test cross-check).
std::array<double, 4> gap_derivatives_numeric(const ModelParams& p, double T, double rel_step = 1e-5);

}  // namespace lmgent
