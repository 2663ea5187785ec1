#pragma once

#include <optional>
#include <string>

namespace lmgent {

/// Couplings and field of H = b S_z - (1/n) sum_mu v_mu (S_mu^2 - n/4).
/// Energies are in arbitrary units with hbar = k_B = 1.
struct ModelParams {
  int n = 2;
  double b = 0.0;
  double vx = 1.0;
  double vy = 0.0;
  double vz = 0.0;

  /// chi = (vy - vz) / (vx - vz); undefined when vx == vz.
  [[nodiscard]] std::optional<double> chi() const;
  [[nodiscard]] ModelParams scaled(double s) const;
  [[nodiscard]] ModelParams with_field(double field) const;
  [[nodiscard]] std::string describe() const;
};

/// Build params from the anisotropy chi instead of vy.
ModelParams params_from_chi(int n, double b, double vx, double chi, double vz = 0.0);

/// Enforces n >= 1, vx >= 0, |vy| <= vx and maps b < 0 onto b >= 0 (S_z -> -S_z
/// leaves every pairwise quantity unchanged). Throws DomainError otherwise.
ModelParams canonicalize(ModelParams p);

}  // namespace lmgent
