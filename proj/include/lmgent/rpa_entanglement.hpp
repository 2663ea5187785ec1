#pragma once

#include <optional>

#include "lmgent/mean_field.hpp"
#include "lmgent/params.hpp"

namespace lmgent {

/// 12^3 / 5^5
inline constexpr double kDeltaCritical = 1728.0 / 3125.0;

struct AsymptoticInputs {
  std::optional<double> chi;
  double btilde = 0.0;   ///< b / b_c
  double delta = 0.0;    ///< n (1 - chi)
  double epsilon = 0.0;  ///< n (1 - btilde^2)
  double lambda = 0.0;
  double omega = 0.0;
};
AsymptoticInputs asymptotic_inputs(const ModelParams& p);

struct FactorizingField {
  double b_s = 0.0;        ///< b_c sqrt(chi)
  double b_s_exact = 0.0;  ///< (1 - 1/n) b_s
};
/// None unless 0 < chi < 1.
std::optional<FactorizingField> factorizing_field(const ModelParams& p);

struct AsymptoticOptions {
  /// Use lambda(T), omega(T) from the mean-field solution instead of the T=0 values.
  bool thermal_mean_field = false;
};

struct AsymptoticConcurrence {
  Phase phase = Phase::symmetry_breaking;
  double lambda = 0.0;
  double omega = 0.0;
  std::optional<double> c_plus;
  std::optional<double> c_minus;  ///< only in the symmetry-breaking phase
  [[nodiscard]] double c() const;
};

/// C_pm = [1 - (omega/(lambda - vy))^{pm 1} coth(omega/2T)]/(n-1) - 2 exp(-lambda/T).
AsymptoticConcurrence asymptotic_concurrence(const ModelParams& p, double T,
                                             const AsymptoticOptions& opt = {});

// Branch forms written with the chi parameterisation of omega.
double cplus_symmetry_breaking(const ModelParams& p, double T);
std::optional<double> cminus_symmetry_breaking(const ModelParams& p, double T);
double cplus_normal(const ModelParams& p, double T);
/// vx = vy limit of C_-.
double cminus_xxz(const ModelParams& p, double T);
/// Common b -> b_c limit of both C_+ branches.
double cplus_critical(const ModelParams& p, double T);

struct FullConcurrence {
  Phase phase = Phase::symmetry_breaking;
  std::optional<double> c_plus;
  std::optional<double> c_minus;           ///< full square root; none when complex
  std::optional<double> c_minus_expanded;  ///< O(1/n) expansion of the square root
  bool complex_termination = false;
  std::optional<double> b_f;  ///< field where C_- turns complex, when it does below b_c
};

/// Full MF+RPA concurrence with lambda(T), omega(T), zeta(T).
FullConcurrence full_concurrence(const ModelParams& p, double T);

/// Radicand of the full C_- square root (units vx = 1); negative means complex.
double cminus_radicand(const ModelParams& p, double T);

/// Smallest field in [0, b_c) where the radicand becomes negative.
std::optional<double> cminus_termination_field(const ModelParams& p, double T);

struct LimitTemperatureRpa {
  std::optional<double> plus;
  std::optional<double> minus;
};

/// Solves the transcendental limit-temperature condition by damped fixed-point
/// iteration with a bisection fallback. A type is absent when it is not
/// entangled at T -> 0.
LimitTemperatureRpa limit_temperature_rpa(const ModelParams& p);

/// Large-field estimate (b + vz) / ln[4(n-1)(b/b_c)/(1-chi)].
double limit_temperature_large_field(const ModelParams& p);

struct SeparableWindow {
  std::optional<double> lower;  ///< b_L^-; none when the window extends through b = 0
  std::optional<double> upper;  ///< b_L^+; none when no parallel entanglement survives
  [[nodiscard]] bool half_open() const { return !lower.has_value(); }
};
/// Field window of zero concurrence at temperature T. Requires 0 < chi < 1.
SeparableWindow separable_window(const ModelParams& p, double T);

struct NearCriticalResult {
  std::optional<double> c_minus;  ///< none in the complex regime
  double omega = 0.0;
  std::optional<double> epsilon_f;         ///< exact largest root (T = 0, delta < delta_c)
  std::optional<double> epsilon_f_approx;  ///< 2.4 + (5/3) sqrt(delta_c - delta)
  std::optional<double> b_f;
  std::optional<double> c_at_bf;  ///< epsilon_f^2 / (8 n)
};
NearCriticalResult near_critical_cminus(double delta, double epsilon, double T,
                                        const ModelParams& p);

/// Largest root of 2 sqrt(delta/eps) + eps(eps - 4)/4 = 0; none for delta >= delta_c.
std::optional<double> epsilon_f_exact(double delta);

struct SideLimits {
  double nc_minus = 0.0;
  double nc_plus = 0.0;
};
/// n C_pm -> delta/(exp(delta/2) pm 1) at b_s, delta = n (1 - chi).
SideLimits side_limits_at_bs(int n, double chi);

/// alpha^{-1} (b - b_s) delta exp(-delta/2)/(1 - exp(-delta)), alpha = ln coth(delta/4).
/// Tends to (b - b_s) delta / 2 at large delta.
double anomalous_tl(double b, double b_s, double delta);

}  // namespace lmgent
