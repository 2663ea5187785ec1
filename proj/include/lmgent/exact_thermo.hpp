#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lmgent/concurrence.hpp"
#include "lmgent/params.hpp"
#include "lmgent/spin_algebra.hpp"

namespace lmgent {

/// One eigenstate of a spin sector with its collective moments.
struct Level {
  double energy = 0.0;
  int parity = +1;
  int k = 0;  ///< rank within (S, parity), ascending energy
  double m2x = 0.0;  ///< <S_x^2>
  double m2y = 0.0;
  double m2z = 0.0;
  double m1z = 0.0;  ///< <S_z>
};

struct SpinBlockSpectrum {
  SpinLabel s;
  double log_y = 0.0;
  std::vector<Level> levels;  ///< even parity first, each parity ascending
};

struct ExactSpectrum {
  int n = 0;
  double energy_scale = 1.0;  ///< vx, used for degeneracy tolerances
  double ground_energy = 0.0;
  std::vector<SpinBlockSpectrum> sectors;  ///< S = n/2 first

  [[nodiscard]] const SpinBlockSpectrum& sector(SpinLabel s) const;
  [[nodiscard]] const Level& level(SpinLabel s, int parity, int k) const;
};

SpinBlockSpectrum diagonalize_sector(const ModelParams& p, SpinLabel s);
ExactSpectrum diagonalize(const ModelParams& p);

/// States closer than this (times vx) to the ground energy form the T = 0 mixture.
inline constexpr double kDegeneracyTol = 1e-12;

/// ln Z at T > 0. At T = 0 returns the log of the ground-state degeneracy
/// (counting Y(S)), i.e. the limit of ln Z + E_0 / T.
double log_partition(const ExactSpectrum& spec, double T);

/// Thermal averages of <S_mu^2>, <S_z> with weights Y(S) exp(-E/T) / Z.
struct ThermalMoments {
  double log_z = 0.0;
  double s2x = 0.0;
  double s2y = 0.0;
  double s2z = 0.0;
  double sz = 0.0;
};
ThermalMoments thermal_moments(const ExactSpectrum& spec, double T);

/// alpha_mu = (<S_mu^2> - n/4) / (n(n-1)), sz = <S_z>/n. Requires n >= 2.
PairObservables observables_from_moments(int n, double s2x, double s2y, double s2z, double sz);
PairObservables thermal_observables(const ExactSpectrum& spec, double T);
ConcurrenceReport thermal_concurrence(const ExactSpectrum& spec, double T);

/// Concurrence of the permutation-invariant mixture of the Y(S) copies of a level.
PairObservables level_observables(const ExactSpectrum& spec, SpinLabel s, int parity, int k);
ConcurrenceReport level_concurrence(const ExactSpectrum& spec, SpinLabel s, int parity, int k);

struct TemperatureInterval {
  double lo = 0.0;  ///< 0 when the interval reaches down to T -> 0+
  double hi = 0.0;
};

struct LimitTemperatures {
  std::vector<TemperatureInterval> plus;
  std::vector<TemperatureInterval> minus;
  [[nodiscard]] std::optional<double> tl_plus() const;
  [[nodiscard]] std::optional<double> tl_minus() const;
};

struct LimitScanOptions {
  int grid_points = 400;
  double t_min = 1e-4;  ///< in units of vx
  double t_max = 2.0;
  double abs_tol = 1e-5;  ///< bisection tolerance in units of vx
  int subdivisions = 16;  ///< local refinement of cells where C_+- approaches 0 from below
};

/// Every temperature interval with C_+ > 0 and with C_- > 0 at field p.b.
LimitTemperatures limit_temperatures(const ModelParams& p, const LimitScanOptions& opt = {});
LimitTemperatures limit_temperatures(const ExactSpectrum& spec, const LimitScanOptions& opt = {});

struct LowLevel {
  SpinLabel s;
  int parity = +1;
  int k = 0;
  double excitation = 0.0;
};

/// Lowest `count` levels (each Y(S)-degenerate level listed once) measured from E_0.
std::vector<LowLevel> spectrum_low(const ExactSpectrum& spec, int count);
std::vector<LowLevel> spectrum_low(const ModelParams& p, int count);

/// Fields in (b_lo, b_hi) where the parity of the ground state (maximum spin
/// sector) flips, by a b grid plus bisection. Grid points where the doublet
/// splitting is at rounding level are skipped, so crossings deep in the
/// symmetry-broken region of large systems are not resolved.
std::vector<double> parity_transitions(const ModelParams& p, double b_lo, double b_hi,
                                       int grid_points = 0);

}  // namespace lmgent
