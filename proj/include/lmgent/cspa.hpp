#pragma once

#include "lmgent/concurrence.hpp"
#include "lmgent/mean_field.hpp"
#include "lmgent/params.hpp"

namespace lmgent {

struct CspaConfig {
  /// r_max = cutoff_sigmas sqrt(v/(beta n)) + |b| + max(vx, vz) for each integrated axis.
  double cutoff_sigmas = 12.0;
  double rel_tol = 1e-10;
  int initial_pieces = 16;
  int max_intervals = 2000;  ///< per one-dimensional adaptive pass
  /// A sampled point past the validity boundary is fatal when its weight relative
  /// to the peak exceeds this; 0 makes every such point fatal (the integral
  /// itself diverges there).
  double breakdown_weight = 0.0;
  /// boundary at beta |omega| = 2 pi (1 - breakdown_margin)
  double breakdown_margin = 1e-6;
};

struct CspaResult {
  double log_z = 0.0;
  PairObservables obs;
  /// min over sampled points with omega^2 < 0 of 2 pi - beta |omega|; +inf if none
  double min_margin = 0.0;
  long evaluations = 0;
  bool converged = true;
};

/// ln of Z(r) omega sinh(lambda/2T) / (lambda sinh(omega/2T)) at a static
/// point. omega^2 < 0 uses the sine continuation; throws BreakdownError past
/// beta |omega| = 2 pi.
double cspa_log_integrand(const Vec3& r, const ModelParams& p, double T);

/// Integrates over the static fields of every axis with v_mu > 0. Fields of axes
/// with v_mu < 0 are integrated along the imaginary direction by the saddle
/// point at each sampled point, and the observables then come from central
/// differences of ln Z. Axes with v_mu = 0 carry no field.
CspaResult cspa(const ModelParams& p, double T, const CspaConfig& cfg = {});

double cspa_log_partition(const ModelParams& p, double T, const CspaConfig& cfg = {});
PairObservables cspa_observables(const ModelParams& p, double T, const CspaConfig& cfg = {});
ConcurrenceReport cspa_concurrence(const ModelParams& p, double T, const CspaConfig& cfg = {});

/// Lowest temperature in [t_lo, t_hi] where cspa still succeeds, located by
/// bisection to t_tol. Requires success at t_hi and breakdown at t_lo.
double cspa_breakdown_temperature(const ModelParams& p, double t_lo, double t_hi,
                                  double t_tol = 1e-4, const CspaConfig& cfg = {});

}  // namespace lmgent
