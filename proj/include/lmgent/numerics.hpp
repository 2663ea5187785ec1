#pragma once

#include <functional>
#include <span>

namespace lmgent::num {

/// ln(2 cosh x), stable for large |x|.
double log2cosh(double x);

/// tanh(x)/x with the x -> 0 limit.
double tanhc(double x);

/// ln(sinh y / y) written as a function of s = y^2; s < 0 continues to
/// ln(sin t / t) with t = sqrt(-s) (requires t < pi).
double log_sinhc_sq(double s);

/// y coth(y) written as a function of s = y^2, continued to t cot t for s < 0.
double ycoth_sq(double s);

/// ln sum_i exp(x_i).
double log_sum_exp(std::span<const double> x);

/// Bisection on a bracket [lo, hi] with f(lo) f(hi) <= 0, to |hi - lo| <= tol.
/// Throws NumericalError when the bracket has no sign change.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
              int max_iter = 400);

/// Bisection to relative tolerance followed by a single Newton polish step that
/// is only accepted if it stays in the final bracket.
double bisect_polish(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double lo, double hi,
                     double rel_tol);

}  // namespace lmgent::num
