#include "lmgent/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lmgent/errors.hpp"

namespace lmgent::num {

double log2cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a));
}

double tanhc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0;
  }
  return std::tanh(x) / x;
}

double log_sinhc_sq(double s) {
  if (std::abs(s) < 1e-8) return s / 6.0 - s * s / 180.0;
  if (s > 0.0) {
    const double y = std::sqrt(s);
    if (y > 20.0) return y - std::numbers::ln2 - std::log(y) + std::log1p(-std::exp(-2.0 * y));
    return std::log(std::sinh(y) / y);
  }
  const double t = std::sqrt(-s);
  if (t >= std::numbers::pi) throw DomainError("log_sinhc_sq: continuation beyond first zero of sin");
  return std::log(std::sin(t) / t);
}

double ycoth_sq(double s) {
  if (std::abs(s) < 1e-8) return 1.0 + s / 3.0 - s * s / 45.0;
  if (s > 0.0) {
    const double y = std::sqrt(s);
    return y / std::tanh(y);
  }
  const double t = std::sqrt(-s);
  return t / std::tan(t);
}

double log_sum_exp(std::span<const double> x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double v : x) acc += std::exp(v - m);
  return m + std::log(acc);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
              int max_iter) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NumericalError("bisect: no sign change on bracket");
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double bisect_polish(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double lo, double hi,
                     double rel_tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NumericalError("bisect_polish: no sign change on bracket");
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= rel_tol * std::abs(mid) || mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  const double d = df(x);
  if (d != 0.0 && std::isfinite(d)) {
    const double xn = x - f(x) / d;
    if (xn >= lo && xn <= hi) x = xn;
  }
  return x;
}

}  // namespace lmgent::num
