#include "lmgent/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lmgent::quad {

const Gk15& gk15() {
  static const Gk15 table = [] {
    Gk15 t;
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& x = gauss_kronrod<double, 15>::abscissa();
    const auto& wk = gauss_kronrod<double, 15>::weights();
    const auto& wg = gauss<double, 7>::weights();
    std::copy(x.begin(), x.end(), t.x.begin());
    std::copy(wk.begin(), wk.end(), t.wk.begin());
    std::copy(wg.begin(), wg.end(), t.wg.begin());
    return t;
  }();
  return table;
}

std::vector<double> partition(double lo, double hi, int pieces, std::span<const double> extra) {
  std::vector<double> pts;
  pts.reserve(pieces + 1 + extra.size());
  for (int i = 0; i <= pieces; ++i) pts.push_back(lo + (hi - lo) * i / pieces);
  for (double e : extra)
    if (e > lo && e < hi) pts.push_back(e);
  std::sort(pts.begin(), pts.end());
  const double min_gap = 1e-12 * (hi - lo);
  std::vector<double> out;
  for (double p : pts)
    if (out.empty() || p - out.back() > min_gap) out.push_back(p);
  out.back() = hi;
  return out;
}

}  // namespace lmgent::quad
