#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace lmgent::quad {

/// Gauss-Kronrod 7/15 nodes on [-1, 1]; node 0 is the centre, Gauss nodes sit
/// at even indices.
struct Gk15 {
  std::array<double, 8> x;
  std::array<double, 8> wk;
  std::array<double, 4> wg;
};
const Gk15& gk15();

template <std::size_t K>
using VecK = std::array<double, K>;

template <std::size_t K>
struct Estimate {
  VecK<K> value{};
  VecK<K> error{};
  int intervals = 0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

template <std::size_t K>
struct Panel {
  double a, b;
  VecK<K> value, error;
  double priority;
  bool operator<(const Panel& o) const { return priority < o.priority; }
};

template <std::size_t K, class F>
Panel<K> apply_rule(F& f, double a, double b, const VecK<K>& tol, int& evals) {
  const Gk15& r = gk15();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  VecK<K> kron{}, gauss{};
  auto add = [&](const VecK<K>& v, double wk, double wg) {
    for (std::size_t k = 0; k < K; ++k) {
      kron[k] += wk * v[k];
      gauss[k] += wg * v[k];
    }
  };
  add(f(c), r.wk[0], r.wg[0]);
  ++evals;
  for (int i = 1; i < 8; ++i) {
    const double wg = i % 2 == 0 ? r.wg[i / 2] : 0.0;
    add(f(c - h * r.x[i]), r.wk[i], wg);
    add(f(c + h * r.x[i]), r.wk[i], wg);
    evals += 2;
  }
  Panel<K> p{a, b, {}, {}, 0.0};
  for (std::size_t k = 0; k < K; ++k) {
    p.value[k] = h * kron[k];
    p.error[k] = std::abs(h * (kron[k] - gauss[k]));
    if (tol[k] > 0.0) p.priority = std::max(p.priority, p.error[k] / tol[k]);
  }
  return p;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 integration of a vector-valued f over
/// the partition given by breaks (sorted). Stops when every component's summed
/// error is below abs_tol[k] or max_intervals is reached.
template <std::size_t K, class F>
Estimate<K> integrate(F&& f, std::span<const double> breaks, const VecK<K>& abs_tol,
                      int max_intervals = 4000) {
  Estimate<K> out;
  std::priority_queue<detail::Panel<K>> heap;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    heap.push(detail::apply_rule<K>(f, breaks[i], breaks[i + 1], abs_tol, out.evaluations));
  }
  auto totals = [&](VecK<K>& val, VecK<K>& err) {
    val = {};
    err = {};
    auto copy = heap;
    while (!copy.empty()) {
      const auto& p = copy.top();
      for (std::size_t k = 0; k < K; ++k) {
        val[k] += p.value[k];
        err[k] += p.error[k];
      }
      copy.pop();
    }
  };
  // running sums avoid re-walking the heap
  VecK<K> val{}, err{};
  totals(val, err);
  auto done = [&] {
    for (std::size_t k = 0; k < K; ++k)
      if (err[k] > abs_tol[k]) return false;
    return true;
  };
  while (!done() && static_cast<int>(heap.size()) < max_intervals && !heap.empty()) {
    const detail::Panel<K> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    auto left = detail::apply_rule<K>(f, worst.a, mid, abs_tol, out.evaluations);
    auto right = detail::apply_rule<K>(f, mid, worst.b, abs_tol, out.evaluations);
    for (std::size_t k = 0; k < K; ++k) {
      val[k] += left.value[k] + right.value[k] - worst.value[k];
      err[k] += left.error[k] + right.error[k] - worst.error[k];
    }
    heap.push(left);
    heap.push(right);
  }
  // final sums recomputed from the panels for accuracy
  totals(out.value, out.error);
  out.intervals = static_cast<int>(heap.size());
  out.converged = done();
  return out;
}

/// Composite breaks: uniform pieces over [lo, hi] merged with extra points.
std::vector<double> partition(double lo, double hi, int pieces, std::span<const double> extra);

}  // namespace lmgent::quad
