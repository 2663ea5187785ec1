#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <vector>

#include "lmgent/params.hpp"

namespace lmgent::test {

// Random params in the canonical convention vx > 0, |vy| <= vx, b >= 0.
inline ModelParams random_params(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ModelParams p;
  p.n = n;
  p.vx = 0.5 + u(rng);
  p.vy = (2.0 * u(rng) - 1.0) * p.vx;
  p.vz = (2.0 * u(rng) - 1.0) * 1.2;
  p.b = 2.0 * u(rng);
  return p;
}

inline std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

inline std::vector<double> eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return sorted(std::vector<double>(ev.data(), ev.data() + ev.size()));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return a.size() == b.size() ? d : 1e300;
}

// Collective spin operators for n sites built from Pauli matrices, bit i = 0 up.
struct CollectiveSpin {
  Eigen::MatrixXd sx, sz, sy2;  // sy is imaginary, keep its square
};

inline CollectiveSpin collective_spin(int n) {
  const int d = 1 << n;
  CollectiveSpin c;
  c.sx = Eigen::MatrixXd::Zero(d, d);
  c.sz = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd iy = Eigen::MatrixXd::Zero(d, d);  // S_y = -i * iy
  for (int s = 0; s < d; ++s)
    for (int i = 0; i < n; ++i) {
      const bool up = ((s >> i) & 1) == 0;
      c.sz(s, s) += up ? 0.5 : -0.5;
      const int t = s ^ (1 << i);
      c.sx(t, s) += 0.5;
      iy(t, s) += up ? -0.5 : 0.5;
    }
  c.sy2 = -(iy * iy);
  return c;
}

}  // namespace lmgent::test
