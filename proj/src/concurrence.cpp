#include "lmgent/concurrence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lmgent/errors.hpp"

namespace lmgent {

std::string_view to_string(EntanglementType t) {
  switch (t) {
    case EntanglementType::parallel: return "parallel";
    case EntanglementType::antiparallel: return "antiparallel";
    case EntanglementType::separable: return "separable";
  }
  return "separable";
}

Eigen::Matrix4d PairDensity::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = p_plus;
  m(1, 1) = m(2, 2) = p_zero;
  m(3, 3) = p_minus;
  m(0, 3) = m(3, 0) = alpha_plus;
  m(1, 2) = m(2, 1) = alpha_minus;
  return m;
}

PairDensity pair_density(const PairObservables& obs, int n) {
  PairDensity pd;
  pd.obs = obs;
  pd.p_plus = 0.25 + obs.az + obs.sz;
  pd.p_minus = 0.25 + obs.az - obs.sz;
  pd.p_zero = 0.25 - obs.az;
  pd.alpha_plus = obs.ax - obs.ay;
  pd.alpha_minus = obs.ax + obs.ay;
  if (n >= 2) {
    const double lo = -1.0 / (4.0 * (n - 1)) - kPairTol;
    for (double a : {obs.ax, obs.ay, obs.az})
      if (a < lo || a > 0.25 + kPairTol) {
        std::ostringstream os;
        os << "pair correlator " << a << " outside [-1/(4(n-1)), 1/4] for n=" << n;
        throw DomainError(os.str());
      }
  }
  return pd;
}

ConcurrenceReport concurrence(const PairDensity& pd, bool with_formation) {
  double pp = pd.p_plus * pd.p_minus;
  if (pp < 0.0) {
    if (pp < -kPairTol) throw DomainError("invalid pair state: p_+ p_- < 0");
    pp = 0.0;
  }
  ConcurrenceReport r;
  r.c_plus = 2.0 * (std::abs(pd.alpha_plus) - pd.p_zero);
  r.c_minus = 2.0 * (std::abs(pd.alpha_minus) - std::sqrt(pp));
  r.c = std::max({r.c_plus, r.c_minus, 0.0});
  if (r.c_plus > 0.0)
    r.type = EntanglementType::parallel;
  else if (r.c_minus > 0.0)
    r.type = EntanglementType::antiparallel;
  if (with_formation) r.formation = formation_entanglement(std::min(r.c, 1.0));
  return r;
}

ConcurrenceReport concurrence(const PairObservables& obs, int n, bool with_formation) {
  return concurrence(pair_density(obs, n), with_formation);
}

double formation_entanglement(double c) {
  if (c < -1e-12 || c > 1.0 + 1e-12)
    throw DomainError("concurrence outside [0,1]: " + std::to_string(c));
  c = std::clamp(c, 0.0, 1.0);
  const double root = std::sqrt(1.0 - c * c);
  double e = 0.0;
  for (double q : {0.5 * (1.0 + root), 0.5 * (1.0 - root)})
    if (q > 0.0) e -= q * std::log2(q);
  return e;
}

double wootters_concurrence(const Eigen::Matrix4d& rho) {
  // sigma_y (x) sigma_y is real for this ordering.
  Eigen::Matrix4d yy = Eigen::Matrix4d::Zero();
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;
  const Eigen::Matrix4d tilde = yy * rho * yy;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(rho);
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::Matrix4d sq = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es2(sq * tilde * sq);
  Eigen::Vector4d l = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(l.data(), l.data() + 4, std::greater<>());
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

}  // namespace lmgent
