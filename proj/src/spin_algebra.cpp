#include "lmgent/spin_algebra.hpp"

#include <cmath>

#include "lmgent/errors.hpp"

namespace lmgent {

namespace mp = boost::multiprecision;

namespace {

void check_sector(int n, SpinLabel s) {
  if (n < 1) throw DomainError("spin count must be positive");
  if (s.two_s < 0 || s.two_s > n || (n - s.two_s) % 2 != 0)
    throw DomainError("no total spin 2S=" + std::to_string(s.two_s) + " for n=" +
                      std::to_string(n));
}

mp::cpp_int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  mp::cpp_int r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

}  // namespace

std::vector<SpinLabel> spin_sectors(int n) {
  if (n < 1) throw DomainError("spin count must be positive");
  std::vector<SpinLabel> out;
  for (int two_s = n; two_s >= 0; two_s -= 2) out.push_back(SpinLabel{two_s});
  return out;
}

mp::cpp_int multiplicity(int n, SpinLabel s) {
  check_sector(n, s);
  const int k = (n - s.two_s) / 2;
  return binomial(n, k) - binomial(n, k - 1);
}

double log_multiplicity(int n, SpinLabel s) {
  check_sector(n, s);
  if (n <= 1000) return std::log(multiplicity(n, s).convert_to<double>());
  const int k = (n - s.two_s) / 2;
  const double ln_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  // Y = C(n,k) (2S+1) / (n/2 + S + 1)
  return ln_binom + std::log(s.two_s + 1.0) - std::log(0.5 * (n + s.two_s) + 1.0);
}

double raise2_element(int two_s, int two_m) {
  // sqrt((S-M)(S+M+1)) sqrt((S-M-1)(S+M+2))
  const double S = 0.5 * two_s;
  const double M = 0.5 * two_m;
  const double a = (S - M) * (S + M + 1.0);
  const double b = (S - M - 1.0) * (S + M + 2.0);
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return std::sqrt(a * b);
}

SpinBlock build_block(const ModelParams& p, SpinLabel s) {
  check_sector(p.n, s);
  SpinBlock blk;
  blk.n = p.n;
  blk.s = s;
  const int d = s.dim();
  const double n = p.n;
  const double S = s.value();
  const double ss1 = S * (S + 1.0);
  const double shift = 0.25 * n * (p.vx + p.vy + p.vz);
  blk.diag.resize(d);
  for (int i = 0; i < d; ++i) {
    const double M = -S + i;
    blk.diag[i] =
        p.b * M - (0.5 * (p.vx + p.vy) * (ss1 - M * M) + p.vz * M * M - shift) / n;
  }
  const double coeff = -(p.vx - p.vy) / (4.0 * n);
  blk.off2.assign(std::max(d - 2, 0), 0.0);
  for (int i = 0; i + 2 < d; ++i)
    blk.off2[i] = coeff * raise2_element(s.two_s, -s.two_s + 2 * i);
  return blk;
}

Eigen::MatrixXd SpinBlock::dense() const {
  const int d = dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = diag[i];
  for (int i = 0; i + 2 < d; ++i) m(i, i + 2) = m(i + 2, i) = off2[i];
  return m;
}

Eigen::MatrixXd TridiagonalBlock::dense() const {
  const int d = dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = diag[i];
  for (int i = 0; i + 1 < d; ++i) m(i, i + 1) = m(i + 1, i) = off[i];
  return m;
}

int parity_of(int n, int two_m) { return ((two_m + n) / 2) % 2 == 0 ? +1 : -1; }

ParityBlocks parity_split(const SpinBlock& block) {
  ParityBlocks out;
  out.even.parity = +1;
  out.odd.parity = -1;
  const int d = block.dim();
  for (int start = 0; start < std::min(d, 2); ++start) {
    const int two_m0 = -block.s.two_s + 2 * start;
    TridiagonalBlock& t = parity_of(block.n, two_m0) > 0 ? out.even : out.odd;
    for (int i = start; i < d; i += 2) {
      t.two_m.push_back(-block.s.two_s + 2 * i);
      t.diag.push_back(block.diag[i]);
      if (i + 2 < d) t.off.push_back(block.off2[i]);
    }
  }
  return out;
}

}  // namespace lmgent
