#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "lmgent/params.hpp"

namespace lmgent {

/// Half-integer spin quantum numbers are carried doubled (two_s = 2S).
struct SpinLabel {
  int two_s = 0;
  [[nodiscard]] double value() const { return 0.5 * two_s; }
  [[nodiscard]] int dim() const { return two_s + 1; }
  friend bool operator==(SpinLabel, SpinLabel) = default;
};

/// Total-spin sectors present for n spins: n/2, n/2 - 1, ..., 0 or 1/2.
std::vector<SpinLabel> spin_sectors(int n);

/// Number of copies Y(S) of the spin-S irrep in n spins-1/2 (exact).
boost::multiprecision::cpp_int multiplicity(int n, SpinLabel s);

/// ln Y(S); exact up to rounding for n <= 1000, log-gamma beyond.
double log_multiplicity(int n, SpinLabel s);

/// Real symmetric H restricted to one |S,M> sector, stored as a band of
/// half-width 2: diag[i] couples M_i with itself, off2[i] couples M_i and
/// M_i + 2, where M_i = -S + i.
struct SpinBlock {
  int n = 0;
  SpinLabel s;
  std::vector<double> diag;
  std::vector<double> off2;

  [[nodiscard]] int dim() const { return s.dim(); }
  [[nodiscard]] Eigen::MatrixXd dense() const;
};

SpinBlock build_block(const ModelParams& p, SpinLabel s);

/// <S, M+2 | S_+^2 | S, M> for the doubled labels.
double raise2_element(int two_s, int two_m);

/// One parity sub-block: M restricted to a fixed parity of M + n/2.
/// Tridiagonal after stride-2 reindexing.
struct TridiagonalBlock {
  int parity = +1;  ///< +1 if M + n/2 is even
  std::vector<int> two_m;
  std::vector<double> diag;
  std::vector<double> off;

  [[nodiscard]] int dim() const { return static_cast<int>(diag.size()); }
  [[nodiscard]] Eigen::MatrixXd dense() const;
};

struct ParityBlocks {
  TridiagonalBlock even;
  TridiagonalBlock odd;
};

/// Parity of the basis state |S,M>: +1 when M + n/2 is even.
int parity_of(int n, int two_m);

ParityBlocks parity_split(const SpinBlock& block);

}  // namespace lmgent
