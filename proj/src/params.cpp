#include "lmgent/params.hpp"

#include <cmath>
#include <sstream>

#include "lmgent/errors.hpp"

namespace lmgent {

std::optional<double> ModelParams::chi() const {
  if (vx == vz) return std::nullopt;
  return (vy - vz) / (vx - vz);
}

ModelParams ModelParams::scaled(double s) const {
  ModelParams p = *this;
  p.b *= s;
  p.vx *= s;
  p.vy *= s;
  p.vz *= s;
  return p;
}

ModelParams ModelParams::with_field(double field) const {
  ModelParams p = *this;
  p.b = field;
  return p;
}

std::string ModelParams::describe() const {
  std::ostringstream os;
  os << "n=" << n << " b=" << b << " vx=" << vx << " vy=" << vy << " vz=" << vz;
  return os.str();
}

ModelParams params_from_chi(int n, double b, double vx, double chi, double vz) {
  return ModelParams{n, b, vx, vz + chi * (vx - vz), vz};
}

ModelParams canonicalize(ModelParams p) {
  if (p.n < 1) throw DomainError("spin count must be positive, got " + std::to_string(p.n));
  if (!std::isfinite(p.b) || !std::isfinite(p.vx) || !std::isfinite(p.vy) ||
      !std::isfinite(p.vz))
    throw DomainError("non-finite model parameter: " + p.describe());
  if (!(p.vx >= 0.0))
    throw DomainError("attractive convention requires vx >= 0: " + p.describe());
  if (std::abs(p.vy) > p.vx)
    throw DomainError(
        "convention |vy| <= vx violated (relabel axes so that x carries the "
        "strongest coupling): " +
        p.describe());
  p.b = std::abs(p.b);
  return p;
}

}  // namespace lmgent
