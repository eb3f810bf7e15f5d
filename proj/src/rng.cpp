#include "sgdcert/rng.hpp"

#include <cmath>

namespace sgdcert {

double Rng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller on (0,1] x [0,1) uniforms; u1 is flipped so log() never sees 0.
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  constexpr double two_pi = 6.283185307179586476925286766559;
  spare_ = mag * std::sin(two_pi * u2);
  has_spare_ = true;
  return mag * std::cos(two_pi * u2);
}

DenseVector gaussian_vector(Rng& rng, Index dim) {
  DenseVector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = rng.next_gaussian();
  return v;
}

DenseVector sample_in_ball(Rng& rng, const DenseVector& center, double radius) {
  if (radius <= 0.0) throw ContractViolation("sample_in_ball: radius must be > 0");
  const Index p = center.size();
  for (;;) {
    DenseVector dir = gaussian_vector(rng, p);
    const double norm = dir.norm();
    if (norm == 0.0) continue;
    const double r = radius * std::pow(rng.next_double(), 1.0 / static_cast<double>(p));
    if (r == 0.0) continue;
    return center + (r / norm) * dir;
  }
}

}  // namespace sgdcert
