#pragma once
// Helpers shared by the test binaries only.

#include "dqp/linalg.hpp"
#include "dqp/rng.hpp"

namespace dqp::testutil {

inline Vec random_pure(int dim, Rng& rng) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

// Full-rank random density operator with the given trace.
inline Mat random_density(int dim, Rng& rng, double trace = 1.0) {
  Mat w(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) w(i, j) = rng.complex_normal();
  Mat rho = w * w.adjoint();
  return rho * (trace / rho.trace().real());
}

}  // namespace dqp::testutil
