#include "dqp/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace dqp {

namespace {

void check_shapes(const Mat& a, const Mat& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw std::invalid_argument(std::string(who) + ": shape mismatch");
}

DensityOperator aligned(const DensityOperator& a, const DensityOperator& b) {
  if (a.wires() == b.wires()) return b;
  return b.permuted(a.wires().labels());
}

}  // namespace

double trace_distance(const Mat& a, const Mat& b, bool generalized) {
  check_shapes(a, b, "trace_distance");
  const double dtr = std::abs(a.trace().real() - b.trace().real());
  if (!generalized && dtr > kTraceMismatchTol)
    throw std::invalid_argument(
        "trace_distance: traces differ; use the generalized form");
  const double d = 0.5 * trace_norm_hermitian(a - b);
  return generalized ? d + 0.5 * dtr : d;
}

double fidelity(const Mat& a, const Mat& b, bool generalized) {
  check_shapes(a, b, "fidelity");
  const Mat sa = psd_sqrt(a);
  const Mat sb = psd_sqrt(b);
  // F = || sqrt(a) sqrt(b) ||_1 = sum of singular values.
  Eigen::JacobiSVD<Mat> svd(sa * sb);
  double f = svd.singularValues().sum();
  if (generalized) {
    const double ta = std::max(0.0, 1.0 - a.trace().real());
    const double tb = std::max(0.0, 1.0 - b.trace().real());
    f += std::sqrt(ta * tb);
  }
  return f;
}

double purified_distance(const Mat& a, const Mat& b) {
  const double fbar = std::min(1.0, fidelity(a, b, /*generalized=*/true));
  return std::sqrt(std::max(0.0, 1.0 - fbar * fbar));
}

double trace_distance(const DensityOperator& a, const DensityOperator& b,
                      bool generalized) {
  return trace_distance(a.mat(), aligned(a, b).mat(), generalized);
}

double fidelity(const DensityOperator& a, const DensityOperator& b, bool generalized) {
  return fidelity(a.mat(), aligned(a, b).mat(), generalized);
}

double purified_distance(const DensityOperator& a, const DensityOperator& b) {
  return purified_distance(a.mat(), aligned(a, b).mat());
}

}  // namespace dqp
