#pragma once
// Shared dense linear-algebra aliases and small helpers. Everything in the
// library works on dense complex double-precision matrices; dimensions are
// always powers of two times small classical factors, bounded by the qubit
// cap, so dense is the right representation.

#include <Eigen/Dense>
#include <complex>

namespace dqp {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

Mat kron(const Mat& a, const Mat& b);
Vec kron(const Vec& a, const Vec& b);

inline Mat dagger(const Mat& m) { return m.adjoint(); }
inline Mat projector(const Vec& v) { return v * v.adjoint(); }

Vec basis_state(int dim, int index);

inline double max_abs_diff(const Mat& a, const Mat& b) {
  return (a - b).cwiseAbs().maxCoeff();
}
inline double frob_dist(const Mat& a, const Mat& b) { return (a - b).norm(); }

bool is_hermitian(const Mat& m, double tol);

// Hermitian eigenvalues in ascending order (wrapper so call sites don't each
// spell out the solver).
Eigen::VectorXd hermitian_eigenvalues(const Mat& m);

// Positive-semidefinite square root of a Hermitian matrix; eigenvalues in
// [-clip, 0) are treated as exact zeros, more negative ones throw.
Mat psd_sqrt(const Mat& m, double clip = 1e-10);

// Trace norm ||m||_1 of a Hermitian matrix (sum of |eigenvalues|).
double trace_norm_hermitian(const Mat& m);

}  // namespace dqp
