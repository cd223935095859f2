#include "dqp/linalg.hpp"

#include <stdexcept>

namespace dqp {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Vec basis_state(int dim, int index) {
  Vec v = Vec::Zero(dim);
  v(index) = 1.0;
  return v;
}

bool is_hermitian(const Mat& m, double tol) {
  return m.rows() == m.cols() && max_abs_diff(m, m.adjoint()) <= tol;
}

Eigen::VectorXd hermitian_eigenvalues(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Mat psd_sqrt(const Mat& m, double clip) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(m);
  Eigen::VectorXd evals = solver.eigenvalues();
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (evals(i) < 0.0) {
      if (evals(i) < -clip)
        throw std::domain_error("psd_sqrt: matrix is not positive semidefinite");
      evals(i) = 0.0;
    }
  }
  const Mat& u = solver.eigenvectors();
  return u * evals.cwiseSqrt().asDiagonal() * u.adjoint();
}

double trace_norm_hermitian(const Mat& m) {
  return hermitian_eigenvalues(m).cwiseAbs().sum();
}

}  // namespace dqp
