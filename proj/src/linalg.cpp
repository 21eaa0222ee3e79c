#include "proxnet/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace proxnet {

namespace {

double power_iteration_norm(const Matrix& m) {
  const Matrix gram = m.transpose() * m;
  Vector v = Vector::Ones(gram.rows()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Vector w = gram * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    w /= nw;
    const double next = w.dot(gram * w);
    if (std::fabs(next - lambda) <= 1e-12 * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
    v = w;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

}  // namespace

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (std::max(m.rows(), m.cols()) <= 64) {
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  }
  return power_iteration_norm(m);
}

double min_symmetric_eigenvalue(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix must be square");
  const Matrix sym = (a + a.transpose()) / 2.0;
  return Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues().minCoeff();
}

double max_symmetric_eigenvalue(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix must be square");
  const Matrix sym = (a + a.transpose()) / 2.0;
  return Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues().maxCoeff();
}

double min_singular_value(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues().minCoeff();
}

}  // namespace proxnet
