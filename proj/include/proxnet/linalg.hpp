#pragma once

#include <Eigen/Dense>

namespace proxnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Spectral norm (largest singular value).  Full SVD at desk scale; power
// iteration on M^T M (tol 1e-12, cap 10000 iterations) above it.
double spectral_norm(const Matrix& m);

// Smallest / largest eigenvalue of the symmetric part (A + A^T)/2.
double min_symmetric_eigenvalue(const Matrix& a);
double max_symmetric_eigenvalue(const Matrix& a);

// Smallest singular value.
double min_singular_value(const Matrix& m);

}  // namespace proxnet
