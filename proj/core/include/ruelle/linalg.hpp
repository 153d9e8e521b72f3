#pragma once

#include <vector>

#include <Eigen/Dense>

namespace ruelle {

using Matrix = Eigen::MatrixXd;

// Coefficients e_0..e_n of det(tI + P) = sum_k e_k t^(n-k), i.e. the
// elementary symmetric polynomials of the eigenvalues of P. Each e_k is
// summed from the k x k principal minors, so no eigen-solver is involved.
std::vector<double> elementary_symmetric(const Matrix& p);

// tr(wedge^degree P); degree 0 gives 1 and degree dim(P) gives det(P).
double wedge_trace(const Matrix& p, int degree);

double det_identity_minus(const Matrix& p);

// sum_l (-1)^l tr(wedge^l P) - det(I - P), with the principal minors and the
// determinant evaluated independently in binary128. For strongly hyperbolic P
// both sides are large and nearly equal, and doubles cannot resolve them.
double wedge_identity_defect(const Matrix& p);

Matrix matrix_power(const Matrix& p, int exponent);

Matrix inverse_transpose(const Matrix& p);

}  // namespace ruelle
