#include "ruelle/linalg.hpp"

#include <bit>
#include <cstdint>
#include <string>
#include <utility>

#include "ruelle/errors.hpp"

namespace ruelle {

namespace {

constexpr int kMaxDimension = 16;

__extension__ typedef __float128 quad;

quad quad_abs(quad x) { return x < 0 ? -x : x; }

template <class M>
typename M::Scalar principal_minor(const M& p, std::uint32_t mask) {
  const int k = std::popcount(mask);
  if (k == 0) return 1;
  M sub(k, k);
  int r = 0;
  for (int i = 0; i < p.rows(); ++i) {
    if (!(mask & (1u << i))) continue;
    int c = 0;
    for (int j = 0; j < p.cols(); ++j) {
      if (!(mask & (1u << j))) continue;
      sub(r, c++) = p(i, j);
    }
    ++r;
  }
  return sub.determinant();
}

void require_square(const Matrix& p) {
  if (p.rows() != p.cols()) throw DomainError("matrix is not square");
  if (p.rows() > kMaxDimension) {
    throw DomainError("matrix dimension " + std::to_string(p.rows()) +
                      " exceeds the principal-minor limit");
  }
}

}  // namespace

std::vector<double> elementary_symmetric(const Matrix& p) {
  require_square(p);
  const int n = static_cast<int>(p.rows());
  std::vector<double> e(n + 1, 0.0);
  const std::uint32_t subsets = 1u << n;
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    e[std::popcount(mask)] += principal_minor(p, mask);
  }
  return e;
}

double wedge_trace(const Matrix& p, int degree) {
  require_square(p);
  const int n = static_cast<int>(p.rows());
  if (degree < 0 || degree > n) {
    throw DomainError("wedge degree " + std::to_string(degree) +
                      " outside [0, " + std::to_string(n) + "]");
  }
  if (degree == 0) return 1.0;
  if (degree == n) return p.determinant();
  if (degree == 1) return p.trace();
  double sum = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) == degree) sum += principal_minor(p, mask);
  }
  return sum;
}

double det_identity_minus(const Matrix& p) {
  require_square(p);
  return (Matrix::Identity(p.rows(), p.cols()) - p).determinant();
}

Matrix matrix_power(const Matrix& p, int exponent) {
  require_square(p);
  if (exponent < 0) return matrix_power(p.inverse(), -exponent);
  Matrix result = Matrix::Identity(p.rows(), p.cols());
  Matrix base = p;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

double wedge_identity_defect(const Matrix& p) {
  require_square(p);
  const int n = static_cast<int>(p.rows());
  // Products of two doubles are exact in binary128, so for 2 x 2 matrices
  // both sides are computed essentially without rounding.
  auto det = [](std::vector<quad>& a, int k) {
    quad d = 1;
    for (int col = 0; col < k; ++col) {
      int pivot = col;
      for (int r = col + 1; r < k; ++r) {
        if (quad_abs(a[r * k + col]) > quad_abs(a[pivot * k + col])) pivot = r;
      }
      if (a[pivot * k + col] == 0) return quad(0);
      if (pivot != col) {
        for (int c = 0; c < k; ++c) std::swap(a[pivot * k + c], a[col * k + c]);
        d = -d;
      }
      d *= a[col * k + col];
      for (int r = col + 1; r < k; ++r) {
        const quad factor = a[r * k + col] / a[col * k + col];
        for (int c = col; c < k; ++c) a[r * k + c] -= factor * a[col * k + c];
      }
    }
    return d;
  };
  quad alternating = 0;
  std::vector<quad> buf;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const int k = std::popcount(mask);
    buf.clear();
    for (int i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      for (int j = 0; j < n; ++j) {
        if (mask & (1u << j)) buf.push_back(p(i, j));
      }
    }
    const quad minor = det(buf, k);
    alternating += k % 2 ? -minor : minor;
  }
  buf.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) buf[i * n + j] = (i == j ? quad(1) : quad(0)) - quad(p(i, j));
  }
  return static_cast<double>(alternating - det(buf, n));
}

Matrix inverse_transpose(const Matrix& p) {
  require_square(p);
  return p.inverse().transpose();
}

}  // namespace ruelle
