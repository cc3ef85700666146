#include "gcmb/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "gcmb/errors.hpp"

namespace gcmb {

CMatrix SvdFactors::lambda() const {
  return singular_values.cast<Complex>().asDiagonal();
}

CMatrix SvdFactors::reconstruct() const {
  return u * lambda() * v.adjoint();
}

bool all_finite(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

namespace {

template <typename Matrix>
SvdFactors jacobi_svd(const Matrix& h) {
  Eigen::JacobiSVD<Matrix> solver(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdFactors out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  return out;
}

}  // namespace

SvdFactors svd(const CMatrix& h) {
  const auto n = h.rows();
  if (n != h.cols()) {
    throw DimensionError("svd: expected a square matrix, got " + std::to_string(h.rows()) + "x" +
                         std::to_string(h.cols()));
  }
  if (n != 2 && n != 3 && n != 4 && n != 6) {
    throw DimensionError("svd: dimension " + std::to_string(n) + " not in {2,3,4,6}");
  }
  if (!all_finite(h)) throw DimensionError("svd: input contains NaN or infinite entries");

  if (n == 2) {
    // Fixed-size path; Jacobi on a 2x2 is a single rotation pair.
    return jacobi_svd<Eigen::Matrix2cd>(Eigen::Matrix2cd(h));
  }
  // JacobiSVD sorts decreasing and leaves equal values in original column order.
  return jacobi_svd<CMatrix>(h);
}

QrFactors qr(const CMatrix& a) {
  const auto n = a.rows();
  if (n != a.cols() || n == 0) {
    throw DimensionError("qr: expected a non-empty square matrix, got " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()));
  }
  if (!all_finite(a)) throw DimensionError("qr: input contains NaN or infinite entries");

  double scale = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) scale = std::max(scale, a.col(k).norm());

  QrFactors out{CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    CVector w = a.col(k);
    // Two passes of classical Gram-Schmidt keep Q orthonormal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < k; ++j) {
        const Complex c = out.q.col(j).dot(w);  // q_j^H w
        out.r(j, k) += c;
        w -= c * out.q.col(j);
      }
    }
    const double norm = w.norm();
    if (!(norm > 1e-12 * scale)) {
      throw SingularMatrixError("qr: column " + std::to_string(k) +
                                    " is linearly dependent on the preceding columns",
                                static_cast<int>(k));
    }
    out.r(k, k) = norm;
    out.q.col(k) = w / norm;
  }
  return out;
}

double max_abs_imag(const CMatrix& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) worst = std::max(worst, std::abs(m.data()[i].imag()));
  return worst;
}

double unitarity_error(const CMatrix& m) {
  return (m * m.adjoint() - CMatrix::Identity(m.rows(), m.rows())).norm();
}

}  // namespace gcmb
