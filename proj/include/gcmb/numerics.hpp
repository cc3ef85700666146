#pragma once

#include <complex>

#include <Eigen/Dense>

namespace gcmb {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// H = U * diag(singular_values) * V^H with singular values sorted in decreasing order.
struct SvdFactors {
  CMatrix u;
  RVector singular_values;
  CMatrix v;

  /// The diagonal Lambda as a complex matrix.
  CMatrix lambda() const;
  CMatrix reconstruct() const;
};

struct QrFactors {
  CMatrix q;
  CMatrix r;  // upper triangular, real non-negative diagonal
};

/// Square matrices of dimension 2, 3, 4 or 6 only. Throws DimensionError otherwise
/// or when an entry is not finite.
SvdFactors svd(const CMatrix& h);

/// Gram-Schmidt with one reorthogonalisation pass. Throws DimensionError for a
/// non-square input and SingularMatrixError when a column's residual falls
/// below 1e-12 of the largest column norm.
QrFactors qr(const CMatrix& a);

double max_abs_imag(const CMatrix& m);

/// Frobenius distance of m*m^H from the identity.
double unitarity_error(const CMatrix& m);

bool all_finite(const CMatrix& m);

}  // namespace gcmb
