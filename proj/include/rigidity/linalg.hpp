#pragma once

// Dense complex/real matrix substrate for subspace arithmetic at small
// ambient dimension. Storage is always complex; the field tag records
// whether the entries are constrained to the reals.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rigidity/error.hpp"

namespace rigidity {

inline constexpr double kDefaultTol = 1e-9;

enum class Field { Real, Complex };

inline std::string to_string(Field f) { return f == Field::Real ? "real" : "complex"; }

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

class Matrix {
 public:
  Matrix() : entries_(0, 0), field_(Field::Real) {}

  Matrix(Index rows, Index cols, Field field)
      : entries_(CMatrix::Zero(rows, cols)), field_(field) {}

  // Strict: a real tag with any nonzero imaginary part is rejected.
  Matrix(CMatrix entries, Field field) : entries_(std::move(entries)), field_(field) {
    if (field_ == Field::Real && entries_.size() > 0 &&
        entries_.imag().cwiseAbs().maxCoeff() != 0.0) {
      throw Error(ErrorKind::FieldMismatch, "real-tagged matrix with complex entries");
    }
  }

  explicit Matrix(const RMatrix& real) : entries_(real.cast<Complex>()), field_(Field::Real) {}

  // For results of computations that are mathematically real whenever the
  // inputs are; drops the imaginary part under a real tag.
  static Matrix coerce(CMatrix entries, Field field) {
    if (field == Field::Real) {
      RMatrix re = entries.real();
      return Matrix(re);
    }
    return Matrix(std::move(entries), Field::Complex);
  }

  static Matrix identity(Index n, Field field) {
    return Matrix(CMatrix::Identity(n, n), field);
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows,
                          Field field) {
    const Index r = static_cast<Index>(rows.size());
    const Index c = r == 0 ? 0 : static_cast<Index>(rows.begin()->size());
    CMatrix m(r, c);
    Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Index>(row.size()) != c) {
        throw Error(ErrorKind::InvalidArgument, "ragged row list");
      }
      Index j = 0;
      for (const auto& v : row) m(i, j++) = v;
      ++i;
    }
    return Matrix(std::move(m), field);
  }

  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }
  Field field() const { return field_; }
  const CMatrix& entries() const& { return entries_; }
  Complex operator()(Index i, Index j) const { return entries_(i, j); }

  RMatrix real_part() const { return entries_.real(); }

  Matrix promoted() const { return Matrix(entries_, Field::Complex); }

  Matrix conjugated() const { return Matrix(entries_.conjugate(), field_); }

  Matrix col_block(Index start, Index count) const {
    return Matrix(entries_.middleCols(start, count), field_);
  }

  Matrix hcat(const Matrix& other) const {
    require_same_field(other);
    if (rows() != other.rows()) {
      throw Error(ErrorKind::SizeMismatch, "hcat row count mismatch");
    }
    CMatrix m(rows(), cols() + other.cols());
    m << entries_, other.entries_;
    return Matrix(std::move(m), field_);
  }

  Matrix scaled(Complex s) const {
    if (field_ == Field::Real && s.imag() != 0.0) {
      throw Error(ErrorKind::FieldMismatch, "complex scalar applied to real matrix");
    }
    return Matrix(entries_ * s, field_);
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    a.require_same_field(b);
    if (a.cols() != b.rows()) throw Error(ErrorKind::SizeMismatch, "product shape mismatch");
    return coerce(a.entries_ * b.entries_, a.field_);
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b);
    return Matrix(a.entries_ + b.entries_, a.field_);
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b);
    return Matrix(a.entries_ - b.entries_, a.field_);
  }

 private:
  void require_same_field(const Matrix& other) const {
    if (field_ != other.field_) {
      throw Error(ErrorKind::FieldMismatch, "mixed real/complex operands");
    }
  }
  void require_same_shape(const Matrix& other) const {
    require_same_field(other);
    if (rows() != other.rows() || cols() != other.cols()) {
      throw Error(ErrorKind::SizeMismatch, "shape mismatch");
    }
  }

  CMatrix entries_;
  Field field_;
};

struct PolarFactors {
  Matrix unitary;
  Matrix positive;
};

struct Orthonormalized {
  Matrix basis;
  std::size_t rank = 0;
};

namespace detail {

// Modified Gram-Schmidt with one reorthogonalization pass. Column k is
// dropped when its residual is <= tol * reference; never throws.
inline CMatrix orthonormal_columns(const CMatrix& cols, double tol, double reference) {
  const Index n = cols.rows();
  CMatrix kept(n, std::min<Index>(n, cols.cols()));
  Index count = 0;
  const double cutoff = tol * reference;
  for (Index k = 0; k < cols.cols() && count < n; ++k) {
    Eigen::VectorXcd v = cols.col(k);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index q = 0; q < count; ++q) {
        v -= kept.col(q) * kept.col(q).dot(v);
      }
    }
    const double r = v.norm();
    if (r <= cutoff || r == 0.0) continue;
    kept.col(count++) = v / r;
  }
  return kept.leftCols(count);
}

inline double max_column_norm(const CMatrix& cols) {
  return cols.cols() == 0 ? 0.0 : cols.colwise().norm().maxCoeff();
}

inline Eigen::VectorXd singular_values(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return Eigen::VectorXd();
  if (m.field() == Field::Real) {
    Eigen::JacobiSVD<RMatrix> svd(m.real_part());
    return svd.singularValues();
  }
  Eigen::JacobiSVD<CMatrix> svd(m.entries());
  return svd.singularValues();
}

inline double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

// Left singular vectors belonging to the `count` largest singular values.
inline CMatrix dominant_left_vectors(const CMatrix& m, Index count, Field field) {
  if (count == 0) return CMatrix(m.rows(), 0);
  if (field == Field::Real) {
    Eigen::JacobiSVD<RMatrix> svd(m.real(), Eigen::ComputeThinU);
    return svd.matrixU().leftCols(count).cast<Complex>();
  }
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(count);
}

}  // namespace detail

/// Gram-Schmidt orthonormal basis of the column space of `cols`.
///
/// A column is rejected when its residual after projecting out the
/// already-retained columns is at most `tol` times the largest input column
/// norm. The returned rank is the number of retained columns.
inline Orthonormalized orthonormalize(const Matrix& cols, double tol = kDefaultTol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (cols.cols() == 0) throw Error(ErrorKind::InvalidArgument, "no columns to orthonormalize");
  const double ref = detail::max_column_norm(cols.entries());
  if (ref <= tol) throw Error(ErrorKind::ZeroInput, "every column is numerically zero");
  CMatrix q = detail::orthonormal_columns(cols.entries(), tol, ref);
  const auto rank = static_cast<std::size_t>(q.cols());
  return {Matrix::coerce(std::move(q), cols.field()), rank};
}

/// Number of singular values above `tol` times the largest one.
inline std::size_t rank_with_tol(const Matrix& m, double tol = kDefaultTol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  const Eigen::VectorXd sv = detail::singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = tol * sv(0);
  return static_cast<std::size_t>((sv.array() > cutoff).count());
}

inline Matrix adjoint(const Matrix& m) { return Matrix(m.entries().adjoint(), m.field()); }

inline double spectral_norm(const Matrix& m) { return detail::spectral_norm(m.entries()); }

inline double condition_number(const Matrix& m) {
  const Eigen::VectorXd sv = detail::singular_values(m);
  if (sv.size() == 0) return 1.0;
  const double smin = sv(sv.size() - 1);
  return smin == 0.0 ? std::numeric_limits<double>::infinity() : sv(0) / smin;
}

inline Matrix inverse(const Matrix& m, double tol = kDefaultTol) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidArgument, "inverse of non-square matrix");
  const Eigen::VectorXd sv = detail::singular_values(m);
  if (sv.size() > 0 && !(sv(sv.size() - 1) > tol * sv(0))) {
    throw Error(ErrorKind::Singular, "matrix is numerically singular");
  }
  return Matrix::coerce(m.entries().partialPivLu().inverse(), m.field());
}

/// Polar decomposition m = U P via the Newton iteration U <- (U + U^-H) / 2.
inline PolarFactors polar_decompose(const Matrix& m, double tol = kDefaultTol) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidArgument, "polar of non-square matrix");
  const Eigen::VectorXd sv = detail::singular_values(m);
  if (sv.size() == 0 || !(sv(sv.size() - 1) > tol * sv(0))) {
    throw Error(ErrorKind::Singular, "polar decomposition needs an invertible matrix");
  }
  const Index n = m.rows();
  CMatrix u = m.entries();
  constexpr int kMaxIterations = 100;
  bool converged = false;
  for (int it = 0; it < kMaxIterations; ++it) {
    CMatrix next = 0.5 * (u + u.adjoint().partialPivLu().inverse());
    const double step = (next - u).norm();
    u = std::move(next);
    if (step <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(ErrorKind::NotConverged, "polar Newton iteration did not settle");

  CMatrix p = u.adjoint() * m.entries();
  p = 0.5 * (p + p.adjoint()).eval();

  const double unitary_residual = (u.adjoint() * u - CMatrix::Identity(n, n)).norm();
  const double product_residual = (u * p - m.entries()).norm();
  if (unitary_residual > 10 * tol || product_residual > 10 * tol * m.entries().norm()) {
    throw Error(ErrorKind::NotConverged, "polar factors miss the residual contract");
  }
  return {Matrix::coerce(std::move(u), m.field()), Matrix::coerce(std::move(p), m.field())};
}

}  // namespace rigidity
