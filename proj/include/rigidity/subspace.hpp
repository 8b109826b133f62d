#pragma once

// Points of the Grassmannian G(d, K^n) and their lattice structure.

#include <cstddef>
#include <utility>

#include "rigidity/linalg.hpp"
#include "rigidity/rng.hpp"

namespace rigidity {

/// Threshold for the projector commutator; two projector constructions each
/// contribute one tolerance application.
inline constexpr double kCommeasureTol = 10 * kDefaultTol;

/// A subspace of K^n held by an orthonormal basis (n x d). The zero
/// subspace is a 0-column basis.
class Subspace {
 public:
  /// Trusts that `basis` already has orthonormal columns.
  static Subspace from_orthonormal(Matrix basis) { return Subspace(std::move(basis)); }

  /// Column span of arbitrary vectors; rank decided by orthonormalize.
  static Subspace span(const Matrix& vectors, double tol = kDefaultTol) {
    const double ref = detail::max_column_norm(vectors.entries());
    if (vectors.cols() == 0 || ref == 0.0) return zero(vectors.rows(), vectors.field());
    return Subspace(
        Matrix::coerce(detail::orthonormal_columns(vectors.entries(), tol, ref), vectors.field()));
  }

  static Subspace zero(Index ambient, Field field) {
    return Subspace(Matrix(ambient, 0, field));
  }
  static Subspace full(Index ambient, Field field) {
    return Subspace(Matrix::identity(ambient, field));
  }

  /// span{e_k}, 0-based index.
  static Subspace coordinate_line(Index ambient, Index k, Field field) {
    Matrix e(ambient, 1, field);
    CMatrix m = e.entries();
    m(k, 0) = 1.0;
    return Subspace(Matrix(std::move(m), field));
  }

  Index ambient() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  Field field() const { return basis_.field(); }
  const Matrix& basis() const { return basis_; }

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
  Matrix basis_;
};

struct Projector {
  Matrix matrix;
};

namespace detail {

inline void require_compatible(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) {
    throw Error(ErrorKind::AmbientMismatch, "subspaces live in different ambient spaces");
  }
  if (a.field() != b.field()) {
    throw Error(ErrorKind::FieldMismatch, "subspaces over different fields");
  }
}

inline CMatrix projector_matrix(const Subspace& a) {
  const CMatrix& b = a.basis().entries();
  return b * b.adjoint();
}

// Orthonormal basis of the complement of `a`; never throws.
inline CMatrix complement_columns(const CMatrix& basis, double tol) {
  const Index n = basis.rows();
  const Index d = basis.cols();
  if (d == 0) return CMatrix::Identity(n, n);
  if (d >= n) return CMatrix(n, 0);
  CMatrix stacked(n, d + n);
  stacked << basis, CMatrix::Identity(n, n);
  CMatrix q = orthonormal_columns(stacked, tol, 1.0);
  return q.middleCols(d, q.cols() - d);
}

// Relative complement of c inside a without the containment check.
inline CMatrix relative_complement(const Subspace& a, const Subspace& c) {
  const Index k = a.dim() - c.dim();
  if (k <= 0) return CMatrix(a.ambient(), 0);
  const CMatrix& ba = a.basis().entries();
  const CMatrix& bc = c.basis().entries();
  CMatrix residual = ba - bc * (bc.adjoint() * ba);
  return dominant_left_vectors(residual, k, a.field());
}

// a ∩ b as the principal directions of a whose angle to b has sine <= tol.
// Sines are the singular values of (I - P_b) B_a, accurate for small angles.
inline Subspace principal_meet(const Subspace& a, const Subspace& b, double tol) {
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient(), a.field());
  const CMatrix& ba = a.basis().entries();
  const CMatrix& bb = b.basis().entries();
  const CMatrix residual = ba - bb * (bb.adjoint() * ba);
  Eigen::VectorXd sines;
  CMatrix v;
  if (a.field() == Field::Real) {
    Eigen::JacobiSVD<RMatrix> svd(residual.real(), Eigen::ComputeFullV);
    sines = svd.singularValues();
    v = svd.matrixV().cast<Complex>();
  } else {
    Eigen::JacobiSVD<CMatrix> svd(residual, Eigen::ComputeFullV);
    sines = svd.singularValues();
    v = svd.matrixV();
  }
  // Singular values are sorted descending; the meet is the trailing block.
  Index keep = 0;
  for (Index k = sines.size(); k-- > 0 && sines(k) <= tol;) ++keep;
  const CMatrix meet = ba * v.rightCols(keep);
  return Subspace::from_orthonormal(Matrix::coerce(meet, a.field()));
}

}  // namespace detail

inline Projector projector(const Subspace& a) {
  return {Matrix::coerce(detail::projector_matrix(a), a.field())};
}

inline Subspace sum(const Subspace& a, const Subspace& b, double tol = kDefaultTol) {
  detail::require_compatible(a, b);
  return Subspace::span(a.basis().hcat(b.basis()), tol);
}

inline Subspace orthocomplement(const Subspace& a, double tol = kDefaultTol) {
  return Subspace::from_orthonormal(
      Matrix::coerce(detail::complement_columns(a.basis().entries(), tol), a.field()));
}

/// a ∩ b as (a^⊥ + b^⊥)^⊥.
inline Subspace intersect(const Subspace& a, const Subspace& b, double tol = kDefaultTol) {
  detail::require_compatible(a, b);
  return orthocomplement(sum(orthocomplement(a, tol), orthocomplement(b, tol), tol), tol);
}

/// ‖(I - P_a) B_b‖, the distance of b from lying inside a.
inline double containment_residual(const Subspace& a, const Subspace& b) {
  detail::require_compatible(a, b);
  if (b.dim() == 0) return 0.0;
  const CMatrix& ba = a.basis().entries();
  const CMatrix& bb = b.basis().entries();
  return detail::spectral_norm(bb - ba * (ba.adjoint() * bb));
}

inline bool contains(const Subspace& a, const Subspace& b, double tol = kDefaultTol) {
  return containment_residual(a, b) <= tol;
}

/// ‖P_a - P_b‖ in operator norm; 1 whenever the dimensions differ.
inline double projector_distance(const Subspace& a, const Subspace& b) {
  detail::require_compatible(a, b);
  return detail::spectral_norm(detail::projector_matrix(a) - detail::projector_matrix(b));
}

inline bool equals(const Subspace& a, const Subspace& b, double tol = kDefaultTol) {
  if (a.dim() != b.dim()) {
    detail::require_compatible(a, b);
    return false;
  }
  return projector_distance(a, b) <= tol;
}

/// Relative orthocomplement of b inside a; requires b ≤ a.
inline Subspace ominus(const Subspace& a, const Subspace& b, double tol = kDefaultTol) {
  if (!contains(a, b, tol)) throw Error(ErrorKind::NotContained, "ominus needs b inside a");
  if (b.dim() > a.dim()) throw Error(ErrorKind::NotContained, "ominus needs dim b <= dim a");
  return Subspace::from_orthonormal(
      Matrix::coerce(detail::relative_complement(a, b), a.field()));
}

/// ‖P_a P_b - P_b P_a‖ in operator norm.
inline double commutator_norm(const Subspace& a, const Subspace& b) {
  detail::require_compatible(a, b);
  const CMatrix pa = detail::projector_matrix(a);
  const CMatrix pb = detail::projector_matrix(b);
  const CMatrix c = pa * pb - pb * pa;
  // i[Pa,Pb] is Hermitian, so its eigenvalues give the operator norm directly.
  const CMatrix h = Complex(0.0, 1.0) * c;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

/// Projectors commute.
inline bool commeasurable(const Subspace& a, const Subspace& b, double tol = kCommeasureTol) {
  return commutator_norm(a, b) <= tol;
}

/// The same relation through (a ⊖ (a∩b)) ⊥ (b ⊖ (a∩b)). The meet keeps
/// principal angles with sine <= tol and the orthogonality test bounds the
/// remaining cosines by tol, so both paths threshold sin·cos of the same
/// angles and can only disagree within rounding of the boundary.
inline bool commeasurable_by_complements(const Subspace& a, const Subspace& b,
                                         double tol = kCommeasureTol) {
  detail::require_compatible(a, b);
  const Subspace meet = detail::principal_meet(a, b, tol);
  const CMatrix ra = detail::relative_complement(a, meet);
  const CMatrix rb = detail::relative_complement(b, meet);
  if (ra.cols() == 0 || rb.cols() == 0) return true;
  return detail::spectral_norm(ra.adjoint() * rb) <= tol;
}

/// Range of P_a P_b: left singular directions with singular value above tol.
/// The threshold is absolute since ‖P_a P_b‖ ≤ 1.
inline Subspace product_range(const Subspace& a, const Subspace& b, double tol = kDefaultTol) {
  detail::require_compatible(a, b);
  const Matrix m = Matrix::coerce(detail::projector_matrix(a) * detail::projector_matrix(b), a.field());
  const Eigen::VectorXd sv = detail::singular_values(m);
  const auto rank = static_cast<Index>((sv.array() > tol).count());
  return Subspace::from_orthonormal(
      Matrix::coerce(detail::dominant_left_vectors(m.entries(), rank, a.field()), a.field()));
}

/// Haar-distributed d-subspace: orthonormalized Gaussian columns.
inline Subspace random_subspace(Index ambient, Index dim, Field field, Rng& rng) {
  if (dim < 1 || dim > ambient) {
    throw Error(ErrorKind::InvalidArgument, "random_subspace needs 1 <= dim <= ambient");
  }
  for (;;) {
    Subspace s = Subspace::span(rng.gaussian_matrix(ambient, dim, field));
    if (s.dim() == dim) return s;
  }
}

}  // namespace rigidity
