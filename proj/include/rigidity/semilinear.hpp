#pragma once

// Semilinear bijections T (linear or conjugate-linear) and the maps they
// induce on subspaces and frames.

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>

#include "rigidity/frames.hpp"

namespace rigidity {

enum class Automorphism { Identity, Conjugation };

inline std::string to_string(Automorphism a) {
  return a == Automorphism::Identity ? "id" : "conj";
}

/// v -> matrix * alpha(v), alpha applied entrywise.
class SemilinearMap {
 public:
  SemilinearMap(Matrix matrix, Automorphism automorphism, double tol = kDefaultTol)
      : matrix_(std::move(matrix)), automorphism_(automorphism) {
    if (matrix_.rows() != matrix_.cols()) {
      throw Error(ErrorKind::InvalidArgument, "semilinear map must be square");
    }
    if (matrix_.field() == Field::Real && automorphism_ == Automorphism::Conjugation) {
      throw Error(ErrorKind::FieldMismatch, "conjugation is trivial over the reals");
    }
    const Eigen::VectorXd sv = detail::singular_values(matrix_);
    if (sv.size() == 0 || !(sv(sv.size() - 1) > tol * sv(0))) {
      throw Error(ErrorKind::Singular, "semilinear map must be invertible");
    }
  }

  static SemilinearMap identity(Index n, Field field) {
    return SemilinearMap(Matrix::identity(n, field), Automorphism::Identity);
  }

  const Matrix& matrix() const { return matrix_; }
  Automorphism automorphism() const { return automorphism_; }
  Index dim() const { return matrix_.rows(); }
  Field field() const { return matrix_.field(); }

  Matrix apply(const Matrix& vectors) const {
    if (vectors.rows() != dim()) throw Error(ErrorKind::AmbientMismatch, "vector length mismatch");
    if (vectors.field() != field()) throw Error(ErrorKind::FieldMismatch, "field mismatch");
    return automorphism_ == Automorphism::Conjugation ? matrix_ * vectors.conjugated()
                                                      : matrix_ * vectors;
  }

 private:
  Matrix matrix_;
  Automorphism automorphism_;
};

inline Subspace apply_to_subspace(const SemilinearMap& t, const Subspace& a,
                                  double tol = kDefaultTol) {
  if (a.ambient() != t.dim()) throw Error(ErrorKind::AmbientMismatch, "map and subspace dims differ");
  if (a.dim() == 0) return a;
  return Subspace::span(t.apply(a.basis()), tol);
}

/// T^H T = c I for some c > 0.
inline bool is_unitary_up_to_scale(const SemilinearMap& t, double tol = kDefaultTol) {
  const CMatrix& m = t.matrix().entries();
  const CMatrix g = m.adjoint() * m;
  const double c = g.trace().real() / static_cast<double>(t.dim());
  return (g - c * CMatrix::Identity(t.dim(), t.dim())).norm() <= tol * c * 10;
}

inline FrameTuple induced_on_frame(const SemilinearMap& t, const FrameTuple& frame,
                                   double tol = kDefaultTol) {
  if (frame.ambient() != t.dim()) throw Error(ErrorKind::AmbientMismatch, "map and frame dims differ");
  std::vector<Subspace> out;
  out.reserve(frame.size());
  for (const auto& c : frame.components()) out.push_back(apply_to_subspace(t, c, tol));
  return FrameTuple(std::move(out), frame.orthogonal() && is_unitary_up_to_scale(t));
}

/// Same automorphism and t1 = lambda t2 for a nonzero scalar lambda, with
/// lambda read off the largest-magnitude entry of t2.
inline bool scale_equivalent(const SemilinearMap& t1, const SemilinearMap& t2,
                             double tol = kDefaultTol) {
  if (t1.automorphism() != t2.automorphism() || t1.dim() != t2.dim()) return false;
  const CMatrix a = t1.matrix().entries();
  const CMatrix b = t2.matrix().entries();
  Index r = 0;
  Index c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  if (b(r, c) == Complex(0.0)) return false;
  const Complex lambda = a(r, c) / b(r, c);
  if (std::abs(lambda) == 0.0) return false;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), std::abs(lambda) * b.cwiseAbs().maxCoeff());
  return (a - lambda * b).cwiseAbs().maxCoeff() <= tol * scale;
}

/// T' with Θ_T' ∘ Θ_ev = Θ_ev ∘ Θ_T: from T = UP, T' = U P^{-1}.
inline SemilinearMap evert_conjugate(const SemilinearMap& t, double tol = kDefaultTol) {
  const PolarFactors f = polar_decompose(t.matrix(), tol);
  return SemilinearMap(f.unitary * inverse(f.positive, tol), t.automorphism(), tol);
}

struct LineProjection {
  Subspace projected_line;  // ℓ'' = π ∩ π'
  Subspace partner_plane;   // π' = ℓ' + π^⊥
};

/// Orthogonal projection of the line ℓ' onto a plane π ≥ ℓ, realized as the
/// meet of π with the unique plane π' ≥ ℓ' commeasurable with π.
inline LineProjection line_projection_construct(const Subspace& line, const Subspace& other_line,
                                                const Subspace& plane, double tol = kDefaultTol) {
  if (line.ambient() != 3 || other_line.ambient() != 3 || plane.ambient() != 3) {
    throw Error(ErrorKind::InvalidArgument, "construction is defined in ambient dimension 3");
  }
  if (line.dim() != 1 || other_line.dim() != 1 || plane.dim() != 2) {
    throw Error(ErrorKind::InvalidArgument, "expected two lines and a plane");
  }
  if (!contains(plane, line, tol)) throw Error(ErrorKind::InvalidArgument, "plane must contain ℓ");
  if (equals(line, other_line, tol)) {
    throw Error(ErrorKind::DegenerateConfiguration, "ℓ and ℓ' coincide");
  }
  const Subspace normal = orthocomplement(plane, tol);
  if (contains(normal, other_line, tol)) {
    throw Error(ErrorKind::DegenerateConfiguration, "ℓ' is orthogonal to the plane");
  }
  Subspace partner = sum(other_line, normal, tol);
  Subspace projected = intersect(plane, partner, tol);
  if (projected.dim() != 1) {
    throw Error(ErrorKind::DegenerateConfiguration, "projected line collapsed");
  }
  return {std::move(projected), std::move(partner)};
}

// --- reconstruction ----------------------------------------------------------

using LineOracle = std::function<Subspace(const Subspace&)>;

struct ReconstructOptions {
  double tol = kDefaultTol;
  int verification_probes = 50;
  std::uint64_t probe_seed = 0x5eed1e55ULL;
};

namespace detail {

inline Subspace probe_image(const LineOracle& oracle, const Subspace& line) {
  Subspace img = oracle(line);
  if (img.dim() != 1 || img.ambient() != line.ambient()) {
    throw Error(ErrorKind::DegenerateOracle, "oracle image is not a line");
  }
  return img;
}

inline Subspace line_through(const CMatrix& v, Field field) {
  return Subspace::span(Matrix::coerce(v, field));
}

// Coefficients (alpha, beta) with w ≈ alpha * x + beta * y.
inline std::pair<Complex, Complex> two_column_coefficients(const Eigen::VectorXcd& x,
                                                           const Eigen::VectorXcd& y,
                                                           const Eigen::VectorXcd& w,
                                                           double tol) {
  CMatrix a(x.size(), 2);
  a << x, y;
  const Eigen::VectorXcd coeff = a.colPivHouseholderQr().solve(w);
  if ((a * coeff - w).norm() > tol * w.norm()) {
    throw Error(ErrorKind::DegenerateOracle, "probe image leaves the expected plane");
  }
  return {coeff(0), coeff(1)};
}

}  // namespace detail

/// Recovers T (up to scale) from the line map ℓ -> Tℓ by probing coordinate
/// lines, the lines span{e_1 + e_k}, and over C the line span{e_1 + i e_2};
/// then cross-checks on random lines.
inline SemilinearMap reconstruct_from_line_images(const LineOracle& oracle, Index n, Field field,
                                                  const ReconstructOptions& opts = {}) {
  const double tol = opts.tol;
  CMatrix cols(n, n);
  for (Index k = 0; k < n; ++k) {
    const Subspace img = detail::probe_image(oracle, Subspace::coordinate_line(n, k, field));
    cols.col(k) = img.basis().entries().col(0);
  }
  // Fix column scales relative to column 1.
  for (Index k = 1; k < n; ++k) {
    CMatrix v = CMatrix::Zero(n, 1);
    v(0, 0) = 1.0;
    v(k, 0) = 1.0;
    const Subspace img = detail::probe_image(oracle, detail::line_through(v, field));
    const auto [alpha, beta] =
        detail::two_column_coefficients(cols.col(0), cols.col(k), img.basis().entries().col(0), tol);
    if (std::abs(alpha) <= std::sqrt(tol) || std::abs(beta) <= std::sqrt(tol)) {
      throw Error(ErrorKind::DegenerateOracle, "probe e_1 + e_k collapsed onto a column");
    }
    cols.col(k) *= beta / alpha;
  }

  Automorphism aut = Automorphism::Identity;
  if (field == Field::Complex && n >= 2) {
    CMatrix v = CMatrix::Zero(n, 1);
    v(0, 0) = 1.0;
    v(1, 0) = Complex(0.0, 1.0);
    const Subspace img = detail::probe_image(oracle, detail::line_through(v, field));
    const auto [alpha, beta] =
        detail::two_column_coefficients(cols.col(0), cols.col(1), img.basis().entries().col(0), tol);
    if (std::abs(alpha) <= std::sqrt(tol)) {
      throw Error(ErrorKind::DegenerateOracle, "probe e_1 + i e_2 collapsed");
    }
    const Complex ratio = beta / alpha;
    const double slack = std::sqrt(tol);
    if (std::abs(ratio - Complex(0.0, 1.0)) <= slack) {
      aut = Automorphism::Identity;
    } else if (std::abs(ratio - Complex(0.0, -1.0)) <= slack) {
      aut = Automorphism::Conjugation;
    } else {
      throw Error(ErrorKind::NotSemilinear, "scalar i is sent to neither i nor -i");
    }
  }

  SemilinearMap candidate = [&] {
    try {
      return SemilinearMap(Matrix::coerce(cols, field), aut, tol);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Singular) {
        throw Error(ErrorKind::DegenerateOracle, "coordinate images are dependent");
      }
      throw;
    }
  }();

  Rng rng(opts.probe_seed);
  for (int p = 0; p < opts.verification_probes; ++p) {
    const Subspace probe = random_subspace(n, 1, field, rng);
    const Subspace expected = apply_to_subspace(candidate, probe, tol);
    const Subspace actual = detail::probe_image(oracle, probe);
    if (!equals(expected, actual, tol)) {
      throw Error(ErrorKind::NotSemilinear, "oracle disagrees with the reconstructed map");
    }
  }
  return candidate;
}

}  // namespace rigidity
