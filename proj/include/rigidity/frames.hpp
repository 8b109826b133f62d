#pragma once

// Tuples of independent subspaces summing to the ambient space (F_mu), the
// partition-linkage relation, refinement maps and eversion.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rigidity/partitions.hpp"
#include "rigidity/subspace.hpp"

namespace rigidity {

/// Frames whose basis matrix is worse conditioned than this are flagged.
inline constexpr double kMaxFrameCondition = 1e6;

/// Ordered components (V_1, ..., V_s) with weakly decreasing dimensions.
/// Independence is not enforced here; see validate().
class FrameTuple {
 public:
  FrameTuple(std::vector<Subspace> components, bool orthogonal)
      : components_(std::move(components)), orthogonal_(orthogonal) {
    if (components_.empty()) throw Error(ErrorKind::InvalidArgument, "frame has no components");
    std::vector<int> dims;
    for (const auto& c : components_) {
      if (c.ambient() != components_.front().ambient() ||
          c.field() != components_.front().field()) {
        throw Error(ErrorKind::AmbientMismatch, "frame components disagree on ambient space");
      }
      if (c.dim() == 0) throw Error(ErrorKind::ShapeMismatch, "zero-dimensional component");
      dims.push_back(static_cast<int>(c.dim()));
    }
    if (!std::is_sorted(dims.begin(), dims.end(), std::greater<>())) {
      throw Error(ErrorKind::ShapeMismatch, "component dimensions must be weakly decreasing");
    }
    shape_ = IntPartition(std::move(dims));
  }

  /// Lines spanned by the columns of `vectors`.
  static FrameTuple lines(const Matrix& vectors, bool orthogonal) {
    std::vector<Subspace> comps;
    for (Index k = 0; k < vectors.cols(); ++k) comps.push_back(Subspace::span(vectors.col_block(k, 1)));
    return FrameTuple(std::move(comps), orthogonal);
  }

  /// Consecutive column groups of `vectors` sized by `shape`.
  static FrameTuple from_columns(const Matrix& vectors, const IntPartition& shape,
                                 bool orthogonal) {
    if (shape.size() != vectors.cols()) {
      throw Error(ErrorKind::ShapeMismatch, "shape does not match the column count");
    }
    std::vector<Subspace> comps;
    Index start = 0;
    for (int d : shape.parts()) {
      comps.push_back(Subspace::span(vectors.col_block(start, d)));
      start += d;
    }
    return FrameTuple(std::move(comps), orthogonal);
  }

  Index ambient() const { return components_.front().ambient(); }
  Field field() const { return components_.front().field(); }
  const IntPartition& shape() const { return shape_; }
  std::size_t size() const { return components_.size(); }
  const std::vector<Subspace>& components() const { return components_; }
  const Subspace& operator[](std::size_t i) const { return components_[i]; }
  bool orthogonal() const { return orthogonal_; }

  FrameTuple with_orthogonal_flag(bool flag) const { return FrameTuple(components_, flag); }

  /// Column-concatenated component bases.
  Matrix stacked_basis() const {
    Matrix m = components_.front().basis();
    for (std::size_t i = 1; i < components_.size(); ++i) m = m.hcat(components_[i].basis());
    return m;
  }

 private:
  std::vector<Subspace> components_;
  IntPartition shape_;
  bool orthogonal_;
};

struct Validation {
  bool ok = true;
  std::string diagnostic;
};

inline Validation validate(const FrameTuple& t, double tol = kDefaultTol) {
  if (t.shape().size() != t.ambient()) {
    return {false, "dimension mismatch: component dims sum to " + std::to_string(t.shape().size()) +
                       " in ambient " + std::to_string(t.ambient())};
  }
  const Matrix stacked = t.stacked_basis();
  const auto rank = rank_with_tol(stacked, tol);
  if (static_cast<Index>(rank) != t.ambient()) {
    return {false, "rank deficiency: components span dimension " + std::to_string(rank)};
  }
  if (t.orthogonal()) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = i + 1; j < t.size(); ++j) {
        const double overlap =
            detail::spectral_norm(t[i].basis().entries().adjoint() * t[j].basis().entries());
        if (overlap > tol) {
          return {false, "orthogonality: components " + std::to_string(i + 1) + " and " +
                             std::to_string(j + 1) + " overlap by " + std::to_string(overlap)};
        }
      }
    }
  }
  if (condition_number(stacked) > kMaxFrameCondition) {
    return {false, "ill-conditioned: condition number exceeds 1e6"};
  }
  return {};
}

namespace detail {

inline Subspace block_sum(const FrameTuple& t, const Block& block, double tol) {
  // Blocks hold 1-based component indices.
  Subspace s = t[static_cast<std::size_t>(block.front() - 1)];
  for (std::size_t i = 1; i < block.size(); ++i) {
    s = sum(s, t[static_cast<std::size_t>(block[i] - 1)], tol);
  }
  return s;
}

inline void require_same_frame_space(const FrameTuple& a, const FrameTuple& b) {
  if (a.ambient() != b.ambient()) throw Error(ErrorKind::AmbientMismatch, "frames in different spaces");
  if (a.field() != b.field()) throw Error(ErrorKind::FieldMismatch, "frames over different fields");
}

}  // namespace detail

/// Largest projector distance between the block spans of a and b over the
/// blocks of pi; zero exactly when the frames are pi-linked.
inline double linkage_residual(const FrameTuple& a, const FrameTuple& b, const Tableau& pi,
                               double tol = kDefaultTol) {
  detail::require_same_frame_space(a, b);
  if (!(a.shape() == b.shape())) throw Error(ErrorKind::ShapeMismatch, "frames of different shape");
  if (static_cast<std::size_t>(pi.n()) != a.size()) {
    throw Error(ErrorKind::ShapeMismatch, "partition does not index the frame components");
  }
  double worst = 0.0;
  for (const auto& block : pi.blocks()) {
    worst = std::max(worst, projector_distance(detail::block_sum(a, block, tol),
                                               detail::block_sum(b, block, tol)));
  }
  return worst;
}

/// Spans over every pi-block coincide.
inline bool pi_linked(const FrameTuple& a, const FrameTuple& b, const Tableau& pi,
                      double tol = kDefaultTol) {
  detail::require_same_frame_space(a, b);
  if (!(a.shape() == b.shape())) throw Error(ErrorKind::ShapeMismatch, "frames of different shape");
  if (static_cast<std::size_t>(pi.n()) != a.size()) {
    throw Error(ErrorKind::ShapeMismatch, "partition does not index the frame components");
  }
  for (const auto& block : pi.blocks()) {
    if (!equals(detail::block_sum(a, block, tol), detail::block_sum(b, block, tol), tol)) {
      return false;
    }
  }
  return true;
}

/// Componentwise projector distance; infinite on shape mismatch.
inline double frame_distance(const FrameTuple& a, const FrameTuple& b) {
  detail::require_same_frame_space(a, b);
  if (!(a.shape() == b.shape())) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, projector_distance(a[i], b[i]));
  return worst;
}

/// W_k = sum of the components whose fine blocks map into coarse block k.
inline FrameTuple refine_map(const FrameTuple& t, const RefinementArrow& arrow,
                             double tol = kDefaultTol) {
  if (arrow.fine.block_count() != t.size() || !(arrow.fine.shape() == t.shape())) {
    throw Error(ErrorKind::ShapeMismatch, "fine tableau does not index the frame components");
  }
  std::vector<std::optional<Subspace>> acc(arrow.coarse.block_count());
  for (std::size_t j = 0; j < t.size(); ++j) {
    auto& slot = acc[arrow.block_map[j]];
    slot = slot ? sum(*slot, t[j], tol) : t[j];
  }
  std::vector<Subspace> out;
  for (auto& s : acc) out.push_back(std::move(*s));
  return FrameTuple(std::move(out), t.orthogonal());
}

inline FrameTuple permute(const FrameTuple& t, const Permutation& sigma) {
  if (sigma.size() != t.size() || !is_permutation(sigma)) {
    throw Error(ErrorKind::IllegalPermutation, "not a permutation of the components");
  }
  std::vector<Subspace> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i].dim() != t[sigma[i]].dim()) {
      throw Error(ErrorKind::IllegalPermutation, "permutation moves components of different dims");
    }
    out.push_back(t[sigma[i]]);
  }
  return FrameTuple(std::move(out), t.orthogonal());
}

struct BigobotDirections {
  bool a_split_by_b = false;  // every a_j = ⊕_i (b_i ∩ a_j)
  bool b_split_by_a = false;  // every b_i = ⊕_j (a_j ∩ b_i)
};

namespace detail {

inline bool split_by(const FrameTuple& target, const FrameTuple& splitter, double tol) {
  for (const auto& comp : target.components()) {
    Subspace pieces = Subspace::zero(comp.ambient(), comp.field());
    for (const auto& s : splitter.components()) pieces = sum(pieces, intersect(s, comp, tol), tol);
    if (!equals(comp, pieces, tol)) return false;
  }
  return true;
}

}  // namespace detail

inline BigobotDirections bigobot_directions(const FrameTuple& a, const FrameTuple& b,
                                            double tol = kCommeasureTol) {
  detail::require_same_frame_space(a, b);
  return {detail::split_by(a, b, tol), detail::split_by(b, a, tol)};
}

/// Componentwise compatibility of two frames; symmetric, so a direction
/// mismatch raises InternalInconsistency.
inline bool bigobot(const FrameTuple& a, const FrameTuple& b, double tol = kCommeasureTol) {
  const auto d = bigobot_directions(a, b, tol);
  if (d.a_split_by_b != d.b_split_by_a) {
    throw Error(ErrorKind::InternalInconsistency, "bigobot directions disagree");
  }
  return d.a_split_by_b;
}

/// Component i goes to the orthocomplement of the sum of the others.
inline FrameTuple evert(const FrameTuple& t, double tol = kDefaultTol) {
  std::vector<Subspace> out;
  out.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    Subspace others = Subspace::zero(t.ambient(), t.field());
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (j != i) others = sum(others, t[j], tol);
    }
    out.push_back(orthocomplement(others, tol));
  }
  return FrameTuple(std::move(out), t.orthogonal());
}

namespace detail {

inline Matrix random_invertible(Index n, Field field, Rng& rng) {
  for (;;) {
    Matrix m = rng.gaussian_matrix(n, n, field);
    const Eigen::VectorXd sv = singular_values(m);
    if (sv(sv.size() - 1) > 1e-3 * sv(0)) return m;
  }
}

inline Matrix random_unitary(Index n, Field field, Rng& rng) {
  for (;;) {
    Orthonormalized q = orthonormalize(rng.gaussian_matrix(n, n, field));
    if (static_cast<Index>(q.rank) == n) return q.basis;
  }
}

}  // namespace detail

/// Orthogonal: column groups of a random unitary. General: column groups of
/// a random invertible matrix with condition number below 1e3.
inline FrameTuple random_frame(Index ambient, const IntPartition& shape, bool orthogonal,
                               Field field, Rng& rng) {
  if (shape.size() != ambient) throw Error(ErrorKind::ShapeMismatch, "shape must partition ambient");
  const Matrix cols = orthogonal ? detail::random_unitary(ambient, field, rng)
                                 : detail::random_invertible(ambient, field, rng);
  return FrameTuple::from_columns(cols, shape, orthogonal);
}

/// A frame pi-linked to `t`: each block span keeps its value while the
/// components inside it are redrawn (unitarily inside the block span when
/// `t` is orthogonal).
inline FrameTuple random_linked_frame(const FrameTuple& t, const Tableau& pi, Rng& rng,
                                      double tol = kDefaultTol) {
  if (static_cast<std::size_t>(pi.n()) != t.size()) {
    throw Error(ErrorKind::ShapeMismatch, "partition does not index the frame components");
  }
  std::vector<std::optional<Subspace>> out(t.size());
  for (const auto& block : pi.blocks()) {
    const Subspace span = detail::block_sum(t, block, tol);
    const Index d = span.dim();
    const Matrix mix = t.orthogonal() ? detail::random_unitary(d, t.field(), rng)
                                      : detail::random_invertible(d, t.field(), rng);
    const Matrix cols = span.basis() * mix;
    Index start = 0;
    for (int idx : block) {
      const Index k = t[static_cast<std::size_t>(idx - 1)].dim();
      out[static_cast<std::size_t>(idx - 1)] = Subspace::span(cols.col_block(start, k));
      start += k;
    }
  }
  std::vector<Subspace> comps;
  for (auto& s : out) comps.push_back(std::move(*s));
  return FrameTuple(std::move(comps), t.orthogonal());
}

}  // namespace rigidity
