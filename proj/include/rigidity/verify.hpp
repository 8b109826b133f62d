#pragma once

// Seeded property suites. Each suite is a list of named properties; each
// property runs a number of trials, and trial t of property p draws from
// the stream keyed by (seed, suite, p, t), so results do not depend on the
// order in which properties or trials are evaluated.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rigidity/frames.hpp"
#include "rigidity/partitions.hpp"
#include "rigidity/semilinear.hpp"
#include "rigidity/subspace.hpp"

namespace rigidity::verify {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Projector-norm residual allowed for lattice and linkage preservation.
inline constexpr double kResidualTol = 1e-7;
/// Residual allowed when moving eversion past an induced map.
inline constexpr double kEvertConjugateTol = 1e-6;
/// Minimum share of distorted maps that must break linkage.
inline constexpr double kFalsifyMinRate = 0.95;

struct SuiteConfig {
  std::string suite;
  Index ambient = 3;
  Field field = Field::Real;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  double epsilon = 0.1;  // distortion strength for the falsify suite
  std::optional<std::string> report_path;
};

struct PropertyRecord {
  std::string name;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double worst_residual = 0.0;
  std::optional<std::uint64_t> first_failing_seed;
  std::optional<double> rate;      // observed hit rate, for rate-gated properties
  std::optional<double> min_rate;  // required hit rate

  bool passed() const { return failures == 0; }
};

struct VerificationReport {
  SuiteConfig config;
  std::vector<PropertyRecord> properties;
  double wall_time_s = 0.0;
  std::string version{kVersion};

  bool passed() const {
    return std::all_of(properties.begin(), properties.end(),
                       [](const PropertyRecord& p) { return p.passed(); });
  }
};

struct SuiteInfo {
  std::string_view name;
  Index min_ambient;
  std::string_view summary;
};

inline const std::vector<SuiteInfo>& suite_registry() {
  static const std::vector<SuiteInfo> registry = {
      {"subspaces", 2, "commeasurability via projectors vs relative complements; lattice identities"},
      {"clr", 3, "induced maps preserve dimension, meets and joins of commeasurable pairs"},
      {"clr-bis", 2, "induced maps preserve inclusions and independence of orthogonal lines"},
      {"pfr-perp", 3, "induced maps on orthogonal frames preserve pi-linkage and are equivariant"},
      {"pfr", 3, "eversion: involution, identity on orthogonal frames, preserves pi-linkage"},
      {"eversion-order", 2, "eversion after T equals T' = U P^-1 after eversion"},
      {"obot", 2, "generalized compatibility of frames restricts to commeasurability"},
      {"refinement", 2, "refinement maps are functorial and equivariant"},
      {"partitions", 2, "conjugation, dominance, jump sequences, refinement composition"},
      {"reconstruction", 3, "line maps of semilinear bijections determine them up to scale"},
      {"falsify", 3, "nonlinear line distortions break pi-linkage and fail reconstruction"},
  };
  return registry;
}

inline const SuiteInfo& find_suite(std::string_view name) {
  for (const auto& s : suite_registry()) {
    if (s.name == name) return s;
  }
  throw Error(ErrorKind::ConfigError, "unknown suite '" + std::string(name) + "'");
}

inline void validate_config(const SuiteConfig& cfg) {
  const SuiteInfo& info = find_suite(cfg.suite);
  if (cfg.ambient < 2 || cfg.ambient > 8) {
    throw Error(ErrorKind::ConfigError, "ambient must lie in 2..8");
  }
  if (cfg.ambient < info.min_ambient) {
    throw Error(ErrorKind::ConfigError, "suite '" + cfg.suite + "' needs ambient >= " +
                                            std::to_string(info.min_ambient));
  }
  if (cfg.trials == 0) throw Error(ErrorKind::ConfigError, "trials must be positive");
  if (!(cfg.tol > 0.0) || cfg.tol >= 1e-2) {
    throw Error(ErrorKind::ConfigError, "tol must lie in (0, 1e-2)");
  }
  if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon)) {
    throw Error(ErrorKind::ConfigError, "epsilon must be finite and nonnegative");
  }
}

// --- trial machinery ---------------------------------------------------------

struct Outcome {
  bool ok = true;
  double residual = 0.0;
};

inline Outcome within(double residual, double limit) { return {residual <= limit, residual}; }

class PropertyRunner {
 public:
  explicit PropertyRunner(const SuiteConfig& cfg) : cfg_(cfg) {}

  /// Runs `trials` trials; the body gets the trial stream and the trial index.
  template <class Body>
  void run(std::string name, std::uint64_t trials, Body&& body) {
    PropertyRecord rec;
    rec.name = std::move(name);
    for (std::uint64_t t = 0; t < trials; ++t) {
      Rng rng = trial_stream(cfg_.seed, cfg_.suite, rec.name, t);
      const std::uint64_t key = rng.key();
      Outcome o;
      try {
        o = body(rng, t);
      } catch (const Error&) {
        o = {false, 0.0};
      }
      ++rec.trials;
      if (std::isfinite(o.residual)) rec.worst_residual = std::max(rec.worst_residual, o.residual);
      if (!o.ok) {
        ++rec.failures;
        if (!rec.first_failing_seed) rec.first_failing_seed = key;
      }
    }
    records_.push_back(std::move(rec));
  }

  /// Counts trials whose body returns true and requires the share of such
  /// trials to reach `min_rate`.
  template <class Body>
  void run_rate(std::string name, std::uint64_t trials, double min_rate, Body&& body) {
    PropertyRecord rec;
    rec.name = std::move(name);
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      Rng rng = trial_stream(cfg_.seed, cfg_.suite, rec.name, t);
      const std::uint64_t key = rng.key();
      bool hit = false;
      try {
        hit = body(rng, t);
      } catch (const Error&) {
        hit = false;
      }
      ++rec.trials;
      if (hit) {
        ++hits;
      } else if (!rec.first_failing_seed) {
        rec.first_failing_seed = key;
      }
    }
    rec.rate = trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials);
    rec.min_rate = min_rate;
    rec.failures = *rec.rate >= min_rate ? 0 : trials - hits;
    if (rec.failures == 0) rec.first_failing_seed.reset();
    records_.push_back(std::move(rec));
  }

  std::vector<PropertyRecord> take() { return std::move(records_); }

 private:
  const SuiteConfig& cfg_;
  std::vector<PropertyRecord> records_;
};

/// Trial count that covers every enumerated case at least once.
inline std::uint64_t covering(std::uint64_t trials, std::size_t cases) {
  return std::max<std::uint64_t>(trials, cases);
}

// --- generators ----------------------------------------------------------------

namespace gen {

inline Automorphism pick_automorphism(Field field, std::uint64_t t) {
  return field == Field::Complex && t % 2 == 1 ? Automorphism::Conjugation
                                               : Automorphism::Identity;
}

inline SemilinearMap semilinear(Index n, Field field, Automorphism aut, Rng& rng) {
  return SemilinearMap(detail::random_invertible(n, field, rng), aut);
}

inline SemilinearMap unitary_map(Index n, Field field, Automorphism aut, Rng& rng) {
  return SemilinearMap(detail::random_unitary(n, field, rng), aut);
}

/// Random nonempty proper-or-full subset of {0..n-1}, as a mask.
inline std::vector<bool> subset(Index n, Rng& rng) {
  for (;;) {
    std::vector<bool> mask(static_cast<std::size_t>(n));
    bool any = false;
    for (auto&& m : mask) {
      m = rng.below(2) == 1;
      any = any || m;
    }
    if (any) return mask;
  }
}

inline Subspace columns(const Matrix& q, const std::vector<bool>& mask) {
  std::vector<Index> idx;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) idx.push_back(static_cast<Index>(i));
  }
  CMatrix m(q.rows(), static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) m.col(static_cast<Index>(k)) = q.entries().col(idx[k]);
  return Subspace::from_orthonormal(Matrix::coerce(m, q.field()));
}

/// Two subspaces spanned by subsets of one orthonormal basis.
inline std::pair<Subspace, Subspace> commeasurable_pair(Index n, Field field, Rng& rng) {
  const Matrix q = detail::random_unitary(n, field, rng);
  return {columns(q, subset(n, rng)), columns(q, subset(n, rng))};
}

inline Subspace random_dim_subspace(Index n, Field field, Rng& rng) {
  const auto d = static_cast<Index>(1 + rng.below(static_cast<std::size_t>(n)));
  return random_subspace(n, d, field, rng);
}

/// b drawn inside a.
inline std::pair<Subspace, Subspace> nested_pair(Index n, Field field, Rng& rng) {
  Subspace a = random_dim_subspace(n, field, rng);
  const auto q = static_cast<Index>(1 + rng.below(static_cast<std::size_t>(a.dim())));
  for (;;) {
    Subspace b = Subspace::span(a.basis() * rng.gaussian_matrix(a.dim(), q, field));
    if (b.dim() == q) return {std::move(a), std::move(b)};
  }
}

/// A commeasurable pair (a, b) sharing a basis vector u and both missing a
/// basis vector w, after which b's u is rotated toward w by angle eps. The
/// single non-trivial principal angle is eps, so ‖[P_a, P_b]‖ = sin(eps)cos(eps).
inline std::pair<Subspace, Subspace> perturbed_pair(Index n, Field field, double eps, Rng& rng) {
  const Matrix q = detail::random_unitary(n, field, rng);
  std::vector<bool> in_a(static_cast<std::size_t>(n));
  std::vector<bool> in_b(static_cast<std::size_t>(n));
  in_a[0] = in_b[0] = true;
  for (std::size_t k = 2; k < in_a.size(); ++k) {
    in_a[k] = rng.below(2) == 1;
    in_b[k] = rng.below(2) == 1;
  }
  CMatrix rotated = q.entries();
  rotated.col(0) = std::cos(eps) * q.entries().col(0) + std::sin(eps) * q.entries().col(1);
  return {columns(q, in_a), columns(Matrix::coerce(rotated, field), in_b)};
}

inline IntPartition shape(Index n, Rng& rng) {
  const auto all = all_int_partitions(static_cast<int>(n));
  return all[rng.below(all.size())];
}

inline IntPartition line_shape(Index n) {
  return IntPartition(std::vector<int>(static_cast<std::size_t>(n), 1));
}

inline Permutation permutation_in(const std::vector<int>& dims, Rng& rng) {
  // Fisher-Yates inside each run of equal dims.
  Permutation p(dims.size());
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::size_t start = 0;
  while (start < dims.size()) {
    std::size_t end = start;
    while (end < dims.size() && dims[end] == dims[start]) ++end;
    for (std::size_t i = end - 1; i > start; --i) {
      const std::size_t j = start + rng.below(i - start + 1);
      std::swap(p[i], p[j]);
    }
    start = end;
  }
  return p;
}

/// Two orthogonal frames grouping the columns of one unitary in different
/// orders and shapes; such frames are always compatible.
inline std::pair<FrameTuple, FrameTuple> compatible_frames(Index n, Field field, Rng& rng) {
  const Matrix q = detail::random_unitary(n, field, rng);
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = p.size() - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
  CMatrix shuffled(n, n);
  for (Index k = 0; k < n; ++k) shuffled.col(k) = q.entries().col(static_cast<Index>(p[static_cast<std::size_t>(k)]));
  return {FrameTuple::from_columns(q, shape(n, rng), true),
          FrameTuple::from_columns(Matrix::coerce(shuffled, field), shape(n, rng), true)};
}

/// Set partitions of {1..n}: enumerated for n <= 6.
inline std::vector<Tableau> partition_cases(Index n) { return all_tableaux(static_cast<int>(n)); }

inline Tableau pick_case(const std::vector<Tableau>& cases, Index n, std::uint64_t t, Rng& rng) {
  if (n <= 6) return cases[t % cases.size()];
  return cases[rng.below(cases.size())];
}

/// Random coarsening of t: merges blocks by a random set partition of them.
inline Tableau coarsening(const Tableau& t, Rng& rng) {
  const auto k = static_cast<int>(t.block_count());
  std::vector<int> label(static_cast<std::size_t>(k));
  int max_label = -1;
  for (auto& l : label) {
    l = static_cast<int>(rng.below(static_cast<std::size_t>(max_label + 2)));
    max_label = std::max(max_label, l);
  }
  std::vector<Block> merged(static_cast<std::size_t>(max_label) + 1);
  for (int i = 0; i < k; ++i) {
    auto& dst = merged[static_cast<std::size_t>(label[static_cast<std::size_t>(i)])];
    const auto& src = t.blocks()[static_cast<std::size_t>(i)];
    dst.insert(dst.end(), src.begin(), src.end());
  }
  return Tableau(t.n(), std::move(merged));
}

}  // namespace gen

// --- suites ------------------------------------------------------------------

namespace suites {

inline void subspaces(const SuiteConfig& cfg, PropertyRunner& run) {
  const Index n = cfg.ambient;
  const Field f = cfg.field;
  const double ctol = 10 * cfg.tol;
  constexpr double kBands[] = {1e-12, 1e-6, 1e-3};

  run.run("commeasurable-paths-agree", cfg.trials, [&](Rng& rng, std::uint64_t t) -> Outcome {
    std::pair<Subspace, Subspace> p = [&] {
      switch (t % 4) {
        case 0: return std::pair{gen::random_dim_subspace(n, f, rng), gen::random_dim_subspace(n, f, rng)};
        case 1: return gen::commeasurable_pair(n, f, rng);
        case 2: return gen::nested_pair(n, f, rng);
        default: return gen::perturbed_pair(n, f, kBands[(t / 4) % 3], rng);
      }
    }();
    const double c = commutator_norm(p.first, p.second);
    const bool by_projectors = c <= ctol;
    const bool by_complements = commeasurable_by_complements(p.first, p.second, ctol);
    bool ok = by_projectors == by_complements;
    if (t % 4 == 1 || t % 4 == 2) ok = ok && by_projectors;
    return {ok, ok ? 0.0 : c};
  });

  run.run("perturbation-bands", cfg.trials, [&](Rng& rng, std::uint64_t t) -> Outcome {
    const double eps = kBands[t % 3];
    auto [a, b] = gen::perturbed_pair(n, f, eps, rng);
    const bool p1 = commeasurable(a, b, ctol);
    const bool p2 = commeasurable_by_complements(a, b, ctol);
    const bool expected = std::sin(eps) * std::cos(eps) <= ctol;
    const bool ok = p1 == p2 && p1 == expected;
    return Outcome{ok, ok ? 0.0 : commutator_norm(a, b)};
  });

  run.run("de-morgan", cfg.trials, [&](Rng& rng, std::uint64_t) {
    const Subspace a = gen::random_dim_subspace(n, f, rng);
    const Subspace b = gen::random_dim_subspace(n, f, rng);
    const Subspace lhs = orthocomplement(sum(a, b, cfg.tol), cfg.tol);
    const Subspace rhs = intersect(orthocomplement(a, cfg.tol), orthocomplement(b, cfg.tol), cfg.tol);
    if (lhs.dim() != rhs.dim()) return Outcome{false, 1.0};
    return within(lhs.dim() == 0 ? 0.0 : projector_distance(lhs, rhs), kResidualTol);
  });

  run.run("modular-law", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    auto [a, b] = t % 2 ? gen::commeasurable_pair(n, f, rng)
                        : std::pair{gen::random_dim_subspace(n, f, rng), gen::random_dim_subspace(n, f, rng)};
    const Index lhs = sum(a, b, cfg.tol).dim() + intersect(a, b, cfg.tol).dim();
    return Outcome{lhs == a.dim() + b.dim(), 0.0};
  });

  run.run("meet-is-product-range", cfg.trials, [&](Rng& rng, std::uint64_t) {
    auto [a, b] = gen::commeasurable_pair(n, f, rng);
    const Subspace meet = intersect(a, b, cfg.tol);
    const Subspace range = product_range(a, b, cfg.tol);
    if (meet.dim() != range.dim()) return Outcome{false, 1.0};
    return within(meet.dim() == 0 ? 0.0 : projector_distance(meet, range), kResidualTol);
  });

  run.run("orthonormalize-idempotent", cfg.trials, [&](Rng& rng, std::uint64_t) {
    const auto r = static_cast<Index>(1 + rng.below(static_cast<std::size_t>(n)));
    const Matrix cols = rng.gaussian_matrix(n, r, f) * rng.gaussian_matrix(r, n + 1, f);
    const Orthonormalized once = orthonormalize(cols, cfg.tol);
    const Orthonormalized twice = orthonormalize(once.basis, cfg.tol);
    const double d = projector_distance(Subspace::from_orthonormal(once.basis),
                                        Subspace::from_orthonormal(twice.basis));
    return Outcome{once.rank == twice.rank && once.rank == static_cast<std::size_t>(r) &&
                       d <= kResidualTol,
                   d};
  });

  run.run("rank-adjoint-symmetry", cfg.trials, [&](Rng& rng, std::uint64_t) {
    const auto r = static_cast<Index>(rng.below(static_cast<std::size_t>(n) + 1));
    const auto c = static_cast<Index>(1 + rng.below(static_cast<std::size_t>(n) + 2));
    const Matrix m = r == 0 ? Matrix(n, c, f) : rng.gaussian_matrix(n, r, f) * rng.gaussian_matrix(r, c, f);
    return Outcome{rank_with_tol(m, cfg.tol) == rank_with_tol(adjoint(m), cfg.tol), 0.0};
  });

  run.run("polar-factors", cfg.trials, [&](Rng& rng, std::uint64_t) {
    const Matrix m = detail::random_invertible(n, f, rng);
    const PolarFactors pf = polar_decompose(m, cfg.tol);
    // Independent route: m = W S V^H gives U = W V^H, P = V S V^H.
    Eigen::JacobiSVD<CMatrix> svd(m.entries(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMatrix u = svd.matrixU() * svd.matrixV().adjoint();
    const CMatrix p = svd.matrixV() * svd.singularValues().cast<Complex>().asDiagonal() *
                      svd.matrixV().adjoint();
    const double du = (pf.unitary.entries() - u).norm();
    const double dp = (pf.positive.entries() - p).norm() / m.entries().norm();
    return within(std::max(du, dp), kResidualTol);
  });
}

inline void clr(const SuiteConfig& cfg, PropertyRunner& run) {
  const Index n = cfg.ambient;
  const Field f = cfg.field;
  const double tol = cfg.tol;

  run.run("dimension-preserved", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    const SemilinearMap T = gen::semilinear(n, f, gen::pick_automorphism(f, t), rng);
    const Subspace a = gen::random_dim_subspace(n, f, rng);
    return Outcome{apply_to_subspace(T, a, tol).dim() == a.dim(), 0.0};
  });

  auto lattice = [&](bool commeasurable_only) {
    return [&, commeasurable_only](Rng& rng, std::uint64_t t) {
      const SemilinearMap T = gen::semilinear(n, f, gen::pick_automorphism(f, t), rng);
      auto [a, b] = commeasurable_only
                        ? gen::commeasurable_pair(n, f, rng)
                        : std::pair{gen::random_dim_subspace(n, f, rng), gen::random_dim_subspace(n, f, rng)};
      const Subspace ta = apply_to_subspace(T, a, tol);
      const Subspace tb = apply_to_subspace(T, b, tol);
      const Subspace join_img = apply_to_subspace(T, sum(a, b, tol), tol);
      const Subspace join_of_imgs = sum(ta, tb, tol);
      const Subspace meet_img = apply_to_subspace(T, intersect(a, b, tol), tol);
      const Subspace meet_of_imgs = intersect(ta, tb, tol);
      if (join_img.dim() != join_of_imgs.dim() || meet_img.dim() != meet_of_imgs.dim()) {
        return Outcome{false, 1.0};
      }
      double r = projector_distance(join_img, join_of_imgs);
      if (meet_img.dim() > 0) r = std::max(r, projector_distance(meet_img, meet_of_imgs));
      return within(r, kResidualTol);
    };
  };
  run.run("lattice-ops-preserved-commeasurable", cfg.trials, lattice(true));
  run.run("lattice-ops-preserved-all-pairs", cfg.trials, lattice(false));

  run.run("commeasurable-pairs-generic-under-unitaries", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    // Unitary T keeps commeasurability; a reference for the images above.
    const SemilinearMap U = gen::unitary_map(n, f, gen::pick_automorphism(f, t), rng);
    auto [a, b] = gen::commeasurable_pair(n, f, rng);
    const double c = commutator_norm(apply_to_subspace(U, a, tol), apply_to_subspace(U, b, tol));
    return within(c, 10 * tol);
  });

  if (n == 3) {
    run.run("line-projection-construct", cfg.trials, [&](Rng& rng, std::uint64_t) {
      const Subspace plane = random_subspace(3, 2, f, rng);
      const Subspace line =
          Subspace::span(plane.basis() * rng.gaussian_matrix(2, 1, f));
      const Subspace other = random_subspace(3, 1, f, rng);
      const LineProjection lp = line_projection_construct(line, other, plane, tol);
      const Subspace expected = Subspace::span(projector(plane).matrix * other.basis());
      const double r = std::max(projector_distance(lp.projected_line, expected),
                                commutator_norm(plane, lp.partner_plane));
      return Outcome{lp.projected_line.dim() == 1 && lp.partner_plane.dim() == 2 && r <= kResidualTol, r};
    });
  }
}

inline void clr_bis(const SuiteConfig& cfg, PropertyRunner& run) {
  const Index n = cfg.ambient;
  const Field f = cfg.field;
  const double tol = cfg.tol;

  run.run("inclusion-preserved", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    const SemilinearMap T = gen::semilinear(n, f, gen::pick_automorphism(f, t), rng);
    auto [a, b] = gen::nested_pair(n, f, rng);
    const double r = containment_residual(apply_to_subspace(T, a, tol), apply_to_subspace(T, b, tol));
    return within(r, kResidualTol);
  });

  run.run("orthogonal-lines-stay-independent", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    const SemilinearMap T = gen::semilinear(n, f, gen::pick_automorphism(f, t), rng);
    const FrameTuple frame = random_frame(n, gen::line_shape(n), true, f, rng);
    const FrameTuple img = induced_on_frame(T, frame, tol).with_orthogonal_flag(false);
    return Outcome{validate(img, tol).ok, 0.0};
  });

  run.run("unitaries-keep-orthogonality", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    const SemilinearMap U = gen::unitary_map(n, f, gen::pick_automorphism(f, t), rng);
    const FrameTuple frame = random_frame(n, gen::line_shape(n), true, f, rng);
    const FrameTuple img = induced_on_frame(U, frame, tol);
    return Outcome{img.orthogonal() && validate(img, 10 * tol).ok, 0.0};
  });
}

inline void pfr_perp(const SuiteConfig& cfg, PropertyRunner& run) {
  const Index n = cfg.ambient;
  const Field f = cfg.field;
  const double tol = cfg.tol;
  const auto cases = gen::partition_cases(n);
  const auto trials = covering(cfg.trials, cases.size());
  const IntPartition lines = gen::line_shape(n);

  run.run("linkage-preserved", trials, [&](Rng& rng, std::uint64_t t) {
    const Tableau pi = gen::pick_case(cases, n, t, rng);
    const SemilinearMap T = gen::semilinear(n, f, gen::pick_automorphism(f, t), rng);
    const FrameTuple a = random_frame(n, lines, true, f, rng);
    const FrameTuple b = random_linked_frame(a, pi, rng, tol);
    const double r = linkage_residual(induced_on_frame(T, a, tol), induced_on_frame(T, b, tol), pi, tol);
    return within(r, kResidualTol);
  });

  run.run("linkage-is-equivalence", trials, [&](Rng& rng, std::uint64_t t) {
    const Tableau pi = gen::pick_case(cases, n, t, rng);
    const FrameTuple a = random_frame(n, lines, t % 2 == 0, f, rng);
    const FrameTuple b = random_linked_frame(a, pi, rng, tol);
    const FrameTuple c = random_linked_frame(b, pi, rng, tol);
    const double r = std::max({linkage_residual(a, a, pi, tol), linkage_residual(b, a, pi, tol),
                               linkage_residual(a, c, pi, tol)});
    return within(r, kResidualTol);
  });

  run.run("non-linkage-preserved", trials, [&](Rng& rng, std::uint64_t t) {
    const Tableau pi = gen::pick_case(cases, n, t, rng);
    const SemilinearMap T = gen::semilinear(n, f, gen::pick_automorphism(f, t), rng);
    const FrameTuple a = random_frame(n, lines, true, f, rng);
    const FrameTuple b = random_frame(n, lines, true, f, rng);
    const bool before = linkage_residual(a, b, pi, tol) <= kResidualTol;
    const double after = linkage_residual(induced_on_frame(T, a, tol), induced_on_frame(T, b, tol), pi, tol);
    return Outcome{before == (after <= kResidualTol), 0.0};
  });

  run.run("symmetric-group-equivariance", trials, [&](Rng& rng, std::uint64_t t) {
    const SemilinearMap T = gen::semilinear(n, f, gen::pick_automorphism(f, t), rng);
    const FrameTuple a = random_frame(n, lines, true, f, rng);
    const Permutation sigma = gen::permutation_in(a.shape().parts(), rng);
    const double r = frame_distance(induced_on_frame(T, permute(a, sigma), tol),
                                    permute(induced_on_frame(T, a, tol), sigma));
    return within(r, kResidualTol);
  });

  run.run("bigobot-preserved", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    const SemilinearMap T = gen::semilinear(n, f, gen::pick_automorphism(f, t), rng);
    const auto [a, b] = gen::compatible_frames(n, f, rng);
    if (!bigobot(a, b)) return Outcome{false, 1.0};
    return Outcome{bigobot(induced_on_frame(T, a, tol), induced_on_frame(T, b, tol)), 0.0};
  });
}

inline void pfr(const SuiteConfig& cfg, PropertyRunner& run) {
  const Index n = cfg.ambient;
  const Field f = cfg.field;
  const double tol = cfg.tol;
  const auto cases = gen::partition_cases(n);
  const auto trials = covering(cfg.trials, cases.size());
  const IntPartition lines = gen::line_shape(n);

  run.run("eversion-involution", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    const IntPartition shape = t % 2 ? gen::shape(n, rng) : lines;
    const FrameTuple a = random_frame(n, shape, false, f, rng);
    return within(frame_distance(evert(evert(a, tol), tol), a), kResidualTol);
  });

  run.run("eversion-fixes-orthogonal", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    const IntPartition shape = t % 2 ? gen::shape(n, rng) : lines;
    const FrameTuple a = random_frame(n, shape, true, f, rng);
    return within(frame_distance(evert(a, tol), a), 10 * tol);
  });

  run.run("eversion-preserves-linkage", trials, [&](Rng& rng, std::uint64_t t) {
    const Tableau pi = gen::pick_case(cases, n, t, rng);
    const FrameTuple a = random_frame(n, lines, false, f, rng);
    const FrameTuple b = random_linked_frame(a, pi, rng, tol);
    return within(linkage_residual(evert(a, tol), evert(b, tol), pi, tol), kResidualTol);
  });

  run.run("eversion-permutation-commute", trials, [&](Rng& rng, std::uint64_t t) {
    const IntPartition shape = t % 2 ? gen::shape(n, rng) : lines;
    const FrameTuple a = random_frame(n, shape, false, f, rng);
    const Permutation sigma = gen::permutation_in(a.shape().parts(), rng);
    return within(frame_distance(evert(permute(a, sigma), tol), permute(evert(a, tol), sigma)),
                  kResidualTol);
  });

  run.run("everted-induced-preserves-linkage", trials, [&](Rng& rng, std::uint64_t t) {
    const Tableau pi = gen::pick_case(cases, n, t, rng);
    const SemilinearMap T = gen::semilinear(n, f, gen::pick_automorphism(f, t), rng);
    const FrameTuple a = random_frame(n, lines, false, f, rng);
    const FrameTuple b = random_linked_frame(a, pi, rng, tol);
    const FrameTuple ta = induced_on_frame(T, evert(a, tol), tol);
    const FrameTuple tb = induced_on_frame(T, evert(b, tol), tol);
    return within(linkage_residual(ta, tb, pi, tol), kResidualTol);
  });

  run.run("eversion-moves-general-frames", cfg.trials, [&](Rng& rng, std::uint64_t) {
    const FrameTuple a = random_frame(n, lines, false, f, rng);
    const double d = frame_distance(evert(a, tol), a);
    return Outcome{d > 1e-6, 0.0};
  });
}

inline void eversion_order(const SuiteConfig& cfg, PropertyRunner& run) {
  const Index n = cfg.ambient;
  const Field f = cfg.field;
  const double tol = cfg.tol;
  constexpr int kFramesPerMap = 10;

  run.run("evert-past-induced-map", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    const SemilinearMap T = gen::semilinear(n, f, gen::pick_automorphism(f, t), rng);
    const SemilinearMap Tp = evert_conjugate(T, tol);
    double worst = 0.0;
    for (int k = 0; k < kFramesPerMap; ++k) {
      const FrameTuple a = random_frame(n, k % 2 ? gen::shape(n, rng) : gen::line_shape(n), false, f, rng);
      const double r = frame_distance(induced_on_frame(Tp, evert(a, tol), tol),
                                      evert(induced_on_frame(T, a, tol), tol));
      worst = std::max(worst, r);
    }
    return within(worst, kEvertConjugateTol);
  });

  run.run("unitary-is-own-conjugate", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    const SemilinearMap U = gen::unitary_map(n, f, gen::pick_automorphism(f, t), rng);
    return Outcome{scale_equivalent(evert_conjugate(U, tol), U, kResidualTol), 0.0};
  });

  run.run("conjugate-round-trip", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    CMatrix d = CMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) d(i, i) = 0.1 + 10.0 * rng.uniform();
    const SemilinearMap D(Matrix::coerce(d, f), gen::pick_automorphism(f, t));
    const SemilinearMap T = t % 3 == 0 ? gen::semilinear(n, f, gen::pick_automorphism(f, t), rng) : D;
    return Outcome{scale_equivalent(evert_conjugate(evert_conjugate(T, tol), tol), T, kResidualTol), 0.0};
  });

  run.run("polar-residuals", cfg.trials, [&](Rng& rng, std::uint64_t) {
    const Matrix m = detail::random_invertible(n, f, rng);
    const PolarFactors pf = polar_decompose(m, tol);
    const CMatrix& u = pf.unitary.entries();
    const CMatrix& p = pf.positive.entries();
    const double ru = (u.adjoint() * u - CMatrix::Identity(n, n)).norm();
    const double rp = (u * p - m.entries()).norm() / m.entries().norm();
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(p, Eigen::EigenvaluesOnly);
    const bool positive = eig.eigenvalues().minCoeff() > 0.0;
    return Outcome{positive && ru <= 10 * tol && rp <= 10 * tol, std::max(ru, rp)};
  });
}

inline void obot(const SuiteConfig& cfg, PropertyRunner& run) {
  const Index n = cfg.ambient;
  const Field f = cfg.field;
  const double tol = cfg.tol;
  const double ctol = 10 * tol;

  auto split_frame = [&](const Subspace& w) {
    Subspace wc = orthocomplement(w, tol);
    if (w.dim() >= wc.dim()) return FrameTuple({w, wc}, true);
    return FrameTuple({wc, w}, true);
  };
  auto proper = [&](Rng& rng) {
    const auto d = static_cast<Index>(1 + rng.below(static_cast<std::size_t>(n - 1)));
    return random_subspace(n, d, f, rng);
  };

  run.run("restricts-to-commeasurability", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    std::pair<Subspace, Subspace> p = [&] {
      if (t % 2 == 0) return std::pair{proper(rng), proper(rng)};
      for (;;) {
        auto q = gen::commeasurable_pair(n, f, rng);
        if (q.first.dim() < n && q.second.dim() < n) return q;
      }
    }();
    const bool lhs = commeasurable(p.first, p.second, ctol);
    const bool rhs = bigobot(split_frame(p.first), split_frame(p.second), ctol);
    return Outcome{lhs == rhs, lhs == rhs ? 0.0 : commutator_norm(p.first, p.second)};
  });

  run.run("directions-agree", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    auto [a, b] = t % 2 ? std::pair{random_frame(n, gen::shape(n, rng), true, f, rng),
                                    random_frame(n, gen::shape(n, rng), true, f, rng)}
                        : gen::compatible_frames(n, f, rng);
    const auto d = bigobot_directions(a, b, ctol);
    return Outcome{d.a_split_by_b == d.b_split_by_a, 0.0};
  });

  run.run("reflexive", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    const FrameTuple a = random_frame(n, gen::shape(n, rng), t % 2 == 0, f, rng);
    return Outcome{bigobot(a, a, ctol), 0.0};
  });
}

/// Component frame for a fine tableau: random frame of its shape.
inline FrameTuple frame_for(const Tableau& fine, Field f, bool orthogonal, Rng& rng) {
  return random_frame(fine.n(), fine.shape(), orthogonal, f, rng);
}

struct Chain {
  RefinementArrow first;
  RefinementArrow second;
};

inline std::vector<Chain> all_chains(int n) {
  const auto tabs = all_tableaux(n);
  std::vector<Chain> out;
  for (const auto& a : tabs) {
    for (const auto& b : tabs) {
      auto f = reverse_refines(a, b);
      if (!f) continue;
      for (const auto& c : tabs) {
        auto g = reverse_refines(b, c);
        if (g) out.push_back({*f, *g});
      }
    }
  }
  return out;
}

struct LiftCase {
  RefinementArrow arrow;
  Permutation coarse_perm;
  Permutation fine_perm;
};

inline std::vector<LiftCase> all_lift_cases(int n) {
  const auto tabs = all_tableaux(n);
  std::vector<LiftCase> out;
  for (const auto& a : tabs) {
    for (const auto& b : tabs) {
      auto f = reverse_refines(a, b);
      if (!f) continue;
      for (const auto& sigma : dimension_preserving_permutations(b.shape().parts())) {
        if (auto lift = lift_coarse_permutation(*f, sigma)) out.push_back({*f, sigma, *lift});
      }
    }
  }
  return out;
}

inline void refinement(const SuiteConfig& cfg, PropertyRunner& run) {
  const Index n = cfg.ambient;
  const Field f = cfg.field;
  const double tol = cfg.tol;
  const bool exhaustive = n <= 5;
  const auto chains = exhaustive ? all_chains(static_cast<int>(n)) : std::vector<Chain>{};
  const auto lifts = exhaustive ? all_lift_cases(static_cast<int>(n)) : std::vector<LiftCase>{};
  const auto tabs = all_tableaux(static_cast<int>(n));

  auto sample_chain = [&](Rng& rng) {
    const Tableau a = tabs[rng.below(tabs.size())];
    const Tableau b = gen::coarsening(a, rng);
    const Tableau c = gen::coarsening(b, rng);
    return Chain{*reverse_refines(a, b), *reverse_refines(b, c)};
  };

  run.run("functoriality", covering(cfg.trials, chains.size()), [&](Rng& rng, std::uint64_t t) {
    const Chain ch = exhaustive ? chains[t % chains.size()] : sample_chain(rng);
    const FrameTuple frame = frame_for(ch.first.fine, f, t % 2 == 0, rng);
    const FrameTuple stepwise = refine_map(refine_map(frame, ch.first, tol), ch.second, tol);
    const FrameTuple direct = refine_map(frame, compose_refinements(ch.first, ch.second), tol);
    return within(frame_distance(stepwise, direct), kResidualTol);
  });

  run.run("identity-arrow", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    const Tableau a = tabs[t % tabs.size()];
    const FrameTuple frame = frame_for(a, f, t % 2 == 0, rng);
    return within(frame_distance(refine_map(frame, identity_arrow(a), tol), frame), kResidualTol);
  });

  run.run("symmetric-group-equivariance", covering(cfg.trials, lifts.size()), [&](Rng& rng, std::uint64_t t) {
    LiftCase lc;
    if (exhaustive) {
      lc = lifts[t % lifts.size()];
    } else {
      for (;;) {
        const Tableau a = tabs[rng.below(tabs.size())];
        const Tableau b = gen::coarsening(a, rng);
        const RefinementArrow arrow = *reverse_refines(a, b);
        const Permutation sigma = gen::permutation_in(b.shape().parts(), rng);
        if (auto lift = lift_coarse_permutation(arrow, sigma)) {
          lc = {arrow, sigma, *lift};
          break;
        }
      }
    }
    const FrameTuple frame = frame_for(lc.arrow.fine, f, t % 2 == 0, rng);
    const FrameTuple lhs = refine_map(permute(frame, lc.fine_perm), lc.arrow, tol);
    const FrameTuple rhs = permute(refine_map(frame, lc.arrow, tol), lc.coarse_perm);
    return within(frame_distance(lhs, rhs), kResidualTol);
  });

  run.run("orthogonality-preserved", cfg.trials, [&](Rng& rng, std::uint64_t) {
    const Chain ch = sample_chain(rng);
    const FrameTuple frame = frame_for(ch.first.fine, f, true, rng);
    const FrameTuple coarse = refine_map(frame, ch.first, tol);
    return Outcome{coarse.orthogonal() && validate(coarse, 10 * tol).ok, 0.0};
  });
}

inline void partitions(const SuiteConfig&, PropertyRunner& run) {
  std::vector<IntPartition> upto12;
  for (int m = 1; m <= 12; ++m) {
    for (auto& p : all_int_partitions(m)) upto12.push_back(std::move(p));
  }
  run.run("conjugate-involution", upto12.size(), [&](Rng&, std::uint64_t t) {
    const IntPartition& mu = upto12[t];
    const IntPartition c = conjugate(mu);
    return Outcome{conjugate(c) == mu && c.size() == mu.size(), 0.0};
  });

  run.run("jump-sums", upto12.size(), [&](Rng&, std::uint64_t t) {
    const IntPartition& mu = upto12[t];
    const auto j = jmp_sequence(mu);
    const auto s = symmetry_factors(mu);
    const int sj = std::accumulate(j.begin(), j.end(), 0);
    const int ss = std::accumulate(s.begin(), s.end(), 0);
    return Outcome{sj == mu[0] && ss == static_cast<int>(mu.length()), 0.0};
  });

  std::vector<std::pair<Tableau, Tableau>> refining;
  for (int m = 1; m <= 6; ++m) {
    const auto tabs = all_tableaux(m);
    for (const auto& a : tabs) {
      for (const auto& b : tabs) {
        if (reverse_refines(a, b)) refining.emplace_back(a, b);
      }
    }
  }
  run.run("refinement-implies-dominance", refining.size(), [&](Rng&, std::uint64_t t) {
    const auto& [a, b] = refining[t];
    return Outcome{dominance_leq(a.shape(), b.shape()), 0.0};
  });

  std::vector<Chain> chains;
  for (int m = 1; m <= 5; ++m) {
    for (auto& c : all_chains(m)) chains.push_back(std::move(c));
  }
  run.run("composition-unital", chains.size(), [&](Rng&, std::uint64_t t) {
    const RefinementArrow& f = chains[t].first;
    const bool left = compose_refinements(identity_arrow(f.fine), f) == f;
    const bool right = compose_refinements(f, identity_arrow(f.coarse)) == f;
    return Outcome{left && right, 0.0};
  });

  run.run("composition-associative", chains.size(), [&](Rng&, std::uint64_t t) {
    const Chain& c = chains[t];
    // Every arrow out of c.second.coarse closes the triple.
    const auto tabs = all_tableaux(c.second.coarse.n());
    for (const auto& d : tabs) {
      auto h = reverse_refines(c.second.coarse, d);
      if (!h) continue;
      const auto lhs = compose_refinements(compose_refinements(c.first, c.second), *h);
      const auto rhs = compose_refinements(c.first, compose_refinements(c.second, *h));
      if (!(lhs == rhs)) return Outcome{false, 0.0};
    }
    return Outcome{true, 0.0};
  });
}

/// Line map ℓ = span(v) -> span(f(v)) with f(v)_k = v_k + eps v_k |v_k|^2,
/// applied to the unit representative whose first nonzero coordinate is
/// real and positive.
inline Subspace distort_line(const Subspace& line, double eps, double tol = kDefaultTol) {
  Eigen::VectorXcd v = line.basis().entries().col(0);
  v /= v.norm();
  for (Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > tol) {
      v *= std::conj(v(k)) / std::abs(v(k));
      break;
    }
  }
  Eigen::VectorXcd w(v.size());
  for (Index k = 0; k < v.size(); ++k) w(k) = v(k) + eps * v(k) * std::norm(v(k));
  return Subspace::span(Matrix::coerce(w, line.field()), tol);
}

inline FrameTuple distort_frame(const FrameTuple& t, double eps, double tol = kDefaultTol) {
  std::vector<Subspace> out;
  for (const auto& c : t.components()) out.push_back(distort_line(c, eps, tol));
  return FrameTuple(std::move(out), false);
}

inline void reconstruction(const SuiteConfig& cfg, PropertyRunner& run) {
  const Index n = cfg.ambient;
  const Field f = cfg.field;
  const double tol = cfg.tol;

  run.run("round-trip", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    const SemilinearMap hidden = gen::semilinear(n, f, gen::pick_automorphism(f, t), rng);
    const LineOracle oracle = [&](const Subspace& l) { return apply_to_subspace(hidden, l, tol); };
    const SemilinearMap found = reconstruct_from_line_images(oracle, n, f, {.tol = tol});
    return Outcome{scale_equivalent(found, hidden, kResidualTol), 0.0};
  });

  const std::uint64_t distorted = (cfg.trials + 3) / 4;
  run.run("distorted-oracle-rejected", distorted, [&](Rng& rng, std::uint64_t t) {
    const SemilinearMap hidden = gen::semilinear(n, f, gen::pick_automorphism(f, t), rng);
    const double eps = 0.05 + 0.45 * rng.uniform();
    const LineOracle oracle = [&](const Subspace& l) {
      return apply_to_subspace(hidden, distort_line(l, eps, tol), tol);
    };
    try {
      reconstruct_from_line_images(oracle, n, f, {.tol = tol});
    } catch (const Error& e) {
      return Outcome{e.kind() == ErrorKind::NotSemilinear, 0.0};
    }
    return Outcome{false, 0.0};
  });
}

inline void falsify(const SuiteConfig& cfg, PropertyRunner& run) {
  const Index n = cfg.ambient;
  const Field f = cfg.field;
  const double tol = cfg.tol;
  std::vector<Tableau> cases;
  for (auto& t : gen::partition_cases(n)) {
    if (is_nontrivial(t)) cases.push_back(std::move(t));
  }
  const IntPartition lines = gen::line_shape(n);

  auto broken = [&](double eps) {
    return [&, eps](Rng& rng, std::uint64_t t) {
      const Tableau pi = n <= 6 ? cases[t % cases.size()] : cases[rng.below(cases.size())];
      const FrameTuple a = random_frame(n, lines, false, f, rng);
      const FrameTuple b = random_linked_frame(a, pi, rng, tol);
      const double r = linkage_residual(distort_frame(a, eps, tol), distort_frame(b, eps, tol), pi, tol);
      return r > kResidualTol;
    };
  };

  if (cfg.epsilon > 0.0) {
    run.run_rate("distortion-breaks-linkage", cfg.trials, kFalsifyMinRate, broken(cfg.epsilon));
  }
  // Control: no distortion, no violations.
  run.run("identity-control", cfg.trials, [&](Rng& rng, std::uint64_t t) {
    return Outcome{!broken(0.0)(rng, t), 0.0};
  });

  if (cfg.epsilon > 0.0) {
    const std::uint64_t probes = std::min<std::uint64_t>(cfg.trials, 50);
    run.run("distorted-reconstruction-rejected", probes, [&](Rng&, std::uint64_t) {
      const double eps = cfg.epsilon;
      const LineOracle oracle = [&](const Subspace& l) { return distort_line(l, eps, tol); };
      try {
        reconstruct_from_line_images(oracle, n, f, {.tol = tol});
      } catch (const Error& e) {
        return Outcome{e.kind() == ErrorKind::NotSemilinear, 0.0};
      }
      return Outcome{false, 0.0};
    });
  }
}

}  // namespace suites

inline VerificationReport run_suite(const SuiteConfig& cfg) {
  validate_config(cfg);
  const auto start = std::chrono::steady_clock::now();
  PropertyRunner runner(cfg);
  const std::string& s = cfg.suite;
  if (s == "subspaces") suites::subspaces(cfg, runner);
  else if (s == "clr") suites::clr(cfg, runner);
  else if (s == "clr-bis") suites::clr_bis(cfg, runner);
  else if (s == "pfr-perp") suites::pfr_perp(cfg, runner);
  else if (s == "pfr") suites::pfr(cfg, runner);
  else if (s == "eversion-order") suites::eversion_order(cfg, runner);
  else if (s == "obot") suites::obot(cfg, runner);
  else if (s == "refinement") suites::refinement(cfg, runner);
  else if (s == "partitions") suites::partitions(cfg, runner);
  else if (s == "reconstruction") suites::reconstruction(cfg, runner);
  else if (s == "falsify") suites::falsify(cfg, runner);
  VerificationReport report;
  report.config = cfg;
  report.properties = runner.take();
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// --- report encoding -----------------------------------------------------------

using Json = nlohmann::ordered_json;

/// Keys in fixed order: schema, suite, config, properties, summary. The
/// wall-time field is the only nondeterministic value.
inline Json to_json(const VerificationReport& r, bool include_wall_time = true) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["suite"] = r.config.suite;
  Json c;
  c["ambient"] = r.config.ambient;
  c["field"] = to_string(r.config.field);
  c["trials"] = r.config.trials;
  c["seed"] = r.config.seed;
  c["tol"] = r.config.tol;
  if (r.config.suite == "falsify") c["epsilon"] = r.config.epsilon;
  j["config"] = std::move(c);
  Json props = Json::array();
  std::size_t failed = 0;
  for (const auto& p : r.properties) {
    Json e;
    e["name"] = p.name;
    e["trials"] = p.trials;
    e["failures"] = p.failures;
    e["worst_residual"] = p.worst_residual;
    e["first_failing_seed"] = p.first_failing_seed ? Json(*p.first_failing_seed) : Json(nullptr);
    if (p.rate) e["rate"] = *p.rate;
    if (p.min_rate) e["min_rate"] = *p.min_rate;
    e["passed"] = p.passed();
    failed += p.passed() ? 0 : 1;
    props.push_back(std::move(e));
  }
  j["properties"] = std::move(props);
  Json s;
  s["passed"] = r.passed();
  s["properties"] = r.properties.size();
  s["failed_properties"] = failed;
  s["version"] = r.version;
  if (include_wall_time) s["wall_time_s"] = r.wall_time_s;
  j["summary"] = std::move(s);
  return j;
}

}  // namespace rigidity::verify
