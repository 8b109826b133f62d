#pragma once

// Integer partitions, tableaux as set partitions of {1..n}, and the reverse
// refinement arrows between them.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "rigidity/error.hpp"

namespace rigidity {

/// mu_1 >= ... >= mu_s > 0.
class IntPartition {
 public:
  IntPartition() = default;

  /// Parts listed in any order are sorted; nonpositive parts are rejected.
  explicit IntPartition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (int p : parts_) {
      if (p <= 0) throw Error(ErrorKind::InvalidArgument, "partition parts must be positive");
    }
    std::sort(parts_.begin(), parts_.end(), std::greater<>());
  }

  const std::vector<int>& parts() const { return parts_; }
  std::size_t length() const { return parts_.size(); }
  int size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
  int operator[](std::size_t i) const { return i < parts_.size() ? parts_[i] : 0; }

  friend bool operator==(const IntPartition&, const IntPartition&) = default;

 private:
  std::vector<int> parts_;
};

using Block = std::vector<int>;

/// A set partition of {1..n}, stored canonically: each block sorted, blocks
/// ordered by size descending then smallest element ascending.
class Tableau {
 public:
  Tableau() = default;

  Tableau(int n, std::vector<Block> blocks) : n_(n), blocks_(std::move(blocks)) {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative tableau size");
    std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
    for (auto& b : blocks_) {
      if (b.empty()) throw Error(ErrorKind::InvalidArgument, "empty tableau block");
      std::sort(b.begin(), b.end());
      for (int s : b) {
        if (s < 1 || s > n) throw Error(ErrorKind::InvalidArgument, "symbol out of range");
        if (seen[static_cast<std::size_t>(s)]++) {
          throw Error(ErrorKind::InvalidArgument, "tableau blocks overlap");
        }
      }
    }
    for (int s = 1; s <= n; ++s) {
      if (!seen[static_cast<std::size_t>(s)]) {
        throw Error(ErrorKind::InvalidArgument, "tableau blocks do not cover 1..n");
      }
    }
    std::sort(blocks_.begin(), blocks_.end(), [](const Block& a, const Block& b) {
      if (a.size() != b.size()) return a.size() > b.size();
      return a.front() < b.front();
    });
  }

  static Tableau singletons(int n) {
    std::vector<Block> blocks;
    for (int s = 1; s <= n; ++s) blocks.push_back({s});
    return Tableau(n, std::move(blocks));
  }

  static Tableau single_block(int n) {
    Block b(static_cast<std::size_t>(n));
    std::iota(b.begin(), b.end(), 1);
    return Tableau(n, {std::move(b)});
  }

  int n() const { return n_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }

  IntPartition shape() const {
    std::vector<int> sizes;
    for (const auto& b : blocks_) sizes.push_back(static_cast<int>(b.size()));
    return IntPartition(std::move(sizes));
  }

  /// Index of the block holding symbol s, or block_count() if absent.
  std::size_t block_of(int s) const {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (std::binary_search(blocks_[i].begin(), blocks_[i].end(), s)) return i;
    }
    return blocks_.size();
  }

  friend bool operator==(const Tableau&, const Tableau&) = default;

 private:
  int n_ = 0;
  std::vector<Block> blocks_;
};

/// fine ⪯ coarse together with the block containment map.
struct RefinementArrow {
  Tableau fine;
  Tableau coarse;
  std::vector<std::size_t> block_map;

  friend bool operator==(const RefinementArrow&, const RefinementArrow&) = default;
};

/// (mu^⊥)_i = #{ j : mu_j >= i }.
inline IntPartition conjugate(const IntPartition& mu) {
  std::vector<int> parts;
  const int rows = mu.length() == 0 ? 0 : mu[0];
  for (int i = 1; i <= rows; ++i) {
    int count = 0;
    for (int p : mu.parts()) count += p >= i ? 1 : 0;
    parts.push_back(count);
  }
  return IntPartition(std::move(parts));
}

/// Strictly positive members of (mu_j - mu_{j+1})_j, with mu_{s+1} = 0.
inline std::vector<int> jmp_sequence(const IntPartition& mu) {
  std::vector<int> jumps;
  for (std::size_t j = 0; j < mu.length(); ++j) {
    const int d = mu[j] - mu[j + 1];
    if (d > 0) jumps.push_back(d);
  }
  return jumps;
}

/// Orders of the symmetric-group factors acting on F_mu: jmp(mu^⊥).
inline std::vector<int> symmetry_factors(const IntPartition& mu) {
  return jmp_sequence(conjugate(mu));
}

inline bool dominance_leq(const IntPartition& mu, const IntPartition& nu) {
  if (mu.size() != nu.size()) throw Error(ErrorKind::SizeMismatch, "partitions of different n");
  int a = 0;
  int b = 0;
  const std::size_t len = std::max(mu.length(), nu.length());
  for (std::size_t j = 0; j < len; ++j) {
    a += mu[j];
    b += nu[j];
    if (a > b) return false;
  }
  return true;
}

/// The arrow fine ⪯ coarse when every fine block sits in a coarse block.
inline std::optional<RefinementArrow> reverse_refines(const Tableau& fine, const Tableau& coarse) {
  if (fine.n() != coarse.n()) throw Error(ErrorKind::SizeMismatch, "tableaux of different n");
  std::vector<std::size_t> map;
  map.reserve(fine.block_count());
  for (const auto& b : fine.blocks()) {
    const std::size_t k = coarse.block_of(b.front());
    const auto& target = coarse.blocks()[k];
    if (!std::includes(target.begin(), target.end(), b.begin(), b.end())) return std::nullopt;
    map.push_back(k);
  }
  return RefinementArrow{fine, coarse, std::move(map)};
}

inline RefinementArrow identity_arrow(const Tableau& t) {
  std::vector<std::size_t> map(t.block_count());
  std::iota(map.begin(), map.end(), std::size_t{0});
  return {t, t, std::move(map)};
}

inline RefinementArrow compose_refinements(const RefinementArrow& f, const RefinementArrow& g) {
  if (!(f.coarse == g.fine)) {
    throw Error(ErrorKind::ChainMismatch, "arrows do not compose: f.coarse != g.fine");
  }
  std::vector<std::size_t> map;
  map.reserve(f.block_map.size());
  for (std::size_t k : f.block_map) map.push_back(g.block_map[k]);
  return {f.fine, g.coarse, std::move(map)};
}

// --- enumeration -----------------------------------------------------------

inline std::vector<IntPartition> all_int_partitions(int n) {
  std::vector<IntPartition> out;
  std::vector<int> current;
  std::function<void(int, int)> rec = [&](int remaining, int cap) {
    if (remaining == 0) {
      out.emplace_back(current);
      return;
    }
    for (int p = std::min(remaining, cap); p >= 1; --p) {
      current.push_back(p);
      rec(remaining - p, p);
      current.pop_back();
    }
  };
  rec(n, n);
  return out;
}

/// All set partitions of {1..n} via restricted growth strings.
inline std::vector<Tableau> all_tableaux(int n) {
  std::vector<Tableau> out;
  if (n == 0) {
    out.emplace_back(0, std::vector<Block>{});
    return out;
  }
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int pos, int max_label) {
    if (pos == n) {
      std::vector<Block> blocks(static_cast<std::size_t>(max_label) + 1);
      for (int s = 0; s < n; ++s) blocks[static_cast<std::size_t>(rgs[s])].push_back(s + 1);
      out.emplace_back(n, std::move(blocks));
      return;
    }
    for (int label = 0; label <= max_label + 1; ++label) {
      rgs[static_cast<std::size_t>(pos)] = label;
      rec(pos + 1, std::max(max_label, label));
    }
  };
  rgs[0] = 0;
  rec(1, 0);
  return out;
}

/// Set partitions with a block of size strictly between 1 and n.
inline bool is_nontrivial(const Tableau& t) {
  return std::any_of(t.blocks().begin(), t.blocks().end(), [&](const Block& b) {
    return b.size() >= 2 && static_cast<int>(b.size()) < t.n();
  });
}

// --- symmetric-group actions -----------------------------------------------

/// Permutation p acting by result[i] = input[p[i]].
using Permutation = std::vector<std::size_t>;

inline bool is_permutation(const Permutation& p) {
  std::vector<char> hit(p.size(), 0);
  for (std::size_t v : p) {
    if (v >= p.size() || hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

/// Every permutation of positions 0..dims.size()-1 that only exchanges
/// positions carrying equal values: the group S_mu for component dims mu.
inline std::vector<Permutation> dimension_preserving_permutations(const std::vector<int>& dims) {
  std::vector<Permutation> out;
  Permutation p(dims.size());
  std::iota(p.begin(), p.end(), std::size_t{0});
  do {
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i) ok = dims[i] == dims[p[i]];
    if (ok) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Lift of a coarse permutation through S_nu ≤ S_mu.
///
/// Coarse block k is carried onto coarse block sigma(k) by the order-preserving
/// bijection of their sorted symbols; the lift exists when that symbol map
/// carries every fine block onto a fine block, and is then the induced
/// permutation of fine block indices.
inline std::optional<Permutation> lift_coarse_permutation(const RefinementArrow& arrow,
                                                          const Permutation& coarse_perm) {
  const auto& coarse = arrow.coarse.blocks();
  const auto& fine = arrow.fine.blocks();
  if (coarse_perm.size() != coarse.size() || !is_permutation(coarse_perm)) {
    throw Error(ErrorKind::IllegalPermutation, "coarse permutation has the wrong size");
  }
  const int n = arrow.fine.n();
  std::vector<int> symbol_map(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const auto& src = coarse[k];
    const auto& dst = coarse[coarse_perm[k]];
    if (src.size() != dst.size()) {
      throw Error(ErrorKind::IllegalPermutation, "coarse permutation mixes block sizes");
    }
    for (std::size_t i = 0; i < src.size(); ++i) {
      symbol_map[static_cast<std::size_t>(src[i])] = dst[i];
    }
  }
  Permutation lifted(fine.size());
  for (std::size_t j = 0; j < fine.size(); ++j) {
    Block image;
    for (int s : fine[j]) image.push_back(symbol_map[static_cast<std::size_t>(s)]);
    std::sort(image.begin(), image.end());
    const auto it = std::find(fine.begin(), fine.end(), image);
    if (it == fine.end()) return std::nullopt;
    lifted[j] = static_cast<std::size_t>(it - fine.begin());
  }
  return lifted;
}

inline std::string to_string(const IntPartition& mu) {
  std::string s = "(";
  for (std::size_t i = 0; i < mu.length(); ++i) {
    if (i) s += ",";
    s += std::to_string(mu[i]);
  }
  return s + ")";
}

inline std::string to_string(const Tableau& t) {
  std::string s = "{";
  for (std::size_t i = 0; i < t.block_count(); ++i) {
    if (i) s += ",";
    s += "{";
    for (std::size_t j = 0; j < t.blocks()[i].size(); ++j) {
      if (j) s += ",";
      s += std::to_string(t.blocks()[i][j]);
    }
    s += "}";
  }
  return s + "}";
}

}  // namespace rigidity
