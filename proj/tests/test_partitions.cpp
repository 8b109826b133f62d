#include <gtest/gtest.h>

#include <set>

#include "rigidity/partitions.hpp"

namespace {

using namespace rigidity;

IntPartition P(std::vector<int> parts) { return IntPartition(std::move(parts)); }

/// Conjugate by drawing the diagram as a 0/1 grid and reading columns.
IntPartition transpose_oracle(const IntPartition& mu) {
  if (mu.length() == 0) return mu;
  std::vector<std::vector<int>> grid(mu.length(), std::vector<int>(static_cast<std::size_t>(mu[0]), 0));
  for (std::size_t r = 0; r < mu.length(); ++r) {
    for (int c = 0; c < mu[r]; ++c) grid[r][static_cast<std::size_t>(c)] = 1;
  }
  std::vector<int> cols;
  for (int c = 0; c < mu[0]; ++c) {
    int h = 0;
    for (const auto& row : grid) h += row[static_cast<std::size_t>(c)];
    cols.push_back(h);
  }
  return IntPartition(cols);
}

/// Multiplicities of equal parts, in order of increasing part value.
std::vector<int> multiplicities(const IntPartition& mu) {
  std::vector<int> out;
  for (std::size_t i = 0; i < mu.length();) {
    std::size_t j = i;
    while (j < mu.length() && mu[j] == mu[i]) ++j;
    out.push_back(static_cast<int>(j - i));
    i = j;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

TEST(IntPartition, SortsAndRejectsNonPositiveParts) {
  EXPECT_EQ(P({1, 3, 2}).parts(), (std::vector<int>{3, 2, 1}));
  EXPECT_THROW(P({2, 0}), Error);
  EXPECT_EQ(P({2, 1})[5], 0);
}

TEST(Conjugate, Examples) {
  EXPECT_EQ(conjugate(P({4})), P({1, 1, 1, 1}));
  EXPECT_EQ(conjugate(P({1, 1, 1})), P({3}));
  EXPECT_EQ(conjugate(P({3, 1})), P({2, 1, 1}));
}

TEST(Conjugate, InvolutionExhaustiveUpTo12) {
  std::size_t count = 0;
  for (int n = 1; n <= 12; ++n) {
    for (const auto& mu : all_int_partitions(n)) {
      EXPECT_EQ(conjugate(mu), transpose_oracle(mu));
      EXPECT_EQ(conjugate(conjugate(mu)), mu);
      ++count;
    }
  }
  EXPECT_EQ(count, 271u);  // sum of p(n) for n = 1..12
}

TEST(Jmp, Examples) {
  EXPECT_EQ(jmp_sequence(P({1, 1, 1})), (std::vector<int>{1}));
  EXPECT_EQ(jmp_sequence(P({3})), (std::vector<int>{3}));
  EXPECT_EQ(jmp_sequence(P({3, 3, 2, 1, 1})), (std::vector<int>{1, 1, 1}));
}

TEST(SymmetryFactors, Examples) {
  EXPECT_EQ(symmetry_factors(P({1, 1, 1})), (std::vector<int>{3}));
  EXPECT_EQ(symmetry_factors(P({2, 1})), (std::vector<int>{1, 1}));
  EXPECT_EQ(symmetry_factors(P({2, 2, 1, 1})), (std::vector<int>{2, 2}));
}

TEST(SymmetryFactors, EqualPartMultiplicitiesAndSums) {
  for (int n = 1; n <= 12; ++n) {
    for (const auto& mu : all_int_partitions(n)) {
      const auto s = symmetry_factors(mu);
      EXPECT_EQ(s, multiplicities(mu));
      const auto j = jmp_sequence(mu);
      EXPECT_EQ(std::accumulate(j.begin(), j.end(), 0), mu[0]);
      EXPECT_EQ(std::accumulate(s.begin(), s.end(), 0), static_cast<int>(mu.length()));
    }
  }
}

TEST(Dominance, Examples) {
  EXPECT_TRUE(dominance_leq(P({2, 1}), P({2, 1})));
  EXPECT_TRUE(dominance_leq(P({1, 1, 1}), P({3})));
  EXPECT_TRUE(dominance_leq(P({2, 2}), P({3, 1})));
  EXPECT_FALSE(dominance_leq(P({3, 1}), P({2, 2})));
  try {
    dominance_leq(P({2}), P({3}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeMismatch);
  }
}

TEST(Tableau, CanonicalOrderAndValidation) {
  const Tableau t(4, {{4}, {3, 1}, {2}});
  EXPECT_EQ(t.blocks(), (std::vector<Block>{{1, 3}, {2}, {4}}));
  EXPECT_EQ(t.shape(), P({2, 1, 1}));
  EXPECT_THROW(Tableau(3, {{1, 2}, {2, 3}}), Error);
  EXPECT_THROW(Tableau(3, {{1, 2}}), Error);
  EXPECT_THROW(Tableau(2, {{1, 2}, {}}), Error);
  EXPECT_EQ(Tableau(3, {{2}, {1}, {3}}), Tableau::singletons(3));
}

TEST(Tableau, EnumerationMatchesBellNumbers) {
  const std::size_t bell[] = {1, 1, 2, 5, 15, 52, 203, 877};
  for (int n = 0; n <= 7; ++n) {
    const auto all = all_tableaux(n);
    EXPECT_EQ(all.size(), bell[n]);
    std::set<std::vector<Block>> distinct;
    for (const auto& t : all) distinct.insert(t.blocks());
    EXPECT_EQ(distinct.size(), all.size());
  }
}

TEST(ReverseRefines, Examples) {
  const Tableau t(3, {{1, 2}, {3}});
  const auto id = reverse_refines(t, t);
  ASSERT_TRUE(id);
  EXPECT_EQ(*id, identity_arrow(t));
  const auto full = reverse_refines(Tableau::singletons(3), Tableau::single_block(3));
  ASSERT_TRUE(full);
  EXPECT_EQ(full->block_map, (std::vector<std::size_t>{0, 0, 0}));
  EXPECT_FALSE(reverse_refines(t, Tableau(3, {{1, 3}, {2}})));
}

TEST(ReverseRefines, ArrowInvariants) {
  for (int n = 1; n <= 5; ++n) {
    const auto tabs = all_tableaux(n);
    for (const auto& a : tabs) {
      for (const auto& b : tabs) {
        const auto f = reverse_refines(a, b);
        // Independent test: every pair of symbols sharing an a-block shares a b-block.
        bool expect = true;
        for (const auto& blk : a.blocks()) {
          for (int s : blk) expect = expect && b.block_of(s) == b.block_of(blk.front());
        }
        ASSERT_EQ(static_cast<bool>(f), expect);
        if (!f) continue;
        std::vector<Block> unions(b.block_count());
        for (std::size_t j = 0; j < a.block_count(); ++j) {
          auto& u = unions[f->block_map[j]];
          u.insert(u.end(), a.blocks()[j].begin(), a.blocks()[j].end());
        }
        for (std::size_t k = 0; k < b.block_count(); ++k) {
          std::sort(unions[k].begin(), unions[k].end());
          EXPECT_EQ(unions[k], b.blocks()[k]);
        }
      }
    }
  }
}

TEST(ReverseRefines, ImpliesDominanceExhaustiveUpTo6) {
  std::size_t arrows = 0;
  for (int n = 1; n <= 6; ++n) {
    const auto tabs = all_tableaux(n);
    for (const auto& a : tabs) {
      for (const auto& b : tabs) {
        if (reverse_refines(a, b)) {
          EXPECT_TRUE(dominance_leq(a.shape(), b.shape()));
          ++arrows;
        }
      }
    }
  }
  EXPECT_GT(arrows, 0u);
}

TEST(Compose, Examples) {
  const Tableau mid(3, {{1, 2}, {3}});
  const auto f = *reverse_refines(Tableau::singletons(3), mid);
  const auto g = *reverse_refines(mid, Tableau::single_block(3));
  EXPECT_EQ(compose_refinements(f, g), *reverse_refines(Tableau::singletons(3), Tableau::single_block(3)));
  EXPECT_EQ(compose_refinements(identity_arrow(f.fine), f), f);
  EXPECT_EQ(compose_refinements(f, identity_arrow(f.coarse)), f);
  try {
    compose_refinements(g, f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ChainMismatch);
  }
}

TEST(Compose, AssociativeOnAChainInSix) {
  const Tableau a = Tableau::singletons(6);
  const Tableau b(6, {{1, 2}, {3, 4}, {5}, {6}});
  const Tableau c(6, {{1, 2, 3, 4}, {5, 6}});
  const Tableau d = Tableau::single_block(6);
  const auto f = *reverse_refines(a, b);
  const auto g = *reverse_refines(b, c);
  const auto h = *reverse_refines(c, d);
  EXPECT_EQ(compose_refinements(compose_refinements(f, g), h), compose_refinements(f, compose_refinements(g, h)));
}

TEST(Permutations, DimensionPreservingGroupSize) {
  EXPECT_EQ(dimension_preserving_permutations({1, 1, 1}).size(), 6u);
  EXPECT_EQ(dimension_preserving_permutations({2, 1}).size(), 1u);
  EXPECT_EQ(dimension_preserving_permutations({2, 2, 1, 1}).size(), 4u);
}

TEST(Lift, SingletonsToPairsLiftsBlockSwaps) {
  // {{1},{2},{3},{4}} ⪯ {{1,2},{3,4}}: swapping the coarse blocks sends
  // symbols 1,2 to 3,4 in order.
  const auto f = *reverse_refines(Tableau::singletons(4), Tableau(4, {{1, 2}, {3, 4}}));
  const auto lift = lift_coarse_permutation(f, {1, 0});
  ASSERT_TRUE(lift);
  EXPECT_EQ(*lift, (Permutation{2, 3, 0, 1}));
  EXPECT_EQ(*lift_coarse_permutation(f, {0, 1}), (Permutation{0, 1, 2, 3}));
}

TEST(Lift, PartialWhenFineBlocksDoNotCorrespond) {
  const auto f = *reverse_refines(Tableau(4, {{1, 2}, {3}, {4}}), Tableau(4, {{1, 2}, {3, 4}}));
  EXPECT_FALSE(lift_coarse_permutation(f, {1, 0}));
  EXPECT_THROW(lift_coarse_permutation(f, {0}), Error);
  const auto g = *reverse_refines(Tableau::singletons(3), Tableau(3, {{1, 2}, {3}}));
  try {
    lift_coarse_permutation(g, {1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IllegalPermutation);
  }
}

TEST(Nontrivial, Classification) {
  EXPECT_FALSE(is_nontrivial(Tableau::singletons(3)));
  EXPECT_FALSE(is_nontrivial(Tableau::single_block(3)));
  EXPECT_TRUE(is_nontrivial(Tableau(3, {{1, 3}, {2}})));
}

TEST(Format, Strings) {
  EXPECT_EQ(to_string(P({3, 1})), "(3,1)");
  EXPECT_EQ(to_string(Tableau(3, {{3}, {1, 2}})), "{{1,2},{3}}");
}

}  // namespace
