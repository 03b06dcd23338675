#include <gtest/gtest.h>

#include "parhom/root_weyl.hpp"
#include "test_support.hpp"

using namespace parhom;
namespace pt = parhom::testing;

namespace {

RootSystem roots(const std::string& type) { return RootSystem(parse_diagram_spec(type)); }

// Small groups for exhaustive checks.
const std::vector<std::string> kRankAtMost3{"A1", "A2", "A3", "B2", "B3", "C3", "G2", "A1xA1", "A1xA2", "A1xB2",
                                            "A1xA1xA1"};

} // namespace

TEST(GenerateRoots, A2) {
  const auto rs = roots("A2");
  ASSERT_EQ(rs.num_positive(), 3);
  EXPECT_EQ(rs.root(0), (Coords{1, 0}));
  EXPECT_EQ(rs.root(1), (Coords{0, 1}));
  EXPECT_EQ(rs.root(2), (Coords{1, 1}));
}

TEST(GenerateRoots, G2HighestRoot) {
  const auto rs = roots("G2");
  ASSERT_EQ(rs.num_positive(), 6);
  EXPECT_EQ(rs.root(5), (Coords{3, 2}));
}

TEST(GenerateRoots, B3Count) { EXPECT_EQ(roots("B3").num_positive(), 9); }

TEST(GenerateRoots, ClosedFormCountsThroughRank8) {
  for (const auto& name : pt::simple_types(8)) {
    const auto d = parse_diagram_spec(name);
    EXPECT_EQ(RootSystem(d).num_positive(), pt::positive_root_count(d.factors()[0])) << name;
  }
  EXPECT_EQ(roots("A2xG2").num_positive(), 3 + 6);
}

TEST(GenerateRoots, SignAndConnectedSupport) {
  for (const auto& name : pt::all_diagrams(5)) {
    const auto rs = roots(name);
    const auto& d = rs.diagram();
    for (int r = 0; r < rs.size(); ++r) {
      const auto& c = rs.root(r);
      const bool nonneg = std::all_of(c.begin(), c.end(), [](int x) { return x >= 0; });
      const bool nonpos = std::all_of(c.begin(), c.end(), [](int x) { return x <= 0; });
      EXPECT_TRUE(nonneg != nonpos) << name;
      EXPECT_EQ(rs.is_positive(r), nonneg);
      EXPECT_EQ(rs.root(rs.negate(r)), [&] {
        Coords n = c;
        for (auto& x : n) x = -x;
        return n;
      }());
      std::vector<int> support;
      for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i]) support.push_back(static_cast<int>(i) + 1);
      const auto comps = induced_subdiagram(d, Marking(support));
      EXPECT_EQ(comps.size(), 1u) << name << " root " << r;
    }
  }
}

TEST(GenerateRoots, OrderIsGradedAndDeterministic) {
  const auto a = roots("E6");
  const auto b = roots("E6");
  for (int r = 0; r < a.num_positive(); ++r) {
    EXPECT_EQ(a.root(r), b.root(r));
    if (r > 0) {
      EXPECT_LE(a.height(r - 1), a.height(r));
    }
  }
  for (int i = 0; i < a.rank(); ++i) {
    EXPECT_EQ(a.height(i), 1);
    EXPECT_EQ(a.root(i)[static_cast<std::size_t>(i)], 1);
  }
}

TEST(Reflections, SimpleReflectionProperties) {
  for (const auto& name : pt::all_diagrams(5)) {
    const auto rs = roots(name);
    for (int i = 0; i < rs.rank(); ++i) {
      EXPECT_EQ(rs.reflect(i, i), rs.negate(i)) << name;
      for (int r = 0; r < rs.size(); ++r) {
        EXPECT_EQ(rs.reflect(i, rs.reflect(i, r)), r) << name;
        if (rs.is_positive(r) && r != i) {
          EXPECT_TRUE(rs.is_positive(rs.reflect(i, r))) << name;
        }
      }
    }
  }
}

TEST(EnumerateWeyl, Examples) {
  const auto a3 = roots("A3");
  EXPECT_EQ(enumerate_weyl(a3, Marking{1, 2, 3}).size(), 24u);
  EXPECT_EQ(enumerate_weyl(a3, Marking{1, 3}).size(), 4u);
  EXPECT_EQ(enumerate_weyl(a3, Marking{}).size(), 1u);
  EXPECT_EQ(enumerate_weyl(roots("F4"), Marking{1, 2, 3, 4}).size(), 1152u);
  const auto sub = enumerate_weyl(a3, Marking{1, 3});
  ASSERT_TRUE(sub.generators_marking);
  EXPECT_EQ(*sub.generators_marking, (Marking{1, 3}));
}

TEST(EnumerateWeyl, ClassicalOrdersThroughRank4) {
  for (const auto& name : pt::simple_types(4)) {
    const auto rs = roots(name);
    EXPECT_EQ(enumerate_weyl(rs, rs.diagram().all_nodes()).size(),
              classical_weyl_order(rs.diagram().factors()[0]))
        << name;
  }
  const auto prod = roots("A2xB2");
  EXPECT_EQ(enumerate_weyl(prod, prod.diagram().all_nodes()).size(), 6u * 8u);
}

TEST(EnumerateWeyl, SubgroupIsClosed) {
  const auto rs = roots("B3");
  const auto sub = enumerate_weyl(rs, Marking{2, 3});
  EXPECT_EQ(sub.size(), 8u);
  for (const auto& w : sub.elements) {
    for (int node : Marking{2, 3}) EXPECT_TRUE(sub.contains(left_reflect(rs, w, node - 1)));
  }
}

TEST(EnumerateWeyl, GuardLimit) {
  const auto e7 = roots("E7");
  try {
    enumerate_weyl(e7, e7.diagram().all_nodes());
    FAIL();
  } catch (const GuardLimitError& e) {
    EXPECT_EQ(e.estimated(), 2903040u);
    EXPECT_EQ(e.limit(), kDefaultWeylLimit);
  }
  EXPECT_THROW(enumerate_weyl(roots("A3"), Marking{1, 2, 3}, 10), GuardLimitError);
}

TEST(Length, InversionCountEqualsWordLength) {
  for (const auto& name : kRankAtMost3) {
    const auto rs = roots(name);
    const auto depth = pt::bfs_word_lengths(rs, rs.diagram().all_nodes());
    for (const auto& [key, d] : depth) EXPECT_EQ(length(rs, key), d) << name;
  }
}

TEST(LongestElement, Examples) {
  const auto a1 = roots("A1");
  const auto w0 = longest_element(a1);
  EXPECT_EQ(w0.length, 1);
  EXPECT_EQ(w0.key, left_reflect(a1, identity_key(a1), 0));

  EXPECT_EQ(longest_element(roots("A3")).length, 6);

  const auto b3 = roots("B3");
  const auto w0b = longest_element(b3);
  EXPECT_EQ(w0b.length, 9);
  for (int i = 0; i < b3.rank(); ++i) EXPECT_EQ(w0b.key[static_cast<std::size_t>(i)], b3.negate(i));
}

TEST(LongestElement, IsTheUniqueMaximumAndAnInvolution) {
  for (const auto& name : kRankAtMost3) {
    const auto rs = roots(name);
    const auto w0 = longest_element(rs);
    EXPECT_EQ(w0.length, rs.num_positive());
    EXPECT_EQ(pt::multiply(rs, w0.key, w0.key), identity_key(rs)) << name;
    const auto depth = pt::bfs_word_lengths(rs, rs.diagram().all_nodes());
    int max_len = 0, count_max = 0;
    for (const auto& [key, d] : depth) {
      if (d > max_len) {
        max_len = d;
        count_max = 0;
      }
      if (d == max_len) ++count_max;
    }
    EXPECT_EQ(count_max, 1);
    EXPECT_EQ(depth.at(w0.key), max_len);
  }
}

TEST(LongestElement, ConjugationPreservesLength) {
  for (const auto& name : kRankAtMost3) {
    const auto rs = roots(name);
    const auto w0 = longest_element(rs);
    const auto w0_action = full_action(rs, w0.key);
    for (const auto& w : enumerate_weyl(rs, rs.diagram().all_nodes()).elements) {
      const auto conj = compose(full_action(rs, compose(w0_action, w)), w0.key);
      EXPECT_EQ(length(rs, conj), length(rs, w)) << name;
    }
  }
}

TEST(InvolutionViaW0, Examples) {
  EXPECT_EQ(involution_via_w0(roots("A3")), (NodePermutation{3, 2, 1}));
  EXPECT_EQ(involution_via_w0(roots("E6")), (NodePermutation{6, 2, 5, 4, 3, 1}));
  EXPECT_EQ(involution_via_w0(roots("C3")), (NodePermutation{1, 2, 3}));
  EXPECT_EQ(involution_via_w0(roots("D5")), (NodePermutation{1, 2, 3, 5, 4}));
}

TEST(MinCosetLength, Examples) {
  const auto a3 = roots("A3");
  EXPECT_EQ(min_coset_length(identity_key(a3), Marking{1, 3}, a3), 0);
  EXPECT_EQ(min_coset_length(longest_element(a3), Marking{1, 3}, a3), 4);
  const auto a2 = roots("A2");
  const auto s1s2 = left_reflect(a2, left_reflect(a2, identity_key(a2), 1), 0);
  EXPECT_EQ(length(a2, s1s2), 2);
  EXPECT_EQ(min_coset_length(s1s2, Marking{}, a2), 2);
}

TEST(MinCosetLength, MatchesBruteForceOverTheCoset) {
  for (const auto& name : kRankAtMost3) {
    const auto rs = roots(name);
    const auto all = rs.diagram().all_nodes();
    const auto W = enumerate_weyl(rs, all);
    for (const auto& I : std::vector<Marking>{{}, {1}, {2}, {1, 2}, all}) {
      if (!I.subset_of(all)) continue;
      const auto WI = enumerate_weyl(rs, I);
      for (const auto& w : W.elements) {
        const auto action = full_action(rs, w);
        int brute = 1 << 20;
        for (const auto& v : WI.elements) brute = std::min(brute, length(rs, compose(action, v)));
        const int computed = min_coset_length(w, I, rs);
        EXPECT_EQ(computed, brute) << name << " I=" << I.to_string();
        EXPECT_LE(computed, length(rs, w));
        bool is_min_rep = true;
        for (int i : I) is_min_rep = is_min_rep && rs.is_positive(w[static_cast<std::size_t>(i - 1)]);
        EXPECT_EQ(computed == length(rs, w), is_min_rep);
        // Inversions outside the Levi root subsystem count the same thing.
        const int outside = count_inversions(rs, w, [&](int r) {
          for (std::size_t k = 0; k < rs.root(r).size(); ++k)
            if (rs.root(r)[k] != 0 && !I.contains(static_cast<int>(k) + 1)) return true;
          return false;
        });
        EXPECT_EQ(computed, outside);
      }
    }
  }
}

TEST(ProductSet, Examples) {
  const auto a3 = roots("A3");
  const auto w13 = enumerate_weyl(a3, Marking{1, 3});
  const auto w23 = enumerate_weyl(a3, Marking{2, 3});
  const auto e = enumerate_weyl(a3, Marking{});
  EXPECT_EQ(product_set(a3, w13, e).elements, w13.elements);
  EXPECT_EQ(product_set(a3, w13, w23).size(), 12u);
  const auto w3 = enumerate_weyl(a3, Marking{3});
  EXPECT_EQ(product_set(a3, w3, w23).elements, w23.elements);
  EXPECT_EQ(product_set(a3, w23, w3).elements, w23.elements);
}

TEST(ProductSet, ShardingDoesNotChangeTheResult) {
  const auto rs = roots("B3");
  const auto a = enumerate_weyl(rs, Marking{1, 2});
  const auto b = enumerate_weyl(rs, Marking{2, 3});
  const auto one = product_set(rs, a, b, kDefaultWeylLimit, 1);
  for (unsigned shards : {2u, 3u, 8u}) EXPECT_EQ(product_set(rs, a, b, kDefaultWeylLimit, shards).elements, one.elements);
}

TEST(ProductSet, GuardLimit) {
  const auto rs = roots("A3");
  const auto a = enumerate_weyl(rs, Marking{1, 2});
  const auto b = enumerate_weyl(rs, Marking{2, 3});
  EXPECT_THROW(product_set(rs, a, b, 10), GuardLimitError);
}

TEST(CloseLeft, EqualsExplicitProduct) {
  const auto rs = roots("C3");
  const auto s = enumerate_weyl(rs, Marking{1, 3});
  KeySet closed = s.elements;
  close_left(rs, closed, Marking{2, 3}, kDefaultWeylLimit);
  EXPECT_EQ(closed, product_set(rs, enumerate_weyl(rs, Marking{2, 3}), s).elements);
}
