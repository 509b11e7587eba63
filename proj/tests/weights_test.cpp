#include "glnp/weights.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace glnp;

namespace {

std::mt19937_64 rng(0x5eed02);

u64 rnd(u64 lo, u64 hi) { return std::uniform_int_distribution<u64>(lo, hi)(rng); }

std::vector<int> random_k_generic(int n, int k, u32 p) {
  for (int tries = 0; tries < 100000; ++tries) {
    std::vector<int> a(n);
    a[0] = static_cast<int>(rnd(0, 2));
    for (int i = 1; i < n; ++i) a[i] = a[i - 1] + static_cast<int>(rnd(k + 1, k + 3));
    if (a[n - 1] - a[0] < static_cast<int>(p) - k) return a;
  }
  throw std::runtime_error("no k-generic tuple found");
}

std::multiset<int> entry_multiset(const Weight& w) {
  return std::multiset<int>(w.d.begin(), w.d.end());
}

}  // namespace

TEST(Genericity, LowestAlcove) {
  EXPECT_TRUE(is_k_generic_lowest({0, 4, 8}, 3, 13));
  EXPECT_FALSE(is_k_generic_lowest({0, 4, 8}, 4, 13));
  EXPECT_TRUE(is_k_generic_lowest({0, 5, 10, 15}, 4, 23));
  // monotone in k
  for (int it = 0; it < 50; ++it) {
    auto a = random_k_generic(3, static_cast<int>(rnd(3, 6)), 31);
    for (int k = 6; k >= 1; --k)
      if (is_k_generic_lowest(a, k + 1, 31)) {
        EXPECT_TRUE(is_k_generic_lowest(a, k, 31));
      }
  }
}

TEST(Genericity, CtupleFlavors) {
  EXPECT_TRUE(is_generic({0, 4, 8}, 13));
  EXPECT_FALSE(is_strongly_generic({0, 4, 8}, 13));  // spread 8 is not < 8
  EXPECT_TRUE(is_strongly_generic({0, 4, 8}, 17));
  EXPECT_FALSE(is_generic({0, 2, 4}, 13));
}

TEST(Genericity, GeneralWeights) {
  EXPECT_FALSE(is_k_generic(Weight({10, 5, 0}), 4, 13));  // 10-0 = -3 mod 13
  EXPECT_TRUE(is_k_generic(Weight({10, 5, 0}), 2, 13));
  // a lowest-alcove generic descending tuple is generic in the general sense
  for (int it = 0; it < 100; ++it) {
    int k = static_cast<int>(rnd(3, 6));
    auto a = random_k_generic(4, k, 37);
    EXPECT_TRUE(is_k_generic(Weight(reversed(a)), k, 37));
  }
  // invariant under entry permutation
  Weight w({3, 9, 17});
  Weight wp({17, 3, 9});
  for (int k = 1; k < 6; ++k) EXPECT_EQ(is_k_generic(w, k, 23), is_k_generic(wp, k, 23));
}

TEST(Characters, MuStarAndMu1) {
  EXPECT_EQ(mu_star({0, 4, 8}), Weight({7, 4, 1}));
  auto [m1, m1p] = mu1_pair({0, 4, 8});
  EXPECT_EQ(m1, Weight({4, 8, 0}));
  EXPECT_EQ(m1p, Weight({8, 0, 4}));
  auto [m14, m14p] = mu1_pair({0, 5, 10, 15});
  EXPECT_EQ(m14, Weight({5, 10, 15, 0}));
  EXPECT_EQ(m14p, Weight({15, 0, 5, 10}));
  // mu* and the a-tuple have equal entry sums
  auto ms = mu_star({0, 4, 8});
  EXPECT_EQ(std::accumulate(ms.d.begin(), ms.d.end(), 0), 12);
}

TEST(Characters, Mu0W0Lift) {
  auto lift = mu0_w0_lift({0, 4, 8}, 13);
  EXPECT_EQ(lift, Weight({12, 4, -4}));
  EXPECT_EQ(reduce_weight(lift, 13), TorusCharacter(13, {0, 4, 8}));
  // p-restricted whenever the tuple is n-generic
  for (int it = 0; it < 50; ++it) {
    auto a = random_k_generic(4, 4, 29);
    auto w = mu0_w0_lift(a, 29);
    for (int i = 0; i + 1 < w.n(); ++i) {
      EXPECT_GE(w.d[i] - w.d[i + 1], 0);
      EXPECT_LE(w.d[i] - w.d[i + 1], 28);
    }
  }
}

TEST(Characters, SpecialCaseTables) {
  // display b = (9,6,3,0), (i1,j1) = (0,3)
  auto sc = special_characters({0, 3, 6, 9}, 0, 3);
  EXPECT_EQ(sc.mu_box, Weight({9, 6, 3, 0}));
  EXPECT_EQ(sc.mu_ij, Weight({3, 6, 11, -2}));
  EXPECT_EQ(sc.mu_ij_prime, Weight({11, -2, 3, 6}));
  EXPECT_EQ(sc.mu_box_ij, Weight({-2, 6, 3, 11}));
  EXPECT_THROW(special_characters({0, 3, 6, 9}, 0, 1), usage_error);
  EXPECT_THROW(special_characters({0, 3, 6, 9}, 2, 3), usage_error);
}

TEST(Characters, SpecialPermutationInvariant) {
  for (int n : {4, 5, 6, 7})
    for (int it = 0; it < 20; ++it) {
      auto b = random_k_generic(n, n, 97);
      for (int i1 = 0; i1 <= n - 1; ++i1)
        for (int j1 = i1 + 2; j1 <= n - 1; ++j1) {
          auto sc = special_characters(b, i1, j1);
          auto ms = entry_multiset(sc.mu_ij);
          EXPECT_EQ(ms, entry_multiset(sc.mu_ij_prime));
          EXPECT_EQ(ms, entry_multiset(sc.mu_box_ij));
        }
    }
}

TEST(Characters, SpecialGenericityDescent) {
  // 3n-generic mu_box forces 2n-generic mu_box_ij for n in {3,4}; from n = 5
  // on the swapped pair can land exactly on the 2n boundary at extremal
  // spread, so the implication needs spread < p - 4n + 4 there
  const std::pair<int, u32> cases[] = {{3, 31}, {4, 53}, {5, 83}};
  for (auto [n, p] : cases)
    for (int it = 0; it < 50; ++it) {
      auto b = random_k_generic(n, 3 * n, p);
      if (n >= 5 && b[n - 1] - b[0] >= static_cast<int>(p) - 4 * n + 4) continue;
      for (int i1 = 0; i1 <= n - 1; ++i1)
        for (int j1 = i1 + 2; j1 <= n - 1; ++j1) {
          auto sc = special_characters(b, i1, j1);
          EXPECT_TRUE(is_k_generic(sc.mu_box_ij, 2 * n, p))
              << "n=" << n << " i1=" << i1 << " j1=" << j1;
        }
    }
  // the n = 5 boundary case: full-spread tuple, swapped difference = p - 2n
  std::vector<int> b{0, 16, 32, 48, 67};
  EXPECT_TRUE(is_k_generic_lowest(b, 15, 83));
  EXPECT_FALSE(is_k_generic(special_characters(b, 0, 4).mu_box_ij, 10, 83));
}

TEST(RProfiles, PinnedValues) {
  auto base4 = r_profile_base(4);
  EXPECT_EQ(base4.r, (std::vector<int>{2, 1, 2, 1}));  // display (1,2,1,2)
  auto base3 = r_profile_base(3);
  EXPECT_EQ(base3.r, (std::vector<int>{1, 1, 1}));
  auto r31 = r_profile(4, 3, 1);
  EXPECT_EQ(r31.r, (std::vector<int>{0, 2, 2, 2}));  // display (2,2,2,0)
  EXPECT_THROW(r_profile(4, 1, 0), usage_error);
  EXPECT_THROW(r_profile(4, 4, 1), usage_error);
}

TEST(RProfiles, SumAndReduction) {
  for (int n = 3; n <= 8; ++n) {
    EXPECT_EQ(r_profile_base(n).sum(), n * (n - 1) / 2);
    // (i0,j0) = (n-1,0) reproduces the base profile
    EXPECT_EQ(r_profile(n, n - 1, 0).r, r_profile_base(n).r);
    for (int j0 = 0; j0 <= n - 1; ++j0)
      for (int i0 = j0 + 2; i0 <= n - 1; ++i0) {
        auto r = r_profile(n, i0, j0);
        EXPECT_EQ(r.sum(), n * (n - 1) / 2);
        for (int v : r.r) {
          EXPECT_GE(v, 0);
          EXPECT_LE(v, n - 1);
        }
        // r^{i0,j0}_{j0+i} = j0 + r^{(0)}_i at size i0-j0+1
        auto base = r_profile_base(i0 - j0 + 1);
        for (int i = 0; i <= i0 - j0; ++i) EXPECT_EQ(r.r[j0 + i], j0 + base.r[i]);
      }
  }
}

TEST(RProfiles, GaloisTypeExponents) {
  // display c = (8,4,0), base profile, p = 13: display k = (9,4,11)
  auto k = galois_type_exponents({0, 4, 8}, r_profile_base(3), 13);
  EXPECT_EQ(k, TorusCharacter(13, {11, 4, 9}));
  // r_i = i kills a zero c-tuple
  RProfile diag{{0, 1, 2, 3}};
  auto k0 = galois_type_exponents({0, 0, 0, 0}, diag, 13);
  EXPECT_EQ(k0, TorusCharacter(13, {0, 0, 0, 0}));
  EXPECT_THROW(galois_type_exponents({0, 4}, r_profile_base(3), 13), usage_error);
}

TEST(Tuples, BFromC) {
  EXPECT_EQ(b_from_c({0, 4, 8}), (std::vector<int>{-8, -4, 0}));
  for (int it = 0; it < 50; ++it) {
    auto c = random_k_generic(4, 5, 53);
    auto b = b_from_c(c);
    for (size_t i = 1; i < b.size(); ++i) EXPECT_GT(b[i], b[i - 1]);
    for (int k = 1; k <= 6; ++k)
      EXPECT_EQ(is_k_generic_lowest(b, k, 53), is_k_generic_lowest(c, k, 53));
  }
}

TEST(Tuples, EtaAndReduce) {
  EXPECT_EQ(eta(4), Weight({3, 2, 1, 0}));
  EXPECT_EQ(reduce_weight(Weight({15, 0, -1}), 13), TorusCharacter(13, {3, 0, 11}));
}
