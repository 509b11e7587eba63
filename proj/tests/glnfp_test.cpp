#include <gtest/gtest.h>

#include <map>
#include <random>
#include <unordered_map>

#include "glnp/glnfp.hpp"

using namespace glnp;

namespace {

std::mt19937_64 rng(0x5eed03);

u32 rnd(u32 p) { return static_cast<u32>(rng() % p); }

MatFp random_invertible(int n, u32 p) {
  while (true) {
    MatFp m(n, p);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) m(i, j) = rnd(p);
    if (m.det() != 0) return m;
  }
}

std::vector<Perm> all_perms(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i + 1;
  std::vector<Perm> out;
  do out.push_back(Perm(v));
  while (std::next_permutation(v.begin(), v.end()));
  return out;
}

// cofactor expansion along the first row, independent of MatFp::det
u32 cofactor_det(const MatFp& A) {
  int n = A.n;
  u32 p = A.p;
  if (n == 1) return A(1, 1);
  u64 acc = 0;
  for (int j = 1; j <= n; ++j) {
    if (!A(1, j)) continue;
    MatFp sub(n - 1, p);
    for (int r = 2; r <= n; ++r) {
      int cc = 1;
      for (int c = 1; c <= n; ++c) {
        if (c == j) continue;
        sub(r - 1, cc++) = A(r, c);
      }
    }
    u64 t = static_cast<u64>(A(1, j)) * cofactor_det(sub) % p;
    acc = (acc + (j % 2 ? t : p - t)) % p;
  }
  return static_cast<u32>(acc % p);
}

}  // namespace

TEST(Perm, Basics) {
  auto w0 = Perm::longest(4);
  EXPECT_EQ(w0(1), 4);
  EXPECT_EQ(w0(4), 1);
  EXPECT_EQ(w0.length(), 6);
  EXPECT_EQ(w0 * w0, Perm::identity(4));

  auto s1 = Perm::simple(3, 1), s2 = Perm::simple(3, 2);
  auto w = s1 * s2;  // 1->2, 2->3, 3->1
  EXPECT_EQ(w(1), 2);
  EXPECT_EQ(w(2), 3);
  EXPECT_EQ(w(3), 1);
  EXPECT_EQ(w.length(), 2);
  EXPECT_EQ(w * w.inverse(), Perm::identity(3));
  EXPECT_EQ(Perm::simple(3, 1) * Perm::simple(3, 2) * Perm::simple(3, 1),
            Perm::longest(3));

  // matrix model respects composition
  u32 p = 7;
  for (auto& a : all_perms(3))
    for (auto& b : all_perms(3))
      EXPECT_EQ(MatFp::from_permutation(a, p) * MatFp::from_permutation(b, p),
                MatFp::from_permutation(a * b, p));
}

TEST(Perm, PhiPlusSets) {
  EXPECT_TRUE(phi_plus_w(Perm::identity(3)).empty());
  EXPECT_EQ(phi_plus_w(Perm::longest(3)), positive_roots(3));
  EXPECT_EQ(phi_plus_w(Perm::longest(5)), positive_roots(5));

  auto s1 = Perm::simple(3, 1);
  EXPECT_EQ(phi_plus_w(s1), (std::vector<Root>{{1, 2}}));

  auto w = s1 * Perm::simple(3, 2);
  EXPECT_EQ(phi_plus_w(w), (std::vector<Root>{{1, 2}, {1, 3}}));

  for (auto& v : all_perms(4)) {
    EXPECT_EQ(static_cast<int>(phi_plus_w(v).size()), v.length());
    EXPECT_EQ(phi_plus_w_right(v), phi_plus_w(v.inverse()));
  }
}

TEST(MatFp, RootSubgroups) {
  u32 p = 13;
  EXPECT_EQ(u_alpha(3, p, {1, 2}, 0), MatFp::identity(3, p));
  EXPECT_THROW(u_alpha(3, p, {2, 2}, 1), usage_error);
  EXPECT_THROW(u_alpha(3, p, {3, 1}, 1), usage_error);

  for (auto alpha : positive_roots(3))
    for (i64 s = 0; s < 13; ++s)
      for (i64 t : {0, 1, 5, 12})
        EXPECT_EQ(u_alpha(3, p, alpha, s) * u_alpha(3, p, alpha, t),
                  u_alpha(3, p, alpha, s + t));

  // torus conjugation: x u_alpha(t) x^{-1} = u_alpha(alpha(x) t)
  std::vector<u32> xd = {3, 5, 11};
  auto x = MatFp::diagonal(xd, p);
  for (auto a : positive_roots(3))
    for (i64 t : {1, 2, 7}) {
      u64 scale = xd[a.i - 1] * invmod(xd[a.j - 1], p) % p;
      EXPECT_EQ(x * u_alpha(3, p, a, t) * x.inverse(),
                u_alpha(3, p, a, static_cast<i64>(scale * t % p)));
    }
}

TEST(MatFp, InverseAndDet) {
  for (u32 p : {5u, 13u})
    for (int n : {2, 3, 5})
      for (int trial = 0; trial < 20; ++trial) {
        auto m = random_invertible(n, p);
        EXPECT_EQ(m * m.inverse(), MatFp::identity(n, p));
        EXPECT_EQ(m.det(), cofactor_det(m));
        auto m2 = random_invertible(n, p);
        EXPECT_EQ((m * m2).det(), m.det() * m2.det() % p);
      }
  MatFp z(3, 5);
  EXPECT_EQ(z.det(), 0u);
  EXPECT_THROW(z.inverse(), value_error);
}

TEST(MatFp, UnipotentEnumeration) {
  u32 p = 3;
  for (auto& w : all_perms(3)) {
    auto S = phi_plus_w(w);
    std::vector<MatFp> seen;
    for_each_unipotent(3, p, S, [&](const MatFp& m) {
      EXPECT_TRUE(m.is_upper_unipotent());
      for (auto a : positive_roots(3)) {
        bool in_S = std::find(S.begin(), S.end(), a) != S.end();
        if (!in_S) EXPECT_EQ(m(a.i, a.j), 0u);
      }
      seen.push_back(m);
    });
    EXPECT_EQ(seen.size(), static_cast<size_t>(ppow(p, S.size())));
    for (size_t x = 0; x < seen.size(); ++x)
      for (size_t y = x + 1; y < seen.size(); ++y)
        EXPECT_FALSE(seen[x] == seen[y]);
    // closure: the enumerated set is a subgroup
    if (S.size() == 2) {
      auto prod = seen[1] * seen[seen.size() - 1];
      bool found = false;
      for (auto& m : seen) found |= (m == prod);
      EXPECT_TRUE(found);
    }
  }
}

TEST(Bruhat, PinnedForms) {
  u32 p = 7;
  auto id = MatFp::identity(3, p);
  auto f = bruhat_normal_form(id);
  EXPECT_EQ(f.b, id);
  EXPECT_EQ(f.w, Perm::identity(3));
  EXPECT_EQ(f.u, id);

  auto w0m = MatFp::from_permutation(Perm::longest(3), p);
  auto g = bruhat_normal_form(w0m);
  EXPECT_EQ(g.b, id);
  EXPECT_EQ(g.w, Perm::longest(3));
  EXPECT_EQ(g.u, id);

  MatFp sing(3, p);
  sing(1, 1) = 1;
  EXPECT_THROW(bruhat_normal_form(sing), value_error);
}

TEST(Bruhat, AgainstExhaustiveOracle) {
  for (auto [n, p] : std::vector<std::pair<int, u32>>{{3, 7}, {4, 5}}) {
    auto perms = all_perms(n);
    for (int trial = 0; trial < 200; ++trial) {
      auto g = random_invertible(n, p);
      auto f = bruhat_normal_form(g);
      // recomposition and support
      EXPECT_EQ(f.b * MatFp::from_permutation(f.w, p) * f.u, g);
      EXPECT_TRUE(f.b.is_upper_triangular());
      auto R = phi_plus_w(f.w.inverse());
      for (auto a : positive_roots(n))
        if (std::find(R.begin(), R.end(), a) == R.end())
          EXPECT_EQ(f.u(a.i, a.j), a.i == a.j ? 1u : 0u);
      // unique (w, u) with g u^{-1} w^{-1} upper triangular
      int hits = 0;
      for (auto& w : perms) {
        auto wm = MatFp::from_permutation(w, p);
        for_each_unipotent(n, p, phi_plus_w(w.inverse()), [&](const MatFp& u) {
          auto t = g * (wm * u).inverse();
          if (t.is_upper_triangular()) {
            ++hits;
            EXPECT_EQ(w, f.w);
            EXPECT_EQ(u, f.u);
          }
        });
      }
      EXPECT_EQ(hits, 1);
    }
  }
}

TEST(Bruhat, CellCountingGL3F5) {
  const int n = 3;
  const u32 p = 5;
  // every invertible matrix lands in exactly one cell; each cell holds |B|
  std::unordered_map<u64, u32> counts;
  MatFp m(n, p);
  u64 total = 0;
  std::vector<u32> digits(9, 0);
  while (true) {
    for (int k = 0; k < 9; ++k) m.a[k] = digits[k];
    if (m.det() != 0) {
      ++total;
      auto f = bruhat_normal_form(m);
      u64 key = 0;
      for (int j = 1; j <= n; ++j) key = key * 4 + (f.w(j) - 1);
      for (auto a : positive_roots(n)) key = key * p + f.u(a.i, a.j);
      ++counts[key];
    }
    int pos = 0;
    while (pos < 9 && ++digits[pos] == p) digits[pos++] = 0;
    if (pos == 9) break;
  }
  u64 cells = 0;
  for (auto& w : all_perms(n)) cells += ppow(p, phi_plus_w(w).size());
  EXPECT_EQ(cells, 1 + 2 * p + 2 * p * p + static_cast<u64>(p) * p * p);
  EXPECT_EQ(counts.size(), cells);
  u64 borel = ppow(p - 1, n) * ppow(p, n * (n - 1) / 2);
  for (auto& [key, c] : counts) EXPECT_EQ(c, borel);
  EXPECT_EQ(total, cells * borel);
}

TEST(Minors, PinnedAndOracle) {
  u32 p = 13;
  auto id = MatFp::identity(3, p);
  auto md = minor_dets(id);
  EXPECT_EQ(md.D[0], 0u);  // bottom-left entry
  EXPECT_EQ(md.D[1], 0u);
  EXPECT_EQ(md.D[2], (p - 1) % p);  // eps_3 det(1) = -1

  for (int n : {3, 4, 5}) {
    auto w0 = MatFp::from_permutation(Perm::longest(n), p);
    auto w = minor_dets(w0);
    for (int i = 1; i <= n; ++i) EXPECT_EQ(w.D[i - 1], 1u) << "i=" << i;
  }

  // signed-minor definitions against an independent determinant
  for (int n : {3, 4, 5})
    for (int trial = 0; trial < 25; ++trial) {
      MatFp A(n, p);
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) A(i, j) = rnd(p);
      auto out = minor_dets(A);
      for (int i = 1; i <= n - 1; ++i) {
        MatFp s(i, p), sp(i, p), spp(i, p);
        for (int r = 1; r <= i; ++r)
          for (int c = 1; c <= i; ++c) {
            s(r, c) = A(n - i + r, c);
            sp(r, c) = A(n - i + r, c < i ? c : i + 1);
            spp(r, c) = A(n - i + r, c + 1);
          }
        u32 sgn = eps_sign(i) < 0 ? p - 1 : 1;
        EXPECT_EQ(out.D[i - 1], sgn * cofactor_det(s) % p);
        EXPECT_EQ(out.Dprime[i - 1], sgn * cofactor_det(sp) % p);
        EXPECT_EQ(out.Dprime2[i - 1], sgn * cofactor_det(spp) % p);
      }
      u32 sgn = eps_sign(n) < 0 ? p - 1 : 1;
      EXPECT_EQ(out.D[n - 1], sgn * cofactor_det(A) % p);
    }
}

TEST(Minors, BorderedTriangularExpansion) {
  // the cycle expansion needs tuples up to length n: at n=2 the matrix
  // [[a,b],[c,d]] already exercises the full-cycle term -bc
  for (u32 p : {5u, 13u})
    for (int trial = 0; trial < 250; ++trial) {
      int n = 2 + static_cast<int>(rng() % 5);
      MatFp X(n, p);
      for (int i = 1; i <= n; ++i)
        for (int j = (i < n ? i : 1); j <= n; ++j) X(i, j) = rnd(p);
      EXPECT_EQ(bordered_triangular_det(X), X.det());
    }
  MatFp bad(3, 7);
  bad(2, 1) = 1;
  EXPECT_THROW(bordered_triangular_det(bad), usage_error);
}
