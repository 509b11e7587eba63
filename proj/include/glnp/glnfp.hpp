#pragma once
// Matrix groups over F_p: root subgroups, permutation (Weyl) elements, Bruhat
// normal forms and the signed corner minors used by the operator calculus.
//
// Matrices are 1-indexed through operator()(i, j), matching the displayed
// formulas. A permutation w acts by w e_j = e_{sigma(j)}, so the matrix of w
// has entry 1 at (sigma(j), j).

#include "glnp/arith.hpp"

namespace glnp {

struct Root {
  int i = 0, j = 0;  // 1-based, i < j

  friend bool operator==(Root a, Root b) { return a.i == b.i && a.j == b.j; }
  friend bool operator<(Root a, Root b) { return a.i != b.i ? a.i < b.i : a.j < b.j; }
};

inline std::vector<Root> positive_roots(int n) {
  std::vector<Root> out;
  for (int i = 1; i < n; ++i)
    for (int j = i + 1; j <= n; ++j) out.push_back({i, j});
  return out;
}

// ---------------------------------------------------------------------------
// permutations
// ---------------------------------------------------------------------------

struct Perm {
  std::vector<int> img;  // img[j-1] = sigma(j), values 1..n

  Perm() = default;
  explicit Perm(std::vector<int> images) : img(std::move(images)) {}

  int n() const { return static_cast<int>(img.size()); }
  int operator()(int j) const { return img[j - 1]; }

  static Perm identity(int n) {
    std::vector<int> v(n);
    for (int j = 1; j <= n; ++j) v[j - 1] = j;
    return Perm(v);
  }
  static Perm longest(int n) {  // w0
    std::vector<int> v(n);
    for (int j = 1; j <= n; ++j) v[j - 1] = n + 1 - j;
    return Perm(v);
  }
  static Perm transposition(int n, int i, int j) {
    auto s = identity(n);
    std::swap(s.img[i - 1], s.img[j - 1]);
    return s;
  }
  static Perm simple(int n, int i) { return transposition(n, i, i + 1); }  // s_i

  Perm inverse() const {
    std::vector<int> v(n());
    for (int j = 1; j <= n(); ++j) v[img[j - 1] - 1] = j;
    return Perm(v);
  }
  // (a*b)(j) = a(b(j))
  friend Perm operator*(const Perm& a, const Perm& b) {
    std::vector<int> v(a.n());
    for (int j = 1; j <= a.n(); ++j) v[j - 1] = a(b(j));
    return Perm(v);
  }
  friend bool operator==(const Perm& a, const Perm& b) { return a.img == b.img; }
  friend bool operator!=(const Perm& a, const Perm& b) { return !(a == b); }
  friend bool operator<(const Perm& a, const Perm& b) { return a.img < b.img; }

  int length() const {  // inversions
    int c = 0;
    for (int i = 1; i <= n(); ++i)
      for (int j = i + 1; j <= n(); ++j)
        if ((*this)(i) > (*this)(j)) ++c;
    return c;
  }
};

// support of the unipotent factor in U w B (the Jacobi sum index set)
inline std::vector<Root> phi_plus_w(const Perm& w) {
  auto wi = w.inverse();
  std::vector<Root> out;
  for (int i = 1; i < w.n(); ++i)
    for (int j = i + 1; j <= w.n(); ++j)
      if (wi(i) > wi(j)) out.push_back({i, j});
  return out;
}

// support of the unipotent factor in B w U (canonical coset coordinates)
inline std::vector<Root> phi_plus_w_right(const Perm& w) {
  std::vector<Root> out;
  for (int i = 1; i < w.n(); ++i)
    for (int j = i + 1; j <= w.n(); ++j)
      if (w(i) > w(j)) out.push_back({i, j});
  return out;
}

// ---------------------------------------------------------------------------
// matrices over F_p
// ---------------------------------------------------------------------------

struct MatFp {
  int n = 0;
  u32 p = 0;
  std::vector<u32> a;  // row-major

  MatFp() = default;
  MatFp(int n_, u32 p_) : n(n_), p(p_), a(static_cast<size_t>(n_) * n_, 0) {}

  u32& operator()(int i, int j) { return a[static_cast<size_t>(i - 1) * n + (j - 1)]; }
  u32 operator()(int i, int j) const {
    return a[static_cast<size_t>(i - 1) * n + (j - 1)];
  }

  static MatFp identity(int n, u32 p) {
    MatFp m(n, p);
    for (int i = 1; i <= n; ++i) m(i, i) = 1;
    return m;
  }
  static MatFp from_permutation(const Perm& w, u32 p) {
    MatFp m(w.n(), p);
    for (int j = 1; j <= w.n(); ++j) m(w(j), j) = 1;
    return m;
  }
  static MatFp diagonal(const std::vector<u32>& d, u32 p) {
    MatFp m(static_cast<int>(d.size()), p);
    for (int i = 1; i <= m.n; ++i) m(i, i) = d[i - 1] % p;
    return m;
  }

  friend MatFp operator*(const MatFp& x, const MatFp& y) {
    assert(x.n == y.n && x.p == y.p);
    MatFp z(x.n, x.p);
    for (int i = 1; i <= x.n; ++i)
      for (int k = 1; k <= x.n; ++k) {
        u64 v = x(i, k);
        if (!v) continue;
        for (int j = 1; j <= x.n; ++j)
          z(i, j) = static_cast<u32>((z(i, j) + v * y(k, j)) % x.p);
      }
    return z;
  }
  friend bool operator==(const MatFp& x, const MatFp& y) {
    return x.n == y.n && x.p == y.p && x.a == y.a;
  }
  friend bool operator!=(const MatFp& x, const MatFp& y) { return !(x == y); }

  MatFp transpose() const {
    MatFp t(n, p);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_upper_triangular() const {
    for (int i = 1; i <= n; ++i) {
      if ((*this)(i, i) == 0) return false;
      for (int j = 1; j < i; ++j)
        if ((*this)(i, j) != 0) return false;
    }
    return true;
  }
  bool is_upper_unipotent() const {
    if (!is_upper_triangular()) return false;
    for (int i = 1; i <= n; ++i)
      if ((*this)(i, i) != 1) return false;
    return true;
  }

  u32 det() const {
    MatFp m = *this;
    u64 d = 1;
    for (int c = 1; c <= n; ++c) {
      int piv = 0;
      for (int r = c; r <= n; ++r)
        if (m(r, c) != 0) {
          piv = r;
          break;
        }
      if (!piv) return 0;
      if (piv != c) {
        for (int j = 1; j <= n; ++j) std::swap(m(c, j), m(piv, j));
        d = d * (p - 1) % p;
      }
      d = d * m(c, c) % p;
      u64 inv = invmod(m(c, c), p);
      for (int r = c + 1; r <= n; ++r) {
        if (!m(r, c)) continue;
        u64 f = m(r, c) * inv % p;
        for (int j = c; j <= n; ++j)
          m(r, j) = static_cast<u32>((m(r, j) + (p - f) * m(c, j)) % p);
      }
    }
    return static_cast<u32>(d);
  }

  MatFp inverse() const {
    MatFp m = *this, inv = identity(n, p);
    for (int c = 1; c <= n; ++c) {
      int piv = 0;
      for (int r = c; r <= n; ++r)
        if (m(r, c) != 0) {
          piv = r;
          break;
        }
      if (!piv) throw value_error("MatFp::inverse: singular matrix");
      if (piv != c)
        for (int j = 1; j <= n; ++j) {
          std::swap(m(c, j), m(piv, j));
          std::swap(inv(c, j), inv(piv, j));
        }
      u64 s = invmod(m(c, c), p);
      for (int j = 1; j <= n; ++j) {
        m(c, j) = static_cast<u32>(m(c, j) * s % p);
        inv(c, j) = static_cast<u32>(inv(c, j) * s % p);
      }
      for (int r = 1; r <= n; ++r) {
        if (r == c || !m(r, c)) continue;
        u64 f = m(r, c);
        for (int j = 1; j <= n; ++j) {
          m(r, j) = static_cast<u32>((m(r, j) + (p - f) * m(c, j)) % p);
          inv(r, j) = static_cast<u32>((inv(r, j) + (p - f) * inv(c, j)) % p);
        }
      }
    }
    return inv;
  }
};

// identity plus t at the root position
inline MatFp u_alpha(int n, u32 p, Root alpha, i64 t) {
  if (!(1 <= alpha.i && alpha.i < alpha.j && alpha.j <= n))
    throw usage_error("u_alpha: not a positive root");
  MatFp m = MatFp::identity(n, p);
  m(alpha.i, alpha.j) = static_cast<u32>(umod(t, p));
  return m;
}

// all matrices Id + (entries supported on the closed set S); S must be closed
// under (i,k),(k,j) -> (i,j) for the enumeration to be a subgroup
template <class F>
void for_each_unipotent(int n, u32 p, const std::vector<Root>& S, F&& f) {
  MatFp m = MatFp::identity(n, p);
  size_t k = S.size();
  std::vector<u32> digits(k, 0);
  while (true) {
    f(const_cast<const MatFp&>(m));
    size_t pos = 0;
    while (pos < k) {
      u32 v = (digits[pos] + 1) % p;
      digits[pos] = v;
      m(S[pos].i, S[pos].j) = v;
      if (v != 0) break;
      ++pos;
    }
    if (pos == k) return;
  }
}

// ---------------------------------------------------------------------------
// Bruhat normal form: g = b * w * u with b upper triangular and u supported
// on the right set of w; cells B w U are disjoint and cover G
// ---------------------------------------------------------------------------

struct BruhatForm {
  MatFp b;
  Perm w;
  MatFp u;
};

inline BruhatForm bruhat_normal_form(const MatFp& g) {
  const int n = g.n;
  const u32 p = g.p;
  MatFp m = g;
  // clear above each bottom-most pivot with row operations from below
  std::vector<int> lead(n + 1, 0);  // lead[i] = pivot column of row i
  for (int i = n; i >= 1; --i) {
    int j = 0;
    for (int c = 1; c <= n; ++c)
      if (m(i, c) != 0) {
        j = c;
        break;
      }
    if (!j) throw value_error("bruhat_normal_form: singular matrix");
    lead[i] = j;
    u64 inv = invmod(m(i, j), p);
    for (int r = 1; r < i; ++r) {
      if (!m(r, j)) continue;
      u64 f = m(r, j) * inv % p;
      for (int c = 1; c <= n; ++c)
        m(r, c) = static_cast<u32>((m(r, c) + (p - f) * m(i, c)) % p);
    }
  }
  // m = diag * w * u_full with sigma(lead[i]) = i
  std::vector<int> img(n);
  for (int i = 1; i <= n; ++i) img[lead[i] - 1] = i;
  Perm w{img};

  MatFp ufull = MatFp::identity(n, p);
  for (int i = 1; i <= n; ++i) {
    u64 inv = invmod(m(i, lead[i]), p);
    for (int c = lead[i] + 1; c <= n; ++c)
      ufull(lead[i], c) = static_cast<u32>(m(i, c) * inv % p);
  }
  // strip the part of u that w conjugates back into B: positions with
  // sigma(k) < sigma(j) move left, leaving support on the right set
  MatFp u = ufull;
  for (int d = 1; d < n; ++d)
    for (int k = 1; k + d <= n; ++k) {
      int j = k + d;
      if (w(k) > w(j) || u(k, j) == 0) continue;
      u64 t = u(k, j);
      // left-multiply u by u_{k,j}(-t)
      for (int c = j; c <= n; ++c)
        u(k, c) = static_cast<u32>((u(k, c) + (p - t) * u(j, c)) % p);
    }
  MatFp wu = MatFp::from_permutation(w, p) * u;
  MatFp b = g * wu.inverse();
  assert(b.is_upper_triangular());
  return {b, w, u};
}

inline Perm bruhat_cell(const MatFp& g) { return bruhat_normal_form(g).w; }

// ---------------------------------------------------------------------------
// signed corner minors
// ---------------------------------------------------------------------------

inline int eps_sign(int k) { return (k * (k - 1) / 2) % 2 ? -1 : 1; }

inline u32 submatrix_det(const MatFp& A, const std::vector<int>& rows,
                         const std::vector<int>& cols) {
  int k = static_cast<int>(rows.size());
  MatFp s(k, A.p);
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) s(i, j) = A(rows[i - 1], cols[j - 1]);
  return s.det();
}

struct MinorData {
  std::vector<u32> D;        // D[i-1] = D_i, 1 <= i <= n
  std::vector<u32> Dprime;   // D'[i-1] = D'_i, 1 <= i <= n-1
  std::vector<u32> Dprime2;  // D''[i-1] = D''_i, 1 <= i <= n-1
};

// D_i = eps_i det A_{{n-i+1..n},{1..i}}, D'_i swaps the last column index i
// for i+1, D''_i shifts the column window to {2..i+1}; D_n = eps_n det A
inline MinorData minor_dets(const MatFp& A) {
  const int n = A.n;
  const u32 p = A.p;
  MinorData out;
  auto signed_det = [&](int i, u32 raw) {
    return eps_sign(i) < 0 ? (p - raw) % p : raw;
  };
  for (int i = 1; i <= n - 1; ++i) {
    std::vector<int> r, c, cp, cpp;
    for (int x = n - i + 1; x <= n; ++x) r.push_back(x);
    for (int x = 1; x <= i; ++x) c.push_back(x);
    for (int x = 1; x <= i - 1; ++x) cp.push_back(x);
    cp.push_back(i + 1);
    for (int x = 2; x <= i + 1; ++x) cpp.push_back(x);
    out.D.push_back(signed_det(i, submatrix_det(A, r, c)));
    out.Dprime.push_back(signed_det(i, submatrix_det(A, r, cp)));
    out.Dprime2.push_back(signed_det(i, submatrix_det(A, r, cpp)));
  }
  out.D.push_back(signed_det(n, A.det()));
  return out;
}

// det of a matrix that is upper triangular away from the last row, expanded
// over increasing tuples (i_1 < ... < i_s = n): each term is the cycle
// n -> i_1 -> ... -> i_{s-1} -> n against the remaining diagonal
inline u32 bordered_triangular_det(const MatFp& X) {
  const int n = X.n;
  const u32 p = X.p;
  for (int i = 1; i <= n - 1; ++i)
    for (int j = 1; j < i; ++j)
      if (X(i, j) != 0) throw usage_error("bordered_triangular_det: bad shape");
  u64 total = 0;
  // subsets of {1..n-1} give i_1 < ... < i_{s-1}; i_s = n always
  for (u32 mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> tup;
    for (int b = 0; b < n - 1; ++b)
      if (mask & (1u << b)) tup.push_back(b + 1);
    tup.push_back(n);
    int s = static_cast<int>(tup.size());
    u64 term = X(n, tup[0]);
    for (int k = 0; k + 1 < s; ++k) term = term * X(tup[k], tup[k + 1]) % p;
    std::vector<bool> used(n + 1, false);
    for (int x : tup) used[x] = true;
    for (int j = 1; j <= n; ++j)
      if (!used[j]) term = term * X(j, j) % p;
    if (s % 2 == 0) term = (p - term % p) % p;  // (-1)^{s-1}
    total = (total + term) % p;
  }
  return static_cast<u32>(total);
}

}  // namespace glnp
