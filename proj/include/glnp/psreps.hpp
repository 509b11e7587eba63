#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "glnp/arith.hpp"
#include "glnp/glnfp.hpp"
#include "glnp/weights.hpp"

// Mod-p principal series of GL_n(F_p) on Bruhat cells, Jacobi-sum operators,
// group-algebra operator calculus, standard intertwiners, and the tuple
// ladders used to generate distinguished subrepresentations.

namespace glnp {

// ---------------------------------------------------------------------------
// exponent tuples, indexed by positive_roots(n) order
// ---------------------------------------------------------------------------

using KTuple = std::vector<u32>;

inline int kidx(int n, int i, int j) {
  return (i - 1) * n - (i * (i - 1)) / 2 + (j - i - 1);
}

inline int nroots(int n) { return n * (n - 1) / 2; }

inline u32 kval(const KTuple& k, int n, int i, int j) {
  return k[static_cast<size_t>(kidx(n, i, j))];
}

inline u32& kref(KTuple& k, int n, int i, int j) {
  return k[static_cast<size_t>(kidx(n, i, j))];
}

inline KTuple ktuple_zero(int n) { return KTuple(static_cast<size_t>(nroots(n)), 0); }

inline KTuple k_superdiag(int n, const std::vector<u32>& m) {
  if (static_cast<int>(m.size()) != n - 1) throw usage_error("k_superdiag: need n-1 entries");
  KTuple k = ktuple_zero(n);
  for (int i = 1; i <= n - 1; ++i) kref(k, n, i, i + 1) = m[static_cast<size_t>(i - 1)];
  return k;
}

// exponents are only meaningful through the values t^e on F_p, plus t = 0;
// for e >= 1 fold into [1, p-1], e = 0 stays
inline u32 normalize_exp(u64 e, u32 p) {
  if (e <= p - 1) return static_cast<u32>(e);
  return static_cast<u32>((e - 1) % (p - 1) + 1);
}

// ---------------------------------------------------------------------------
// distinguished tuples at w0 for a lowest-alcove ascending tuple a
// ---------------------------------------------------------------------------

inline u32 lambda_K(int n, u32 p, const std::vector<int>& a) {
  return bracket1(static_cast<i64>(a[0]) - a[static_cast<size_t>(n - 1)], p) +
         static_cast<u32>(n - 2);
}

// sum over i <= r < j of k_{ij}, for r = 1..n-1; constant K characterizes the
// common-eigencharacter family at w0
inline bool in_lambda_w0(int n, u32 p, const std::vector<int>& a, const KTuple& k) {
  u32 K = lambda_K(n, p, a);
  for (int r = 1; r <= n - 1; ++r) {
    u64 cut = 0;
    for (int i = 1; i <= r; ++i)
      for (int j = r + 1; j <= n; ++j) cut += kval(k, n, i, j);
    if (cut != K) return false;
  }
  return true;
}

inline KTuple k_chain(int n, u32 p, const std::vector<int>& a, int m) {
  if (m < 1 || m > n - 1) throw usage_error("k_chain: m out of range");
  KTuple k = ktuple_zero(n);
  for (int i = 1; i <= n - 1; ++i) {
    u32 v;
    if (i <= m)
      v = lambda_K(n, p, a);
    else
      v = static_cast<u32>(n - 2) +
          bracket1(static_cast<i64>(a[0]) - a[static_cast<size_t>(n - i)], p);
    kref(k, n, i, i + 1) = v;
  }
  return k;
}

inline KTuple k_chain_prime(int n, u32 p, const std::vector<int>& a, int m) {
  if (m < 1 || m > n - 1) throw usage_error("k_chain_prime: m out of range");
  KTuple k = ktuple_zero(n);
  for (int i = 1; i <= n - 1; ++i) {
    u32 v;
    if (i <= n - m - 1)
      v = static_cast<u32>(n - 2) +
          bracket1(static_cast<i64>(a[static_cast<size_t>(n - i - 1)]) -
                       a[static_cast<size_t>(n - 1)],
                   p);
    else
      v = lambda_K(n, p, a);
    kref(k, n, i, i + 1) = v;
  }
  return k;
}

// the distinguished tuples live on the trailing superdiagonal plus first-row
// slots; (1,n) and the full superdiagonal are fixed by this convention, the
// intermediate members are the first-row transposes of the usual pictures
inline KTuple k_sharp_r(int n, u32 p, const std::vector<int>& a, int r) {
  if (r < 1 || r > n - 1) throw usage_error("k_sharp_r: r out of range");
  u32 K = lambda_K(n, p, a);
  KTuple k = ktuple_zero(n);
  for (int j = n - r + 1; j <= n - 1; ++j) kref(k, n, j, j + 1) = K;
  kref(k, n, 1, n + 1 - r) = K;
  return k;
}

inline KTuple k_sharp(int n, u32 p, const std::vector<int>& a) {
  return k_sharp_r(n, p, a, 1);
}

struct SharpTuples {
  u32 K = 0;
  KTuple base;   // K at (1,n)
  KTuple at_r;   // K on the last r-1 superdiagonal steps, K at (1,n+1-r)
  KTuple at_rs;  // interpolating tuple between at_{r+1} (s=0) and at_r (s=K)
};

inline SharpTuples sharp_tuples(int n, u32 p, const std::vector<int>& a_in, int r, int s) {
  if (n < 3 || static_cast<int>(a_in.size()) != n)
    throw usage_error("sharp_tuples: bad rank");
  std::vector<int> a = a_in;  // accept either ordering of the alcove tuple
  std::sort(a.begin(), a.end());
  u32 K = lambda_K(n, p, a);
  if (r < 1 || r > n - 2) throw usage_error("sharp_tuples: r out of range");
  if (s < 0 || static_cast<u32>(s) > K) throw usage_error("sharp_tuples: s out of range");
  SharpTuples out;
  out.K = K;
  out.base = k_sharp(n, p, a);
  out.at_r = k_sharp_r(n, p, a, r);
  KTuple k = ktuple_zero(n);
  for (int j = n - r + 1; j <= n - 1; ++j) kref(k, n, j, j + 1) = K;
  kref(k, n, n - r, n - r + 1) = K - static_cast<u32>(s);
  kref(k, n, 1, n + 1 - r) = static_cast<u32>(s);
  kref(k, n, 1, n - r) = static_cast<u32>(K - static_cast<u32>(s) + kval(k, n, 1, n - r));
  out.at_rs = k;
  return out;
}

// ---------------------------------------------------------------------------
// characters and conjugation
// ---------------------------------------------------------------------------

inline TorusCharacter chi_conj(const TorusCharacter& mu, const Perm& w) {
  int n = static_cast<int>(mu.e.size());
  Perm wi = w.inverse();
  std::vector<int> raw(static_cast<size_t>(n));
  for (int r = 1; r <= n; ++r) raw[static_cast<size_t>(r - 1)] =
      static_cast<int>(mu.e[static_cast<size_t>(wi(r) - 1)]);
  return TorusCharacter(mu.p, raw);
}

inline bool p_regular(const TorusCharacter& mu) {
  for (size_t i = 0; i < mu.e.size(); ++i)
    for (size_t j = i + 1; j < mu.e.size(); ++j)
      if (mu.e[i] == mu.e[j]) return false;
  return true;
}

inline u32 primitive_root(u32 p) {
  std::vector<u32> qs;
  u32 m = p - 1;
  for (u32 q = 2; q * q <= m; ++q)
    if (m % q == 0) {
      qs.push_back(q);
      while (m % q == 0) m /= q;
    }
  if (m > 1) qs.push_back(m);
  for (u32 g = 2; g < p; ++g) {
    bool ok = true;
    for (u32 q : qs)
      if (powmod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw value_error("primitive_root: none found");
}

inline u32 dlog(u32 p, u32 g, u32 x) {
  u64 cur = 1;
  for (u32 e = 0; e <= p - 2; ++e) {
    if (cur == x) return e;
    cur = cur * g % p;
  }
  throw value_error("dlog: not in cyclic group");
}

// chain w_1 = 1, w_m = s_{n-m} w_{m-1}
inline Perm w_chain(int n, int m) {
  Perm w = Perm::identity(n);
  for (int t = 2; t <= m; ++t) w = Perm::simple(n, n - t) * w;
  return w;
}

// chain w'_1 = 1, w'_m = s_m w'_{m-1}
inline Perm w_chain_prime(int n, int m) {
  Perm w = Perm::identity(n);
  for (int t = 2; t <= m; ++t) w = Perm::simple(n, t) * w;
  return w;
}

inline TorusCharacter mu_chain(int n, u32 p, const std::vector<int>& a, int m) {
  auto [m1, m1p] = mu1_pair(a);
  (void)m1p;
  return chi_conj(reduce_weight(m1, p), w_chain(n, m));
}

inline TorusCharacter mu_chain_prime(int n, u32 p, const std::vector<int>& a, int m) {
  auto [m1, m1p] = mu1_pair(a);
  (void)m1;
  return chi_conj(reduce_weight(m1p, p), w_chain_prime(n, m));
}

// common endpoint of both chains: (a_{n-1}, a_1, a_2, ..., a_{n-2}, a_0)
inline TorusCharacter mu_zero(int n, u32 p, const std::vector<int>& a) {
  std::vector<int> raw;
  raw.push_back(a[static_cast<size_t>(n - 1)]);
  for (int i = 1; i <= n - 2; ++i) raw.push_back(a[static_cast<size_t>(i)]);
  raw.push_back(a[0]);
  return TorusCharacter(p, raw);
}

// ---------------------------------------------------------------------------
// principal series on Bruhat cells
// ---------------------------------------------------------------------------

struct PrincipalSeries {
  int n = 0;
  u32 p = 0;
  TorusCharacter mu;
  std::vector<Perm> ws;                    // ordered by (length, image lex)
  std::vector<std::vector<Root>> rfree;    // free unipotent support per w
  std::vector<u64> offset;
  u64 dim = 0;
  std::map<std::vector<int>, int> widx;

  PrincipalSeries(int n_, u32 p_, TorusCharacter mu_)
      : n(n_), p(p_), mu(std::move(mu_)) {
    if (n < 2) throw usage_error("principal series: rank too small");
    if (static_cast<int>(mu.e.size()) != n || mu.p != p)
      throw usage_error("principal series: character rank/prime mismatch");
    std::vector<int> img(static_cast<size_t>(n));
    std::iota(img.begin(), img.end(), 1);
    do {
      ws.emplace_back(img);
    } while (std::next_permutation(img.begin(), img.end()));
    std::stable_sort(ws.begin(), ws.end(), [](const Perm& x, const Perm& y) {
      return x.length() < y.length();
    });
    for (size_t i = 0; i < ws.size(); ++i) {
      rfree.push_back(phi_plus_w_right(ws[i]));
      offset.push_back(dim);
      dim += ppow(p, static_cast<int>(rfree.back().size()));
      widx[ws[i].img] = static_cast<int>(i);
    }
  }

  int w_index(const Perm& w) const {
    auto it = widx.find(w.img);
    if (it == widx.end()) throw usage_error("w_index: bad permutation");
    return it->second;
  }

  u64 local_of(int wi, const MatFp& u) const {
    const auto& s = rfree[static_cast<size_t>(wi)];
    u64 loc = 0, base = 1;
    for (const Root& r : s) {
      loc += base * u(r.i, r.j);
      base *= p;
    }
    return loc;
  }

  MatFp u_of(int wi, u64 local) const {
    const auto& s = rfree[static_cast<size_t>(wi)];
    MatFp u = MatFp::identity(n, p);
    for (const Root& r : s) {
      u(r.i, r.j) = static_cast<u32>(local % p);
      local /= p;
    }
    return u;
  }

  MatFp rep_of(int wi, u64 local) const {
    return MatFp::from_permutation(ws[static_cast<size_t>(wi)], p) * u_of(wi, local);
  }

  std::pair<int, u64> split(u64 cell) const {
    if (cell >= dim) throw usage_error("split: cell out of range");
    int lo = 0, hi = static_cast<int>(ws.size()) - 1;
    while (lo < hi) {
      int mid = (lo + hi + 1) / 2;
      if (offset[static_cast<size_t>(mid)] <= cell)
        lo = mid;
      else
        hi = mid - 1;
    }
    return {lo, cell - offset[static_cast<size_t>(lo)]};
  }

  u64 mu_b(const MatFp& b) const {
    u64 v = 1;
    for (int r = 1; r <= n; ++r) v = v * powmod(b(r, r), mu.e[static_cast<size_t>(r - 1)], p) % p;
    return v;
  }
};

// right translation of a cell basis vector by g: cell and scalar, given g^{-1}
inline std::pair<u64, u32> act_cell(const PrincipalSeries& ps, const MatFp& ginv, int wi,
                                    u64 local) {
  BruhatForm f = bruhat_normal_form(ps.rep_of(wi, local) * ginv);
  int wo = ps.w_index(f.w);
  u64 cell = ps.offset[static_cast<size_t>(wo)] + ps.local_of(wo, f.u);
  u32 sc = static_cast<u32>(invmod(ps.mu_b(f.b), ps.p));
  return {cell, sc};
}

struct ActionTable {
  std::vector<u64> to;
  std::vector<u32> sc;
};

inline ActionTable make_table(const PrincipalSeries& ps, const MatFp& g) {
  if (g.n != ps.n || g.p != ps.p) throw usage_error("make_table: dimension mismatch");
  ActionTable t;
  t.to.resize(ps.dim);
  t.sc.resize(ps.dim);
  MatFp gi = g.inverse();
  for (size_t wi = 0; wi < ps.ws.size(); ++wi) {
    u64 base = ps.offset[wi];
    u64 count = ppow(ps.p, static_cast<int>(ps.rfree[wi].size()));
    for (u64 loc = 0; loc < count; ++loc) {
      auto [c, s] = act_cell(ps, gi, static_cast<int>(wi), loc);
      t.to[base + loc] = c;
      t.sc[base + loc] = s;
    }
  }
  return t;
}

using Dense = std::vector<u32>;

inline Dense apply_table(const ActionTable& t, const Dense& v, u32 p) {
  Dense out(v.size(), 0);
  for (size_t c = 0; c < v.size(); ++c)
    if (v[c]) out[t.to[c]] = static_cast<u32>((out[t.to[c]] + static_cast<u64>(t.sc[c]) * v[c]) % p);
  return out;
}

inline void axpy(Dense& acc, u32 c, const Dense& v, u32 p) {
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i]) acc[i] = static_cast<u32>((acc[i] + static_cast<u64>(c) * v[i]) % p);
}

inline Dense scaled(const Dense& v, u32 c, u32 p) {
  Dense out(v.size(), 0);
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i]) out[i] = static_cast<u32>(static_cast<u64>(c) * v[i] % p);
  return out;
}

// ---------------------------------------------------------------------------
// sparse vectors
// ---------------------------------------------------------------------------

struct PSVector {
  std::vector<std::pair<u64, u32>> c;  // sorted by cell, coefficients in [1, p-1]

  void normalize(u32 p) {
    std::sort(c.begin(), c.end());
    std::vector<std::pair<u64, u32>> out;
    for (auto& [cell, v] : c) {
      if (!out.empty() && out.back().first == cell)
        out.back().second = static_cast<u32>((static_cast<u64>(out.back().second) + v) % p);
      else
        out.emplace_back(cell, v % p);
      if (!out.empty() && out.back().second == 0) out.pop_back();
    }
    c = std::move(out);
  }

  bool zero() const { return c.empty(); }

  friend bool operator==(const PSVector& a, const PSVector& b) { return a.c == b.c; }
};

inline PSVector unit_vector(u64 cell) {
  PSVector v;
  v.c.emplace_back(cell, 1);
  return v;
}

inline PSVector sparse_of(const Dense& v) {
  PSVector out;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i]) out.c.emplace_back(static_cast<u64>(i), v[i]);
  return out;
}

inline Dense dense_of(const PrincipalSeries& ps, const PSVector& v) {
  Dense out(ps.dim, 0);
  for (auto& [cell, val] : v.c) {
    if (cell >= ps.dim) throw usage_error("dense_of: cell out of range");
    out[cell] = val;
  }
  return out;
}

inline PSVector act(const PrincipalSeries& ps, const MatFp& g, const PSVector& v) {
  if (g.n != ps.n || g.p != ps.p) throw usage_error("act: dimension mismatch");
  MatFp gi = g.inverse();
  PSVector out;
  for (auto& [cell, val] : v.c) {
    auto [wi, loc] = ps.split(cell);
    auto [c2, sc] = act_cell(ps, gi, wi, loc);
    out.c.emplace_back(c2, static_cast<u32>(static_cast<u64>(sc) * val % ps.p));
  }
  out.normalize(ps.p);
  return out;
}

// ---------------------------------------------------------------------------
// Jacobi-sum operators
// ---------------------------------------------------------------------------

struct JacobiOperator {
  Perm w;
  KTuple k;  // indexed by positive_roots(n); must vanish off the support of w
};

inline void check_jacobi(const PrincipalSeries& ps, const JacobiOperator& op) {
  int n = ps.n;
  if (static_cast<int>(op.w.img.size()) != n || static_cast<int>(op.k.size()) != nroots(n))
    throw usage_error("jacobi operator: rank mismatch");
  auto sup = phi_plus_w(op.w);
  KTuple mask = ktuple_zero(n);
  for (const Root& r : sup) kref(mask, n, r.i, r.j) = 1;
  auto roots = positive_roots(n);
  for (const Root& r : roots) {
    u32 v = kval(op.k, n, r.i, r.j);
    if (v > ps.p - 1) throw usage_error("jacobi operator: exponent out of range");
    if (v && !kval(mask, n, r.i, r.j)) throw usage_error("jacobi operator: exponent off support");
  }
}

// image of the standard vector: sum over A of (prod A^k) e_{(w^{-1}, A^{-1})}
inline Dense jacobi_vec(const PrincipalSeries& ps, const JacobiOperator& op) {
  check_jacobi(ps, op);
  Dense out(ps.dim, 0);
  auto sup = phi_plus_w(op.w);
  int wo = ps.w_index(op.w.inverse());
  u64 base = ps.offset[static_cast<size_t>(wo)];
  std::vector<u32> ks;
  for (const Root& r : sup) ks.push_back(kval(op.k, ps.n, r.i, r.j));
  for_each_unipotent(ps.n, ps.p, sup, [&](const MatFp& A) {
    u64 coeff = 1;
    for (size_t t = 0; t < sup.size(); ++t) {
      if (!ks[t]) continue;
      u32 v = A(sup[t].i, sup[t].j);
      if (!v) {
        coeff = 0;
        break;
      }
      coeff = coeff * powmod(v, ks[t], ps.p) % ps.p;
    }
    if (!coeff) return;
    u64 cell = base + ps.local_of(wo, A.inverse());
    out[cell] = static_cast<u32>((out[cell] + coeff) % ps.p);
  });
  return out;
}

// value of the function (S_{k,w} v) at a group element y
inline u32 jacobi_eval(const PrincipalSeries& ps, const JacobiOperator& op, const MatFp& y) {
  BruhatForm f = bruhat_normal_form(y);
  if (!(f.w == op.w.inverse())) return 0;
  MatFp A = f.u.inverse();
  u64 coeff = ps.mu_b(f.b);
  for (const Root& r : phi_plus_w(op.w)) {
    u32 e = kval(op.k, ps.n, r.i, r.j);
    if (!e) continue;
    u32 v = A(r.i, r.j);
    if (!v) return 0;
    coeff = coeff * powmod(v, e, ps.p) % ps.p;
  }
  return static_cast<u32>(coeff);
}

// streamed application to a finitely supported vector; terms are enumerated,
// never materialized
inline PSVector apply(const PrincipalSeries& ps, const JacobiOperator& op, const PSVector& v) {
  check_jacobi(ps, op);
  for (auto& [cell, val] : v.c) {
    (void)val;
    if (cell >= ps.dim) throw usage_error("apply: cell out of range");
  }
  auto sup = phi_plus_w(op.w);
  MatFp wm = MatFp::from_permutation(op.w, ps.p);
  std::map<u64, u64> acc;
  std::vector<u32> ks;
  for (const Root& r : sup) ks.push_back(kval(op.k, ps.n, r.i, r.j));
  for_each_unipotent(ps.n, ps.p, sup, [&](const MatFp& A) {
    u64 coeff = 1;
    for (size_t t = 0; t < sup.size(); ++t) {
      if (!ks[t]) continue;
      u32 x = A(sup[t].i, sup[t].j);
      if (!x) {
        coeff = 0;
        break;
      }
      coeff = coeff * powmod(x, ks[t], ps.p) % ps.p;
    }
    if (!coeff) return;
    MatFp gi = (A * wm).inverse();
    for (auto& [cell, val] : v.c) {
      auto [wi, loc] = ps.split(cell);
      auto [c2, sc] = act_cell(ps, gi, wi, loc);
      acc[c2] += coeff * val % ps.p * sc % ps.p;
    }
  });
  PSVector out;
  for (auto& [cell, val] : acc) {
    u32 r = static_cast<u32>(val % ps.p);
    if (r) out.c.emplace_back(cell, r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// group-algebra operators with explicit term lists
// ---------------------------------------------------------------------------

struct GroupAlgebraOp {
  int n = 0;
  u32 p = 0;
  std::vector<std::pair<MatFp, u32>> terms;
};

inline GroupAlgebraOp ga_identity(int n, u32 p, u32 c = 1) {
  GroupAlgebraOp op{n, p, {}};
  if (c % p) op.terms.emplace_back(MatFp::identity(n, p), c % p);
  return op;
}

inline void ga_dedup(GroupAlgebraOp& op) {
  std::map<std::vector<u32>, u64> acc;
  for (auto& [g, s] : op.terms) acc[g.a] += s;
  std::vector<std::pair<MatFp, u32>> out;
  for (auto& [key, s] : acc) {
    u32 r = static_cast<u32>(s % op.p);
    if (!r) continue;
    MatFp g(op.n, op.p);
    g.a = key;
    out.emplace_back(std::move(g), r);
  }
  op.terms = std::move(out);
}

inline GroupAlgebraOp ga_add(const GroupAlgebraOp& a, const GroupAlgebraOp& b) {
  if (a.n != b.n || a.p != b.p) throw usage_error("ga_add: mismatch");
  GroupAlgebraOp out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  ga_dedup(out);
  return out;
}

inline GroupAlgebraOp ga_scale(const GroupAlgebraOp& a, u32 c) {
  GroupAlgebraOp out{a.n, a.p, {}};
  c %= a.p;
  if (!c) return out;
  for (auto& [g, s] : a.terms)
    out.terms.emplace_back(g, static_cast<u32>(static_cast<u64>(s) * c % a.p));
  return out;
}

// operator product: left factor applied last, terms multiply as g_a * g_b
inline GroupAlgebraOp ga_compose(const GroupAlgebraOp& a, const GroupAlgebraOp& b,
                                 u64 cap = 6000000) {
  if (a.n != b.n || a.p != b.p) throw usage_error("ga_compose: mismatch");
  if (static_cast<u64>(a.terms.size()) * b.terms.size() > cap)
    throw usage_error("ga_compose: term cap exceeded");
  GroupAlgebraOp out{a.n, a.p, {}};
  out.terms.reserve(a.terms.size() * b.terms.size());
  for (auto& [ga, sa] : a.terms)
    for (auto& [gb, sb] : b.terms)
      out.terms.emplace_back(ga * gb, static_cast<u32>(static_cast<u64>(sa) * sb % a.p));
  ga_dedup(out);
  return out;
}

inline PSVector ga_apply(const PrincipalSeries& ps, const GroupAlgebraOp& P, const PSVector& v) {
  if (P.n != ps.n || P.p != ps.p) throw usage_error("ga_apply: mismatch");
  std::map<u64, u64> acc;
  for (auto& [g, s] : P.terms) {
    MatFp gi = g.inverse();
    for (auto& [cell, val] : v.c) {
      auto [wi, loc] = ps.split(cell);
      auto [c2, sc] = act_cell(ps, gi, wi, loc);
      acc[c2] += static_cast<u64>(s) * val % ps.p * sc % ps.p;
    }
  }
  PSVector out;
  for (auto& [cell, val] : acc) {
    u32 r = static_cast<u32>(val % ps.p);
    if (r) out.c.emplace_back(cell, r);
  }
  return out;
}

// value of (P f)(y) = sum_i s_i f(y g_i) for f = S_{k,w} v
inline u32 ga_eval(const PrincipalSeries& ps, const GroupAlgebraOp& P, const JacobiOperator& src,
                   const MatFp& y) {
  u64 acc = 0;
  for (auto& [g, s] : P.terms) acc += static_cast<u64>(s) * jacobi_eval(ps, src, y * g);
  return static_cast<u32>(acc % ps.p);
}

// explicit term list of a Jacobi-sum operator
inline GroupAlgebraOp jacobi_group_op(int n, u32 p, const JacobiOperator& op, u64 cap = 2000000) {
  auto sup = phi_plus_w(op.w);
  if (ppow(p, static_cast<int>(sup.size())) > cap)
    throw usage_error("jacobi_group_op: term cap exceeded");
  GroupAlgebraOp out{n, p, {}};
  MatFp wm = MatFp::from_permutation(op.w, p);
  std::vector<u32> ks;
  for (const Root& r : sup) ks.push_back(kval(op.k, n, r.i, r.j));
  for_each_unipotent(n, p, sup, [&](const MatFp& A) {
    u64 coeff = 1;
    for (size_t t = 0; t < sup.size(); ++t) {
      if (!ks[t]) continue;
      u32 x = A(sup[t].i, sup[t].j);
      if (!x) {
        coeff = 0;
        break;
      }
      coeff = coeff * powmod(x, ks[t], p) % p;
    }
    if (coeff) out.terms.emplace_back(A * wm, static_cast<u32>(coeff));
  });
  return out;
}

// X_{alpha,m} = sum_t t^{p-1-m} u_alpha(t), 0 <= m <= p-2
inline GroupAlgebraOp x_alpha_m_op(int n, u32 p, Root alpha, u32 m) {
  if (m > p - 2) throw usage_error("x_alpha_m_op: m out of range");
  GroupAlgebraOp out{n, p, {}};
  for (u32 t = 1; t <= p - 1; ++t)
    out.terms.emplace_back(u_alpha(n, p, alpha, t),
                           static_cast<u32>(powmod(t, p - 1 - m, p)));
  return out;
}

inline GroupAlgebraOp x_plus_op(int n, u32 p, int r) {
  if (r < 2 || r > n - 1) throw usage_error("x_plus_op: r out of range");
  return x_alpha_m_op(n, p, Root{r, n}, 1);
}

// w0-mirror of X_{(r,n),1}: lower transvections at (n+1-r, 1)
inline GroupAlgebraOp x_minus_op(int n, u32 p, int r) {
  if (r < 2 || r > n - 1) throw usage_error("x_minus_op: r out of range");
  GroupAlgebraOp out{n, p, {}};
  for (u32 t = 1; t <= p - 1; ++t) {
    MatFp g = MatFp::identity(n, p);
    g(n + 1 - r, 1) = t;
    out.terms.emplace_back(std::move(g), static_cast<u32>(powmod(t, p - 2, p)));
  }
  return out;
}

// raising partner of x_minus_op(r) in this realization: the first-row
// transvection sum X_{(1,n+1-r),1}
inline GroupAlgebraOp x_row_op(int n, u32 p, int j0) {
  if (j0 < 2 || j0 > n) throw usage_error("x_row_op: column out of range");
  return x_alpha_m_op(n, p, Root{1, j0}, 1);
}

// ---------------------------------------------------------------------------
// ladder constants
// ---------------------------------------------------------------------------

inline u32 cval(int n, u32 p, const std::vector<int>& a, int ell) {
  u64 c = 1;
  for (int k = 1; k <= ell - 1; ++k) {
    u64 b = umod(static_cast<i64>(a[static_cast<size_t>(k)]) - a[0] - n + 2 + k, p);
    c = c * powmod(b, 1ull << (ell - k - 1), p) % p;
  }
  return static_cast<u32>(c);
}

inline u32 cpval(int n, u32 p, const std::vector<int>& a, int ell) {
  u64 b = umod(static_cast<i64>(a[static_cast<size_t>(ell)]) - a[0] - n + 3 + ell, p);
  return static_cast<u32>(b * cval(n, p, a, ell) % p);
}

inline u32 dval(int n, u32 p, const std::vector<int>& a, int ell, int ellp) {
  u64 d = umod(2 * (static_cast<i64>(a[static_cast<size_t>(ell)]) - a[0] - n + 3), p);
  u64 prod = 1;  // running prod_{k<lp} (c'_k - c_k)
  for (int lp = 1; lp <= ellp; ++lp) {
    u64 cp = cpval(n, p, a, lp), c = cval(n, p, a, lp);
    u64 coef = umod(static_cast<i64>(a[static_cast<size_t>(ell)]) -
                        a[static_cast<size_t>(lp)] + 1,
                    p);
    d = umod(static_cast<i64>(cp * d % p) - static_cast<i64>(coef * c % p * prod % p), p);
    prod = prod * umod(static_cast<i64>(cp) - static_cast<i64>(c), p) % p;
  }
  return static_cast<u32>(d);
}

struct ConstantsCD {
  u32 c = 0;
  u32 cp = 0;
  u32 d = 0;
};

inline ConstantsCD constants_cd(int ell, int ellp, int n, const std::vector<int>& a, u32 p) {
  if (static_cast<int>(a.size()) != n || n < 3) throw usage_error("constants_cd: bad rank");
  if (ell < 1 || ell > n - 1) throw usage_error("constants_cd: ell out of range");
  if (ellp < 0 || ellp > ell - 1) throw usage_error("constants_cd: ellp out of range");
  if (!is_k_generic_lowest(a, n, p)) throw value_error("constants_cd: tuple not n-generic");
  ConstantsCD out{cval(n, p, a, ell), cpval(n, p, a, ell), dval(n, p, a, ell, ellp)};
  if (!out.c || !out.cp) throw value_error("constants_cd: degenerate constant");
  return out;
}

inline GroupAlgebraOp z_op(int n, u32 p, const std::vector<int>& a, int ell,
                           u64 cap = 6000000) {
  if (ell < 1 || ell > n - 2) throw usage_error("z_op: ell out of range");
  GroupAlgebraOp chain =
      ga_compose(x_row_op(n, p, ell + 1), x_minus_op(n, p, n - ell), cap);
  for (int j = 1; j <= ell - 1; ++j) chain = ga_compose(z_op(n, p, a, j, cap), chain, cap);
  u32 d = dval(n, p, a, ell, ell - 1);
  return ga_add(ga_identity(n, p, d), ga_scale(chain, p - 1));
}

// ---------------------------------------------------------------------------
// dense operator application
// ---------------------------------------------------------------------------

struct TableCache {
  const PrincipalSeries* ps = nullptr;
  std::map<std::vector<u32>, ActionTable> tabs;

  explicit TableCache(const PrincipalSeries& s) : ps(&s) {}

  const ActionTable& get(const MatFp& g) {
    auto it = tabs.find(g.a);
    if (it != tabs.end()) return it->second;
    return tabs.emplace(g.a, make_table(*ps, g)).first->second;
  }
};

inline Dense apply_x_alpha_m(TableCache& tc, Root alpha, u32 m, const Dense& v) {
  const PrincipalSeries& ps = *tc.ps;
  if (m > ps.p - 2) throw usage_error("apply_x_alpha_m: m out of range");
  const ActionTable& t1 = tc.get(u_alpha(ps.n, ps.p, alpha, 1));
  Dense work = v, out(v.size(), 0);
  for (u32 t = 1; t <= ps.p - 1; ++t) {
    work = apply_table(t1, work, ps.p);
    axpy(out, static_cast<u32>(powmod(t, ps.p - 1 - m, ps.p)), work, ps.p);
  }
  return out;
}

inline Dense apply_x_plus(TableCache& tc, int r, const Dense& v) {
  const PrincipalSeries& ps = *tc.ps;
  if (r < 2 || r > ps.n - 1) throw usage_error("apply_x_plus: r out of range");
  return apply_x_alpha_m(tc, Root{r, ps.n}, 1, v);
}

inline Dense apply_x_minus(TableCache& tc, int r, const Dense& v) {
  const PrincipalSeries& ps = *tc.ps;
  if (r < 2 || r > ps.n - 1) throw usage_error("apply_x_minus: r out of range");
  MatFp g = MatFp::identity(ps.n, ps.p);
  g(ps.n + 1 - r, 1) = 1;
  const ActionTable& t1 = tc.get(g);
  Dense work = v, out(v.size(), 0);
  for (u32 t = 1; t <= ps.p - 1; ++t) {
    work = apply_table(t1, work, ps.p);
    axpy(out, static_cast<u32>(powmod(t, ps.p - 2, ps.p)), work, ps.p);
  }
  return out;
}

// X_{alpha_{n-1}, m_{n-1}} first, then down to alpha_1
inline Dense apply_calx(TableCache& tc, const std::vector<u32>& mvec, const Dense& v) {
  const PrincipalSeries& ps = *tc.ps;
  if (static_cast<int>(mvec.size()) != ps.n - 1) throw usage_error("apply_calx: need n-1 exponents");
  Dense w = v;
  for (int i = ps.n - 1; i >= 1; --i)
    w = apply_x_alpha_m(tc, Root{i, i + 1}, mvec[static_cast<size_t>(i - 1)], w);
  return w;
}

inline Dense apply_x_row(TableCache& tc, int j0, const Dense& v) {
  const PrincipalSeries& ps = *tc.ps;
  if (j0 < 2 || j0 > ps.n) throw usage_error("apply_x_row: column out of range");
  return apply_x_alpha_m(tc, Root{1, j0}, 1, v);
}

inline Dense apply_z(TableCache& tc, const std::vector<int>& a, int ell, const Dense& v) {
  const PrincipalSeries& ps = *tc.ps;
  if (ell < 1 || ell > ps.n - 2) throw usage_error("apply_z: ell out of range");
  Dense w = apply_x_minus(tc, ps.n - ell, v);
  w = apply_x_row(tc, ell + 1, w);
  for (int j = 1; j <= ell - 1; ++j) w = apply_z(tc, a, j, w);
  u32 d = dval(ps.n, ps.p, a, ell, ell - 1);
  Dense out = scaled(v, d, ps.p);
  axpy(out, ps.p - 1, w, ps.p);
  return out;
}

// ---------------------------------------------------------------------------
// eigencharacters
// ---------------------------------------------------------------------------

inline std::optional<TorusCharacter> eigencharacter(const PrincipalSeries& ps, const Dense& v) {
  u64 c0 = ps.dim;
  for (u64 i = 0; i < ps.dim; ++i)
    if (v[i]) {
      c0 = i;
      break;
    }
  if (c0 == ps.dim) throw value_error("eigencharacter: zero vector");
  u32 g = primitive_root(ps.p);
  std::vector<int> raw(static_cast<size_t>(ps.n));
  for (int r = 1; r <= ps.n; ++r) {
    std::vector<u32> diag(static_cast<size_t>(ps.n), 1);
    diag[static_cast<size_t>(r - 1)] = g;
    ActionTable t = make_table(ps, MatFp::diagonal(diag, ps.p));
    Dense w = apply_table(t, v, ps.p);
    u32 lam = static_cast<u32>(static_cast<u64>(w[c0]) * invmod(v[c0], ps.p) % ps.p);
    if (!lam) return std::nullopt;
    if (!(w == scaled(v, lam, ps.p))) return std::nullopt;
    raw[static_cast<size_t>(r - 1)] = static_cast<int>(dlog(ps.p, g, lam));
  }
  return TorusCharacter(ps.p, raw);
}

// closed form for the eigencharacter of S_{k,w} v
inline TorusCharacter eigen_expected(const PrincipalSeries& ps, const JacobiOperator& op) {
  Perm wi = op.w.inverse();
  std::vector<int> raw(static_cast<size_t>(ps.n));
  auto sup = phi_plus_w(op.w);
  for (int r = 1; r <= ps.n; ++r) {
    i64 e = static_cast<i64>(ps.mu.e[static_cast<size_t>(wi(r) - 1)]);
    for (const Root& rt : sup) {
      u32 kv = kval(op.k, ps.n, rt.i, rt.j);
      if (rt.j == r) e += kv;
      if (rt.i == r) e -= kv;
    }
    raw[static_cast<size_t>(r - 1)] = static_cast<int>(bracket1(e, ps.p));
  }
  return TorusCharacter(ps.p, raw);
}

// ---------------------------------------------------------------------------
// simultaneous eigenspaces of monomial generators
// ---------------------------------------------------------------------------

// each constraint requires T v = chi v for a monomial table T
struct MonomialConstraint {
  ActionTable t;
  u32 chi = 1;
};

inline std::vector<Dense> monomial_eigenspace(const PrincipalSeries& ps,
                                              const std::vector<MonomialConstraint>& cons) {
  u64 dim = ps.dim;
  std::vector<u64> parent(dim);
  std::vector<u32> rel(dim, 1);  // v[x] = rel[x] * v[root]
  std::vector<char> alive(dim, 1);
  std::iota(parent.begin(), parent.end(), 0ull);
  std::vector<u64> stack;
  auto find = [&](u64 x) {
    stack.clear();
    while (parent[x] != x) {
      stack.push_back(x);
      x = parent[x];
    }
    u64 r = 1;
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      r = r * rel[*it] % ps.p;
      parent[*it] = x;
      rel[*it] = static_cast<u32>(r);
    }
    return x;
  };
  for (const auto& con : cons) {
    u32 ichi = static_cast<u32>(invmod(con.chi, ps.p));
    for (u64 c = 0; c < dim; ++c) {
      // sc[c] v[c] = chi v[to[c]]
      u64 d = con.t.to[c];
      u32 rho = static_cast<u32>(static_cast<u64>(con.t.sc[c]) * ichi % ps.p);
      u64 ra = find(c), rb = find(d);
      u64 va = rel[c], vb = rel[d];  // to roots
      if (ra == rb) {
        if (vb != rho * va % ps.p) alive[ra] = 0;
      } else {
        // v[d] = rho v[c]: attach rb under ra
        parent[rb] = ra;
        rel[rb] = static_cast<u32>(rho * va % ps.p * invmod(vb, ps.p) % ps.p);
        alive[ra] = alive[ra] && alive[rb];
      }
    }
  }
  std::map<u64, std::vector<std::pair<u64, u32>>> comps;
  for (u64 c = 0; c < dim; ++c) {
    u64 r = find(c);
    if (alive[r]) comps[r].emplace_back(c, rel[c]);
  }
  std::vector<Dense> basis;
  for (auto& [root, cells] : comps) {
    Dense v(dim, 0);
    for (auto& [c, val] : cells) v[c] = val;
    basis.push_back(std::move(v));
  }
  return basis;
}

// eigenspace for: invariance under u_alpha(1), alpha in gens, and torus
// eigencharacter lam
inline std::vector<Dense> invariant_eigenspace(const PrincipalSeries& ps,
                                               const std::vector<Root>& gens,
                                               const TorusCharacter& lam) {
  if (lam.p != ps.p || static_cast<int>(lam.e.size()) != ps.n)
    throw usage_error("invariant_eigenspace: character mismatch");
  std::vector<MonomialConstraint> cons;
  for (const Root& r : gens)
    cons.push_back({make_table(ps, u_alpha(ps.n, ps.p, r, 1)), 1});
  u32 g = primitive_root(ps.p);
  for (int r = 1; r <= ps.n; ++r) {
    std::vector<u32> diag(static_cast<size_t>(ps.n), 1);
    diag[static_cast<size_t>(r - 1)] = g;
    cons.push_back({make_table(ps, MatFp::diagonal(diag, ps.p)),
                    static_cast<u32>(powmod(g, lam.e[static_cast<size_t>(r - 1)], ps.p))});
  }
  return monomial_eigenspace(ps, cons);
}

inline std::vector<Root> simple_roots(int n) {
  std::vector<Root> out;
  for (int i = 1; i <= n - 1; ++i) out.push_back({i, i + 1});
  return out;
}

inline std::vector<Root> commutator_roots(int n) {  // j >= i+2
  std::vector<Root> out;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 2; j <= n; ++j) out.push_back({i, j});
  return out;
}

inline std::vector<Root> u1_roots(int n) {  // trivial first row
  std::vector<Root> out;
  for (int i = 2; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) out.push_back({i, j});
  return out;
}

// ---------------------------------------------------------------------------
// standard intertwiners
// ---------------------------------------------------------------------------

struct Intertwiner {
  const PrincipalSeries* src = nullptr;
  PrincipalSeries dst;
  Perm w;
  PSVector x;  // normalized image of the standard vector: S_{0,w^{-1}} v'

  Intertwiner(const PrincipalSeries& s, Perm w_, PrincipalSeries d)
      : src(&s), dst(std::move(d)), w(std::move(w_)) {}
};

inline Intertwiner make_intertwiner(const PrincipalSeries& ps, const Perm& w) {
  if (static_cast<int>(w.img.size()) != ps.n) throw usage_error("make_intertwiner: rank mismatch");
  if (!p_regular(ps.mu)) throw value_error("make_intertwiner: character not p-regular");
  Intertwiner t(ps, w, PrincipalSeries(ps.n, ps.p, chi_conj(ps.mu, w)));
  t.x = sparse_of(jacobi_vec(t.dst, JacobiOperator{w.inverse(), ktuple_zero(ps.n)}));
  return t;
}

inline Dense intertwine(const Intertwiner& t, const Dense& f) {
  const PrincipalSeries& src = *t.src;
  Dense out(t.dst.dim, 0);
  for (size_t wi = 0; wi < src.ws.size(); ++wi) {
    u64 base = src.offset[wi];
    u64 count = ppow(src.p, static_cast<int>(src.rfree[wi].size()));
    for (u64 loc = 0; loc < count; ++loc) {
      u32 fc = f[base + loc];
      if (!fc) continue;
      MatFp rep = src.rep_of(static_cast<int>(wi), loc);
      for (auto& [xc, xv] : t.x.c) {
        auto [wx, lx] = t.dst.split(xc);
        auto [c2, sc] = act_cell(t.dst, rep, wx, lx);
        out[c2] = static_cast<u32>((out[c2] +
                                    static_cast<u64>(fc) * xv % src.p * sc) %
                                   src.p);
      }
    }
  }
  return out;
}

// recover c with T2(T1(f)) = c * T12(f) on a probe vector; c = 0 means the
// probe image vanished or proportionality failed
inline u32 composition_scalar(const Intertwiner& t1, const Intertwiner& t2,
                              const Intertwiner& t12, const Dense& f) {
  Dense lhs = intertwine(t2, intertwine(t1, f));
  Dense rhs = intertwine(t12, f);
  u64 c0 = rhs.size();
  for (u64 i = 0; i < rhs.size(); ++i)
    if (rhs[i]) {
      c0 = i;
      break;
    }
  if (c0 == rhs.size()) return 0;
  u32 c = static_cast<u32>(static_cast<u64>(lhs[c0]) * invmod(rhs[c0], t1.src->p) % t1.src->p);
  if (!(lhs == scaled(rhs, c, t1.src->p))) return 0;
  return c;
}

// ---------------------------------------------------------------------------
// generated subrepresentations
// ---------------------------------------------------------------------------

struct Echelon {
  u32 p = 0;
  u64 dim = 0;
  std::vector<Dense> rows;      // forward-reduced, leading coefficient 1
  std::map<u64, size_t> pivot;  // leading cell -> row

  bool reduce(Dense& v) const {  // returns true if v became zero
    for (u64 i = 0; i < dim; ++i) {
      if (!v[i]) continue;
      auto it = pivot.find(i);
      if (it == pivot.end()) return false;
      const Dense& row = rows[it->second];
      u32 c = p - v[i];
      for (u64 j = i; j < dim; ++j)
        if (row[j]) v[j] = static_cast<u32>((v[j] + static_cast<u64>(c) * row[j]) % p);
    }
    return true;
  }

  bool insert(Dense v) {
    for (u64 i = 0; i < dim; ++i) {
      if (!v[i]) continue;
      auto it = pivot.find(i);
      if (it == pivot.end()) {
        u32 inv = static_cast<u32>(invmod(v[i], p));
        for (u64 j = i; j < dim; ++j)
          if (v[j]) v[j] = static_cast<u32>(static_cast<u64>(v[j]) * inv % p);
        pivot[i] = rows.size();
        rows.push_back(std::move(v));
        return true;
      }
      const Dense& row = rows[it->second];
      u32 c = p - v[i];
      for (u64 j = i; j < dim; ++j)
        if (row[j]) v[j] = static_cast<u32>((v[j] + static_cast<u64>(c) * row[j]) % p);
    }
    return false;
  }

  bool contains(Dense v) const { return reduce(v); }

  u64 rank() const { return rows.size(); }
};

inline std::vector<MatFp> standard_generators(int n, u32 p) {
  std::vector<MatFp> gens;
  for (int i = 1; i <= n - 1; ++i) gens.push_back(u_alpha(n, p, Root{i, i + 1}, 1));
  for (int i = 1; i <= n - 1; ++i)
    gens.push_back(MatFp::from_permutation(Perm::simple(n, i), p));
  u32 g = primitive_root(p);
  for (int r = 1; r <= n; ++r) {
    std::vector<u32> diag(static_cast<size_t>(n), 1);
    diag[static_cast<size_t>(r - 1)] = g;
    gens.push_back(MatFp::diagonal(diag, p));
  }
  return gens;
}

inline Echelon generate_subrep(const PrincipalSeries& ps, const PSVector& v0) {
  Echelon e;
  e.p = ps.p;
  e.dim = ps.dim;
  if (v0.zero()) return e;
  std::vector<ActionTable> tables;
  for (const MatFp& g : standard_generators(ps.n, ps.p)) tables.push_back(make_table(ps, g));
  std::queue<Dense> work;
  if (e.insert(dense_of(ps, v0))) work.push(e.rows.back());
  while (!work.empty()) {
    Dense v = std::move(work.front());
    work.pop();
    for (const ActionTable& t : tables) {
      Dense w = apply_table(t, v, ps.p);
      if (e.insert(std::move(w))) work.push(e.rows.back());
    }
  }
  return e;
}

inline u64 weyl_dim(const Weight& lam) {
  int n = lam.n();
  __int128 num = 1, den = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      num *= lam.d[static_cast<size_t>(i - 1)] - lam.d[static_cast<size_t>(j - 1)] + j - i;
      den *= j - i;
    }
  if (den == 0 || num % den != 0) throw value_error("weyl_dim: not integral");
  return static_cast<u64>(num / den);
}

// ---------------------------------------------------------------------------
// Levi-block embeddings
// ---------------------------------------------------------------------------

// block occupies rows and columns [n-j1, n-i1] (1-based)
inline MatFp levi_embed_mat(const MatFp& g, int n, int i1, int j1) {
  int m = j1 - i1 + 1;
  if (g.n != m) throw usage_error("levi_embed_mat: block size mismatch");
  int o = n - j1 - 1;  // 0-based offset
  MatFp out = MatFp::identity(n, g.p);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) out(o + i, o + j) = g(i, j);
  return out;
}

inline std::vector<int> levi_sub_a(const std::vector<int>& b, int i1, int j1) {
  int n = static_cast<int>(b.size());
  if (!(0 <= i1 && i1 < j1 && j1 <= n - 1)) throw usage_error("levi_sub_a: bad window");
  int m = j1 - i1 + 1;
  std::vector<int> sub;
  sub.push_back(b[static_cast<size_t>(i1)] - m + 2);
  for (int k = i1 + 1; k <= j1 - 1; ++k) sub.push_back(b[static_cast<size_t>(k)]);
  sub.push_back(b[static_cast<size_t>(j1)] + m - 2);
  return sub;
}

inline GroupAlgebraOp levi_embed(int n, u32 p, const JacobiOperator& op, int i1, int j1,
                                 u64 cap = 2000000) {
  int m = j1 - i1 + 1;
  if (static_cast<int>(op.w.img.size()) != m)
    throw usage_error("levi_embed: operator size must match the window");
  GroupAlgebraOp sub = jacobi_group_op(m, p, op, cap);
  GroupAlgebraOp out{n, p, {}};
  out.terms.reserve(sub.terms.size());
  for (auto& [g, s] : sub.terms) out.terms.emplace_back(levi_embed_mat(g, n, i1, j1), s);
  return out;
}

// the distinguished block operator: rank-m chain tuple at the longest element
inline GroupAlgebraOp levi_jacobi_op(int n, u32 p, const std::vector<int>& b, int i1, int j1,
                                     u64 cap = 2000000) {
  int m = j1 - i1 + 1;
  std::vector<int> sub = levi_sub_a(b, i1, j1);
  JacobiOperator op{Perm::longest(m), k_chain(m, p, sub, 1)};
  return levi_embed(n, p, op, i1, j1, cap);
}

// ---------------------------------------------------------------------------
// randomness helpers
// ---------------------------------------------------------------------------

inline MatFp random_gl(std::mt19937_64& rng, int n, u32 p) {
  std::uniform_int_distribution<u32> d(0, p - 1);
  while (true) {
    MatFp g(n, p);
    for (auto& x : g.a) x = d(rng);
    if (g.det() != 0) return g;
  }
}

inline MatFp random_upper_unipotent(std::mt19937_64& rng, int n, u32 p) {
  std::uniform_int_distribution<u32> d(0, p - 1);
  MatFp g = MatFp::identity(n, p);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) g(i, j) = d(rng);
  return g;
}

inline KTuple random_ktuple(std::mt19937_64& rng, int n, u32 p, const std::vector<Root>& sup,
                            u32 hi) {
  std::uniform_int_distribution<u32> d(0, hi);
  KTuple k = ktuple_zero(n);
  for (const Root& r : sup) kref(k, n, r.i, r.j) = d(rng);
  return k;
}

// ---------------------------------------------------------------------------
// formula verification
// ---------------------------------------------------------------------------

struct FormulaReport {
  bool ok = false;
  bool hyp_ok = true;
  std::string detail;
};

struct ComboTerm {
  KTuple k;
  u32 coeff = 0;
};

inline Dense combo_dense(const PrincipalSeries& ps, const std::vector<ComboTerm>& terms,
                         const Perm& w) {
  Dense out(ps.dim, 0);
  for (const auto& t : terms) {
    if (!t.coeff) continue;
    axpy(out, t.coeff, jacobi_vec(ps, JacobiOperator{w, t.k}), ps.p);
  }
  return out;
}

inline FormulaReport compare_dense(const PrincipalSeries& ps, const Dense& lhs,
                                   const Dense& rhs) {
  FormulaReport rep;
  for (u64 c = 0; c < ps.dim; ++c)
    if (lhs[c] != rhs[c]) {
      auto [wi, loc] = ps.split(c);
      std::ostringstream os;
      os << "first differing cell " << c << " (w index " << wi << ", local " << loc
         << "): lhs=" << lhs[c] << " rhs=" << rhs[c];
      rep.detail = os.str();
      return rep;
    }
  rep.ok = true;
  rep.detail = "dense match";
  return rep;
}

// sampled comparison of (P . S_{k,w} v) against a combination of Jacobi images
inline FormulaReport compare_lazy(const PrincipalSeries& ps, const GroupAlgebraOp& P,
                                  const JacobiOperator& src, const std::vector<ComboTerm>& rhs,
                                  const Perm& w_rhs, u32 samples, u64 seed) {
  FormulaReport rep;
  std::mt19937_64 rng(seed);
  MatFp w0m = MatFp::from_permutation(Perm::longest(ps.n), ps.p);
  for (u32 s = 0; s < samples; ++s) {
    MatFp y = (s % 5 < 3) ? random_gl(rng, ps.n, ps.p)
                          : w0m * random_upper_unipotent(rng, ps.n, ps.p);
    u32 lhs = ga_eval(ps, P, src, y);
    u64 acc = 0;
    for (const auto& t : rhs)
      acc += static_cast<u64>(t.coeff) * jacobi_eval(ps, JacobiOperator{w_rhs, t.k}, y);
    u32 rv = static_cast<u32>(acc % ps.p);
    if (lhs != rv) {
      std::ostringstream os;
      os << "sample " << s << " mismatch: lhs=" << lhs << " rhs=" << rv;
      rep.detail = os.str();
      return rep;
    }
  }
  rep.ok = true;
  rep.detail = "sampled match";
  return rep;
}

inline FormulaReport hyp_fail(const std::string& what) {
  FormulaReport rep;
  rep.hyp_ok = false;
  rep.detail = "hypothesis error: " + what;
  return rep;
}

// single lowering step at a root alpha0 = (i0,j0) in the support of w;
// requires k_{i0,j} = 0 for every support root (i0,j) with j > j0
inline FormulaReport verify_lower_exponent(const PrincipalSeries& ps, const JacobiOperator& op,
                                           Root alpha0, u32 m) {
  auto sup = phi_plus_w(op.w);
  if (std::find(sup.begin(), sup.end(), alpha0) == sup.end())
    return hyp_fail("alpha0 not in the support of w");
  if (m > ps.p - 2) return hyp_fail("m > p-2");
  for (const Root& r : sup)
    if (r.i == alpha0.i && r.j > alpha0.j && kval(op.k, ps.n, r.i, r.j) != 0)
      return hyp_fail("row of alpha0 not clear to the right");
  TableCache tc(ps);
  Dense lhs = apply_x_alpha_m(tc, alpha0, m, jacobi_vec(ps, op));
  u32 ka = kval(op.k, ps.n, alpha0.i, alpha0.j);
  std::vector<ComboTerm> rhs;
  if (m <= ka) {
    KTuple k2 = op.k;
    kref(k2, ps.n, alpha0.i, alpha0.j) = ka - m;
    u32 c = binom_mod_p(ka, m, ps.p);
    if ((m + 1) % 2) c = static_cast<u32>(ps.p - c) % ps.p;  // (-1)^{m+1}
    rhs.push_back({k2, c});
  }
  return compare_dense(ps, lhs, combo_dense(ps, rhs, op.w));
}

// full-row vanishing including j0 makes S_{k,w} a u_{alpha0}(t) fixed vector
inline FormulaReport verify_fixed_vector(const PrincipalSeries& ps, const JacobiOperator& op,
                                         Root alpha0, i64 t) {
  auto sup = phi_plus_w(op.w);
  if (std::find(sup.begin(), sup.end(), alpha0) == sup.end())
    return hyp_fail("alpha0 not in the support of w");
  for (const Root& r : sup)
    if (r.i == alpha0.i && r.j >= alpha0.j && kval(op.k, ps.n, r.i, r.j) != 0)
      return hyp_fail("row of alpha0 not clear from j0 on");
  Dense v = jacobi_vec(ps, op);
  ActionTable tab = make_table(ps, u_alpha(ps.n, ps.p, alpha0, t));
  return compare_dense(ps, apply_table(tab, v, ps.p), v);
}

inline FormulaReport verify_superdiag_product(const PrincipalSeries& ps,
                                              const std::vector<u32>& kvec,
                                              const std::vector<u32>& mvec) {
  int n = ps.n;
  if (static_cast<int>(kvec.size()) != n - 1 || static_cast<int>(mvec.size()) != n - 1)
    return hyp_fail("need n-1 superdiagonal exponents");
  for (u32 m : mvec)
    if (m > ps.p - 2) return hyp_fail("m > p-2");
  JacobiOperator op{Perm::longest(n), k_superdiag(n, kvec)};
  TableCache tc(ps);
  Dense lhs = apply_calx(tc, mvec, jacobi_vec(ps, op));
  bool vanish = false;
  u64 coeff = 1;
  std::vector<u32> k2(kvec);
  for (int i = 0; i < n - 1; ++i) {
    if (mvec[static_cast<size_t>(i)] > kvec[static_cast<size_t>(i)]) vanish = true;
    else {
      u32 c = binom_mod_p(kvec[static_cast<size_t>(i)], mvec[static_cast<size_t>(i)], ps.p);
      if ((mvec[static_cast<size_t>(i)] + 1) % 2) c = static_cast<u32>(ps.p - c) % ps.p;
      coeff = coeff * c % ps.p;
      k2[static_cast<size_t>(i)] = kvec[static_cast<size_t>(i)] - mvec[static_cast<size_t>(i)];
    }
  }
  std::vector<ComboTerm> rhs;
  if (!vanish) rhs.push_back({k_superdiag(n, k2), static_cast<u32>(coeff)});
  return compare_dense(ps, lhs, combo_dense(ps, rhs, Perm::longest(n)));
}

inline FormulaReport verify_eigencharacter(const PrincipalSeries& ps, const JacobiOperator& op) {
  FormulaReport rep;
  Dense v = jacobi_vec(ps, op);
  bool zero = true;
  for (u32 x : v)
    if (x) {
      zero = false;
      break;
    }
  if (zero) {
    rep.ok = true;
    rep.detail = "vector vanished";
    return rep;
  }
  auto got = eigencharacter(ps, v);
  if (!got) {
    rep.detail = "not an eigenvector";
    return rep;
  }
  TorusCharacter want = eigen_expected(ps, op);
  rep.ok = (*got == want);
  rep.detail = rep.ok ? "eigencharacter matches" : "eigencharacter mismatch";
  return rep;
}

inline FormulaReport verify_u_fixed_line(const PrincipalSeries& ps, const Perm& w) {
  FormulaReport rep;
  TorusCharacter lam = eigen_expected(ps, JacobiOperator{w, ktuple_zero(ps.n)});
  auto basis = invariant_eigenspace(ps, simple_roots(ps.n), lam);
  if (basis.size() != 1) {
    std::ostringstream os;
    os << "expected line, got dimension " << basis.size();
    rep.detail = os.str();
    return rep;
  }
  Dense v = jacobi_vec(ps, JacobiOperator{w, ktuple_zero(ps.n)});
  Echelon e;
  e.p = ps.p;
  e.dim = ps.dim;
  e.insert(basis[0]);
  rep.ok = e.contains(v);
  rep.detail = rep.ok ? "line spanned by S_{0,w} v" : "S_{0,w} v outside the fixed line";
  return rep;
}

inline FormulaReport verify_cell_basis(const PrincipalSeries& ps, const Perm& w) {
  FormulaReport rep;
  auto sup = phi_plus_w(w);
  u64 cnt = ppow(ps.p, static_cast<int>(sup.size()));
  Echelon e;
  e.p = ps.p;
  e.dim = ps.dim;
  KTuple k = ktuple_zero(ps.n);
  for (u64 idx = 0; idx < cnt; ++idx) {
    u64 rest = idx;
    for (const Root& r : sup) {
      kref(k, ps.n, r.i, r.j) = static_cast<u32>(rest % ps.p);
      rest /= ps.p;
    }
    e.insert(jacobi_vec(ps, JacobiOperator{w, k}));
  }
  rep.ok = (e.rank() == cnt);
  std::ostringstream os;
  os << "rank " << e.rank() << " of " << cnt;
  rep.detail = os.str();
  return rep;
}

// one intertwiner step on a superdiagonal tuple; the scalar carries the sign
// (-1)^{b+1} with b = [d_{r+1} - d_r]_1
inline FormulaReport verify_intertwine_step(const PrincipalSeries& ps,
                                            const std::vector<u32>& kvec, int r) {
  int n = ps.n;
  if (r < 1 || r > n - 1) return hyp_fail("r out of range");
  if (static_cast<int>(kvec.size()) != n - 1) return hyp_fail("need n-1 superdiagonal exponents");
  u32 klow = kvec[static_cast<size_t>(n - r - 1)];
  if (klow >= ps.p - 1) return hyp_fail("lowered entry must be < p-1");
  if (!p_regular(ps.mu)) return hyp_fail("character not p-regular");
  u32 b = bracket1(static_cast<i64>(ps.mu.e[static_cast<size_t>(r)]) -
                       ps.mu.e[static_cast<size_t>(r - 1)],
                   ps.p);
  Intertwiner t = make_intertwiner(ps, Perm::simple(n, r));
  Dense lhs = intertwine(t, jacobi_vec(ps, JacobiOperator{Perm::longest(n), k_superdiag(n, kvec)}));
  std::vector<ComboTerm> rhs;
  if (klow >= b) {
    std::vector<u32> k2(kvec);
    k2[static_cast<size_t>(n - r - 1)] = klow - b;
    u32 c = binom_mod_p(klow, b, ps.p);
    if ((b + 1) % 2) c = static_cast<u32>(ps.p - c) % ps.p;
    rhs.push_back({k_superdiag(n, k2), c});
  }
  return compare_dense(t.dst, lhs, combo_dense(t.dst, rhs, Perm::longest(n)));
}

// one step of the two descent chains on the distinguished tuples
inline FormulaReport verify_intertwine_chain(int n, u32 p, const std::vector<int>& a, int m,
                                             bool primed) {
  if (m < 1 || m > n - 2) return hyp_fail("m out of range");
  TorusCharacter mu = primed ? mu_chain_prime(n, p, a, m) : mu_chain(n, p, a, m);
  PrincipalSeries ps(n, p, mu);
  int r = primed ? m + 1 : n - 1 - m;
  KTuple km = primed ? k_chain_prime(n, p, a, m) : k_chain(n, p, a, m);
  KTuple knext = primed ? k_chain_prime(n, p, a, m + 1) : k_chain(n, p, a, m + 1);
  u32 b = bracket1(static_cast<i64>(ps.mu.e[static_cast<size_t>(r)]) -
                       ps.mu.e[static_cast<size_t>(r - 1)],
                   p);
  i64 want_b = primed ? static_cast<i64>(a[static_cast<size_t>(m)]) - a[0]
                      : static_cast<i64>(a[static_cast<size_t>(n - 1)]) -
                            a[static_cast<size_t>(n - 1 - m)];
  if (b != bracket1(want_b, p)) return hyp_fail("bracket does not match the closed form");
  u32 klow = kval(km, n, n - r, n + 1 - r);
  Intertwiner t = make_intertwiner(ps, Perm::simple(n, r));
  Dense lhs = intertwine(t, jacobi_vec(ps, JacobiOperator{Perm::longest(n), km}));
  std::vector<ComboTerm> rhs;
  FormulaReport rep;
  if (klow < b) {
    rep.detail = "chain scalar vanished";
    return rep;
  }
  u32 c = binom_mod_p(klow, b, p);
  if ((b + 1) % 2) c = static_cast<u32>(p - c) % p;
  if (!c) {
    rep.detail = "chain scalar vanished";
    return rep;
  }
  rhs.push_back({knext, c});
  return compare_dense(t.dst, lhs, combo_dense(t.dst, rhs, Perm::longest(n)));
}

inline FormulaReport verify_top_column_lower(const PrincipalSeries& ps, const KTuple& k, int r) {
  int n = ps.n;
  if (r < 2 || r > n - 1) return hyp_fail("r out of range");
  TableCache tc(ps);
  Dense lhs = apply_x_plus(tc, r, jacobi_vec(ps, JacobiOperator{Perm::longest(n), k}));
  std::vector<ComboTerm> rhs;
  u32 kv = kval(k, n, r, n);
  if (kv) {
    KTuple k2 = k;
    kref(k2, n, r, n) = kv - 1;
    rhs.push_back({k2, kv});
  }
  return compare_dense(ps, lhs, combo_dense(ps, rhs, Perm::longest(n)));
}

// ---------------------------------------------------------------------------
// symbolic expansion of the transvection sums on the w0 family
// ---------------------------------------------------------------------------

// coefficient accumulator over exponent tuples
using KCombo = std::map<KTuple, u32>;

inline void kcombo_add(KCombo& acc, u32 p, const KTuple& k, u64 c) {
  c %= p;
  if (!c) return;
  auto it = acc.emplace(k, 0u).first;
  it->second = static_cast<u32>((it->second + c) % p);
  if (!it->second) acc.erase(it);
}

inline std::vector<ComboTerm> kcombo_terms(const KCombo& acc) {
  std::vector<ComboTerm> out;
  out.reserve(acc.size());
  for (const auto& kv : acc) out.push_back({kv.first, kv.second});
  return out;
}

// exponent surgery, folding p back to 1
inline KTuple k_shift(const KTuple& k, int n, u32 p,
                      const std::vector<std::array<int, 3>>& delta) {
  std::vector<i64> w(k.begin(), k.end());
  for (const auto& d : delta) w[static_cast<size_t>(kidx(n, d[0], d[1]))] += d[2];
  KTuple out(w.size());
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0) throw value_error("k_shift: negative exponent");
    out[i] = normalize_exp(static_cast<u64>(w[i]), p);
  }
  return out;
}

// domain of the closed expansion for x_minus_op(r): rows strictly between the
// first row and row n+1-r carry no exponents, the raising coefficient stays
// off the wrap point and its neighbour, and the loaded exponents stay inside
// the alcove-gap windows; outside these the image leaves the w0 cell
inline std::string x_minus_hyp(int n, u32 p, const std::vector<int>& a, int r,
                               const KTuple& k) {
  if (r < 2 || r > n - 1) return "need 2 <= r <= n-1";
  int s = n + 1 - r;
  for (int i = 2; i <= s - 1; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (kval(k, n, i, j)) return "rows 2..n-r must vanish";
  i64 arg = static_cast<i64>(a[0]) - a[static_cast<size_t>(r - 1)];
  i64 row1 = 0;
  for (int j = 2; j <= s; ++j) row1 += kval(k, n, 1, j);
  arg -= row1;
  u32 br = bracket1(arg, p);
  if (br == 0) return "raising coefficient at the wrap point";
  if (br == 1) return "raising coefficient adjacent to the wrap point";
  i64 mass = 0;
  for (int q = s + 1; q <= n; ++q) mass += kval(k, n, s, q);
  if (s == 2) {
    i64 win = static_cast<i64>(a[static_cast<size_t>(n - 2)]) - a[0] + 1 + row1;
    if (mass >= win)
      return "row " + std::to_string(s) + " mass " + std::to_string(mass) +
             " reaches the window " + std::to_string(win);
  } else {
    for (int j = 2; j <= s; ++j) {
      i64 win = static_cast<i64>(a[static_cast<size_t>(s + 1 - j)]) -
                a[static_cast<size_t>(s - j)];
      if (kval(k, n, 1, j) >= win)
        return "exponent k(1," + std::to_string(j) + ")=" +
               std::to_string(kval(k, n, 1, j)) + " reaches the window " +
               std::to_string(win);
    }
    i64 win = static_cast<i64>(a[static_cast<size_t>(s - 1)]) -
              a[static_cast<size_t>(s - 2)] + row1;
    if (mass >= win)
      return "row " + std::to_string(s) + " mass " + std::to_string(mass) +
             " reaches the window " + std::to_string(win);
  }
  return "";
}

// random tuple inside the domain of x_minus_hyp; loads stay modest so the
// kappa window keeps room
inline KTuple random_admissible_minus(int n, u32 p, const std::vector<int>& a, int r,
                                      std::mt19937_64& rng) {
  if (r < 2 || r > n - 1) throw usage_error("random_admissible_minus: bad r");
  int s = n + 1 - r;
  for (int tries = 0; tries < 4000; ++tries) {
    KTuple k = ktuple_zero(n);
    for (int j = 2; j <= s; ++j) {
      i64 win = s == 2 ? static_cast<i64>(p - 1)
                       : static_cast<i64>(a[static_cast<size_t>(s + 1 - j)]) -
                             a[static_cast<size_t>(s - j)];
      if (win > 0) kref(k, n, 1, j) = static_cast<u32>(rng() % static_cast<u64>(win));
    }
    for (int j = s + 1; j <= n; ++j) kref(k, n, 1, j) = static_cast<u32>(rng() % (p - 1));
    i64 row1 = 0;
    for (int j = 2; j <= s; ++j) row1 += kval(k, n, 1, j);
    i64 win = s == 2 ? static_cast<i64>(a[static_cast<size_t>(n - 2)]) - a[0] + 1 + row1
                     : static_cast<i64>(a[static_cast<size_t>(s - 1)]) -
                           a[static_cast<size_t>(s - 2)] + row1;
    i64 room = win - 1;
    for (int q = s + 1; q <= n; ++q) {
      if (room <= 0) break;
      u32 v = static_cast<u32>(rng() % static_cast<u64>(room + 1));
      kref(k, n, s, q) = v;
      room -= v;
    }
    for (int i = s + 1; i <= n - 1; ++i)
      for (int j = i + 1; j <= n; ++j) kref(k, n, i, j) = static_cast<u32>(rng() % (p - 1));
    if (x_minus_hyp(n, p, a, r, k).empty()) return k;
  }
  throw value_error("random_admissible_minus: no admissible tuple found");
}

// X^-_r S_{k,w0}: row n+1-r feeds the first row slot by slot, the (1,n+1-r)
// exponent grows by one with the wrapped coefficient, and each nonempty set
// of intermediate stops contributes an alternating chain term
inline void x_minus_expand(int n, u32 p, const std::vector<int>& a, int r,
                           const KTuple& k, u64 cin, KCombo& acc) {
  int s = n + 1 - r;
  cin %= p;
  if (!cin) return;
  for (int q = s + 1; q <= n; ++q) {
    u32 kq = kval(k, n, s, q);
    if (kq) kcombo_add(acc, p, k_shift(k, n, p, {{s, q, -1}, {1, q, +1}}), cin * kq);
  }
  i64 arg = static_cast<i64>(a[0]) - a[static_cast<size_t>(r - 1)];
  for (int j = 2; j <= s; ++j) arg -= kval(k, n, 1, j);
  kcombo_add(acc, p, k_shift(k, n, p, {{1, s, +1}}), cin * (bracket1(arg, p) % p));
  int nf = s - 2;
  for (u32 mask = 1; nf > 0 && mask < (1u << nf); ++mask) {
    std::vector<int> stops{1};
    for (int b = 0; b < nf; ++b)
      if (mask & (1u << b)) stops.push_back(2 + b);
    stops.push_back(s);
    i64 e = static_cast<i64>(a[static_cast<size_t>(n - stops[1])]) - a[0] + 1;
    for (int j = 2; j <= stops[1]; ++j) e += kval(k, n, 1, j);
    u64 c = umod(e, p);
    if (stops.size() % 2 == 0) c = (p - c) % p;
    std::vector<std::array<int, 3>> delta;
    for (size_t h = 0; h + 1 < stops.size(); ++h)
      delta.push_back({stops[h], stops[h + 1], +1});
    kcombo_add(acc, p, k_shift(k, n, p, delta), cin * c);
  }
}

// X_{(1,j0),1} S_{k,w0}: lowers the (1,j0) exponent, and the farther first-row
// exponents reroute through (j0,j); no hypotheses
inline void x_row_expand(int n, u32 p, int j0, const KTuple& k, u64 cin, KCombo& acc) {
  cin %= p;
  if (!cin) return;
  u32 k0 = kval(k, n, 1, j0);
  if (k0) kcombo_add(acc, p, k_shift(k, n, p, {{1, j0, -1}}), cin * k0);
  for (int j = j0 + 1; j <= n; ++j) {
    u32 kj = kval(k, n, 1, j);
    if (kj) kcombo_add(acc, p, k_shift(k, n, p, {{1, j, -1}, {j0, j, +1}}), cin * kj);
  }
}

// combo-level steps; the minus step returns the first violated hypothesis
inline std::string expand_minus(int n, u32 p, const std::vector<int>& a, int r,
                                KCombo& combo) {
  KCombo out;
  for (const auto& kv : combo) {
    std::string bad = x_minus_hyp(n, p, a, r, kv.first);
    if (!bad.empty()) return bad;
    x_minus_expand(n, p, a, r, kv.first, kv.second, out);
  }
  combo = std::move(out);
  return "";
}

inline void expand_row(int n, u32 p, int j0, KCombo& combo) {
  KCombo out;
  for (const auto& kv : combo) x_row_expand(n, p, j0, kv.first, kv.second, out);
  combo = std::move(out);
}

inline std::string expand_z(int n, u32 p, const std::vector<int>& a, int ell,
                            KCombo& combo) {
  if (ell < 1 || ell > n - 2) return "Z index out of range";
  KCombo work = combo;
  std::string bad = expand_minus(n, p, a, n - ell, work);
  if (!bad.empty()) return bad;
  expand_row(n, p, ell + 1, work);
  for (int j = 1; j <= ell - 1; ++j) {
    bad = expand_z(n, p, a, j, work);
    if (!bad.empty()) return bad;
  }
  u32 d = dval(n, p, a, ell, ell - 1);
  KCombo out;
  for (const auto& kv : combo)
    kcombo_add(out, p, kv.first, static_cast<u64>(kv.second) * d % p);
  for (const auto& kv : work) kcombo_add(out, p, kv.first, p - kv.second);
  combo = std::move(out);
  return "";
}

// ---------------------------------------------------------------------------
// formula checks built on the expansions
// ---------------------------------------------------------------------------

// one lowering sum against its closed expansion
inline FormulaReport verify_mirror_expansion(const PrincipalSeries& ps,
                                             const std::vector<int>& a, const KTuple& k,
                                             int r, u32 samples = 0, u64 seed = 12345) {
  std::string bad = x_minus_hyp(ps.n, ps.p, a, r, k);
  if (!bad.empty()) return hyp_fail(bad);
  KCombo combo;
  x_minus_expand(ps.n, ps.p, a, r, k, 1, combo);
  auto rhs = kcombo_terms(combo);
  JacobiOperator src{Perm::longest(ps.n), k};
  if (samples)
    return compare_lazy(ps, x_minus_op(ps.n, ps.p, r), src, rhs, Perm::longest(ps.n),
                        samples, seed);
  TableCache tc(ps);
  return compare_dense(ps, apply_x_minus(tc, r, jacobi_vec(ps, src)),
                       combo_dense(ps, rhs, Perm::longest(ps.n)));
}

// one first-row sum against its rerouting expansion
inline FormulaReport verify_row_expansion(const PrincipalSeries& ps, const KTuple& k,
                                          int j0, u32 samples = 0, u64 seed = 12345) {
  if (j0 < 2 || j0 > ps.n) return hyp_fail("column out of range");
  KCombo combo;
  x_row_expand(ps.n, ps.p, j0, k, 1, combo);
  auto rhs = kcombo_terms(combo);
  JacobiOperator src{Perm::longest(ps.n), k};
  if (samples)
    return compare_lazy(ps, x_row_op(ps.n, ps.p, j0), src, rhs, Perm::longest(ps.n),
                        samples, seed);
  TableCache tc(ps);
  return compare_dense(ps, apply_x_row(tc, j0, jacobi_vec(ps, src)),
                       combo_dense(ps, rhs, Perm::longest(ps.n)));
}

// raising after lowering at matched indices, against the composed expansions
inline FormulaReport verify_mirror_composite(const PrincipalSeries& ps,
                                             const std::vector<int>& a, const KTuple& k,
                                             int r, u32 samples = 0, u64 seed = 12345) {
  KCombo combo{{k, 1u}};
  std::string bad = expand_minus(ps.n, ps.p, a, r, combo);
  if (!bad.empty()) return hyp_fail(bad);
  expand_row(ps.n, ps.p, ps.n + 1 - r, combo);
  auto rhs = kcombo_terms(combo);
  JacobiOperator src{Perm::longest(ps.n), k};
  if (samples) {
    GroupAlgebraOp P =
        ga_compose(x_row_op(ps.n, ps.p, ps.n + 1 - r), x_minus_op(ps.n, ps.p, r));
    return compare_lazy(ps, P, src, rhs, Perm::longest(ps.n), samples, seed);
  }
  TableCache tc(ps);
  Dense lhs = apply_x_minus(tc, r, jacobi_vec(ps, src));
  lhs = apply_x_row(tc, ps.n + 1 - r, lhs);
  return compare_dense(ps, lhs, combo_dense(ps, rhs, Perm::longest(ps.n)));
}

// canonical eigen-family tuple with a unit loop through (n+1-r, n+1-m)
inline KTuple loop_instance(int n, u32 p, const std::vector<int>& a, int m, int r) {
  if (!(1 <= m && m <= r - 1 && r <= n - 1)) throw usage_error("loop_instance: bad (m,r)");
  u32 K = lambda_K(n, p, a);
  KTuple k = ktuple_zero(n);
  for (int i = 1; i <= m - 1; ++i) kref(k, n, n - i, n - i + 1) = K;
  int s = n + 1 - r, q = n + 1 - m;
  kref(k, n, s, q) = 1;
  kref(k, n, 1, q) = static_cast<u32>(kval(k, n, 1, q) + K - 1);
  kref(k, n, 1, s) = static_cast<u32>(kval(k, n, 1, s) + 1);
  return k;
}

// the composite on the unit-loop tuples; reports the stationary coefficient
inline FormulaReport verify_loop_composite(int n, u32 p, const std::vector<int>& a, int m,
                                           int r, u32 samples = 0, u64 seed = 12345) {
  KTuple k = loop_instance(n, p, a, m, r);
  PrincipalSeries ps(n, p, mu_zero(n, p, a));
  FormulaReport rep = verify_mirror_composite(ps, a, k, r, samples, seed);
  if (rep.ok) {
    KCombo combo{{k, 1u}};
    expand_minus(n, p, a, r, combo);
    expand_row(n, p, n + 1 - r, combo);
    auto it = combo.find(k);
    std::ostringstream os;
    os << "stationary coefficient " << (it == combo.end() ? 0u : it->second);
    rep.detail = os.str();
  }
  return rep;
}

// on tuples supported on the first-row tail and the rows past n+1-r the
// composite keeps a stationary part plus chain shells; reports the stationary
// coefficient next to the classical scalar
inline FormulaReport verify_stable_composite(int n, u32 p, const std::vector<int>& a,
                                             const KTuple& k, int r, u32 samples = 0,
                                             u64 seed = 12345) {
  if (r < 2 || r > n - 1) return hyp_fail("r out of range");
  int s = n + 1 - r;
  for (int i = 2; i <= s; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (kval(k, n, i, j)) return hyp_fail("rows 2..n+1-r must vanish");
  for (int j = 2; j <= s; ++j)
    if (kval(k, n, 1, j)) return hyp_fail("first-row slots 2..n+1-r must vanish");
  PrincipalSeries ps(n, p, mu_zero(n, p, a));
  FormulaReport rep = verify_mirror_composite(ps, a, k, r, samples, seed);
  if (rep.ok) {
    KCombo combo{{k, 1u}};
    expand_minus(n, p, a, r, combo);
    expand_row(n, p, n + 1 - r, combo);
    auto it = combo.find(k);
    std::ostringstream os;
    os << "stationary coefficient " << (it == combo.end() ? 0u : it->second)
       << ", classical scalar "
       << umod(static_cast<i64>(a[static_cast<size_t>(n - r)]) - a[0] - n + 2, p);
    rep.detail = os.str();
  }
  return rep;
}

// composite at the interpolating tuples: the next tuple appears with the
// square coefficient (K-s)^2
inline FormulaReport verify_ladder_composite(int n, u32 p, const std::vector<int>& a, int r,
                                             int s, u32 samples = 0, u64 seed = 12345) {
  if (r < 2 || r > n - 1) return hyp_fail("r out of range");
  u32 K = lambda_K(n, p, a);
  if (s < 0 || static_cast<u32>(s) >= K) return hyp_fail("s out of range");
  SharpTuples st = sharp_tuples(n, p, a, r - 1, s);
  SharpTuples nx = sharp_tuples(n, p, a, r - 1, s + 1);
  PrincipalSeries ps(n, p, mu_zero(n, p, a));
  FormulaReport rep = verify_mirror_composite(ps, a, st.at_rs, r, samples, seed);
  if (!rep.ok) return rep;
  KCombo combo{{st.at_rs, 1u}};
  expand_minus(n, p, a, r, combo);
  expand_row(n, p, n + 1 - r, combo);
  auto it = combo.find(nx.at_rs);
  u32 got = it == combo.end() ? 0 : it->second;
  u64 ks = umod(static_cast<i64>(K) - s, p);
  u32 want = static_cast<u32>(ks * ks % p);
  rep.ok = got != 0 && got == want;
  std::ostringstream os;
  os << "step coefficient " << got << ", square " << want;
  rep.detail = os.str();
  return rep;
}

// Z_{n-r} on the unit-loop tuples: raw application against the symbolic
// expansion; the cleared-loop tuple must appear
inline FormulaReport verify_z_step(int n, u32 p, const std::vector<int>& a, int m, int r,
                                   u32 samples = 0, u64 seed = 12345) {
  if (n - r < 1 || n - r > n - 2) return hyp_fail("Z index out of range");
  KTuple k = loop_instance(n, p, a, m, r);
  KCombo combo{{k, 1u}};
  std::string bad = expand_z(n, p, a, n - r, combo);
  if (!bad.empty()) return hyp_fail(bad);
  PrincipalSeries ps(n, p, mu_zero(n, p, a));
  auto rhs = kcombo_terms(combo);
  JacobiOperator src{Perm::longest(n), k};
  FormulaReport rep;
  if (samples) {
    rep = compare_lazy(ps, z_op(n, p, a, n - r), src, rhs, Perm::longest(n), samples, seed);
  } else {
    TableCache tc(ps);
    rep = compare_dense(ps, apply_z(tc, a, n - r, jacobi_vec(ps, src)),
                        combo_dense(ps, rhs, Perm::longest(n)));
  }
  if (!rep.ok) return rep;
  int si = n + 1 - r, q = n + 1 - m;
  KTuple k2 = k_shift(k, n, p, {{si, q, -1}, {1, si, -1}, {1, q, +1}});
  auto it = combo.find(k2);
  u32 got = it == combo.end() ? 0 : it->second;
  rep.ok = got != 0;
  std::ostringstream os;
  os << "moved coefficient " << got << ", constant " << cval(n, p, a, n - r);
  rep.detail = os.str();
  return rep;
}

// Z_{n-r} on the stable tuples: raw against symbolic; the tuple itself must
// survive
inline FormulaReport verify_z_scalar(int n, u32 p, const std::vector<int>& a, int r,
                                     u32 samples = 0, u64 seed = 12345) {
  if (r < 2 || r > n - 1) return hyp_fail("r out of range");
  if (n - r < 1 || n - r > n - 2) return hyp_fail("Z index out of range");
  KTuple k = k_sharp_r(n, p, a, r - 1);
  KCombo combo{{k, 1u}};
  std::string bad = expand_z(n, p, a, n - r, combo);
  if (!bad.empty()) return hyp_fail(bad);
  PrincipalSeries ps(n, p, mu_zero(n, p, a));
  auto rhs = kcombo_terms(combo);
  JacobiOperator src{Perm::longest(n), k};
  FormulaReport rep;
  if (samples) {
    rep = compare_lazy(ps, z_op(n, p, a, n - r), src, rhs, Perm::longest(n), samples, seed);
  } else {
    TableCache tc(ps);
    rep = compare_dense(ps, apply_z(tc, a, n - r, jacobi_vec(ps, src)),
                        combo_dense(ps, rhs, Perm::longest(n)));
  }
  if (!rep.ok) return rep;
  auto it = combo.find(k);
  u32 got = it == combo.end() ? 0 : it->second;
  rep.ok = got != 0;
  std::ostringstream os;
  os << "stationary coefficient " << got << ", constant " << cpval(n, p, a, n - r);
  rep.detail = os.str();
  return rep;
}

inline FormulaReport verify_constants(int n, u32 p, const std::vector<int>& a) {
  FormulaReport rep;
  for (int ell = 1; ell <= n - 1; ++ell) {
    u64 prod = 1, prodcp = 1;
    for (int k = 1; k <= ell - 1; ++k) {
      prod = prod *
             umod(static_cast<i64>(cpval(n, p, a, k)) - cval(n, p, a, k), p) % p;
      prodcp = prodcp * cpval(n, p, a, k) % p;
    }
    if (prod != cval(n, p, a, ell)) {
      rep.detail = "product identity failed";
      return rep;
    }
    if (ell <= n - 1) {
      u64 want = (umod(static_cast<i64>(a[static_cast<size_t>(ell)]) - a[0] - n + 2, p) *
                      prodcp +
                  cpval(n, p, a, ell)) %
                 p;
      if (dval(n, p, a, ell, ell - 1) != want) {
        rep.detail = "closed form for d failed";
        return rep;
      }
    }
  }
  rep.ok = true;
  rep.detail = "constants match";
  return rep;
}

// one rung: the Z-chain after the composite moves the interpolating tuple
// from s-1 to s with a nonzero coefficient
inline FormulaReport verify_ladder_step(int n, u32 p, const std::vector<int>& a, int r, int s,
                                        u32 samples = 0, u64 seed = 12345) {
  if (r < 1 || r > n - 2) return hyp_fail("r out of range");
  u32 K = lambda_K(n, p, a);
  if (s < 1 || static_cast<u32>(s) > K) return hyp_fail("s out of range");
  SharpTuples prev = sharp_tuples(n, p, a, r, s - 1);
  SharpTuples cur = sharp_tuples(n, p, a, r, s);
  KCombo combo{{prev.at_rs, 1u}};
  std::string bad = expand_minus(n, p, a, r + 1, combo);
  if (!bad.empty()) return hyp_fail(bad);
  expand_row(n, p, n - r, combo);
  for (int j = 1; j <= n - 2 - r; ++j) {
    bad = expand_z(n, p, a, j, combo);
    if (!bad.empty()) return hyp_fail(bad);
  }
  PrincipalSeries ps(n, p, mu_zero(n, p, a));
  auto rhs = kcombo_terms(combo);
  JacobiOperator src{Perm::longest(n), prev.at_rs};
  FormulaReport rep;
  if (samples) {
    GroupAlgebraOp P = ga_compose(x_row_op(n, p, n - r), x_minus_op(n, p, r + 1));
    for (int j = 1; j <= n - 2 - r; ++j) P = ga_compose(z_op(n, p, a, j), P);
    rep = compare_lazy(ps, P, src, rhs, Perm::longest(n), samples, seed);
  } else {
    TableCache tc(ps);
    Dense lhs = apply_x_minus(tc, r + 1, jacobi_vec(ps, src));
    lhs = apply_x_row(tc, n - r, lhs);
    for (int j = 1; j <= n - 2 - r; ++j) lhs = apply_z(tc, a, j, lhs);
    rep = compare_dense(ps, lhs, combo_dense(ps, rhs, Perm::longest(n)));
  }
  if (!rep.ok) return rep;
  auto it = combo.find(cur.at_rs);
  u32 got = it == combo.end() ? 0 : it->second;
  rep.ok = got != 0;
  std::ostringstream os;
  os << "rung coefficient " << got;
  rep.detail = os.str();
  return rep;
}

// clearing the (1,n) entry with one lowering operator
inline FormulaReport verify_row_annihilate(const PrincipalSeries& ps, const KTuple& k) {
  int n = ps.n;
  u32 k1n = kval(k, n, 1, n);
  if (k1n > ps.p - 2) return hyp_fail("entry at (1,n) must be <= p-2");
  TableCache tc(ps);
  Dense lhs =
      apply_x_alpha_m(tc, Root{1, n}, k1n, jacobi_vec(ps, JacobiOperator{Perm::longest(n), k}));
  KTuple k2 = k;
  kref(k2, n, 1, n) = 0;
  u32 c = ((k1n + 1) % 2) ? ps.p - 1 : 1;
  std::vector<ComboTerm> rhs{{k2, c}};
  return compare_dense(ps, lhs, combo_dense(ps, rhs, Perm::longest(n)));
}

// u_alpha(t) = -sum_m t^m X_{alpha,m} as operators, for t in F_p^x
inline FormulaReport verify_inversion(const PrincipalSeries& ps, Root alpha, i64 t,
                                      u64 seed = 12345) {
  FormulaReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<u32> d(0, ps.p - 1);
  Dense v(ps.dim);
  for (auto& x : v) x = d(rng);
  ActionTable tab = make_table(ps, u_alpha(ps.n, ps.p, alpha, t));
  Dense lhs = apply_table(tab, v, ps.p);
  TableCache tc(ps);
  Dense rhs(ps.dim, 0);
  u64 tm = 1;
  u32 tr = static_cast<u32>(umod(t, ps.p));
  for (u32 m = 0; m <= ps.p - 2; ++m) {
    axpy(rhs, static_cast<u32>(tm), apply_x_alpha_m(tc, alpha, m, v), ps.p);
    tm = tm * tr % ps.p;
  }
  rhs = scaled(rhs, ps.p - 1, ps.p);
  return compare_dense(ps, lhs, rhs);
}

// ---------------------------------------------------------------------------
// dispatcher
// ---------------------------------------------------------------------------

struct FormulaParams {
  int n = 0;
  u32 p = 0;
  std::vector<int> a;  // ascending
  std::optional<TorusCharacter> mu;
  KTuple k;
  std::optional<Perm> w;
  std::optional<Root> alpha;
  u32 m = 0;
  i64 t = 0;
  int r = 0;
  int s = 0;
  int mrow = 0;
  std::vector<u32> kvec;
  std::vector<u32> mvec;
  bool primed = false;
  u32 samples = 0;
  u64 seed = 12345;
};

inline TorusCharacter dispatch_mu(const FormulaParams& q, bool zero_chain) {
  if (q.mu) return *q.mu;
  if (static_cast<int>(q.a.size()) != q.n) throw usage_error("verify: need a or mu");
  if (zero_chain) return mu_zero(q.n, q.p, q.a);
  std::vector<int> dsc(q.a.rbegin(), q.a.rend());
  return TorusCharacter(q.p, dsc);
}

inline FormulaReport verify_operator_formula(const std::string& kind, const FormulaParams& q) {
  if (q.n < 2 || q.p < 3) throw usage_error("verify: bad rank or prime");
  if (kind == "constants") return verify_constants(q.n, q.p, q.a);
  if (kind == "intertwine-chain") return verify_intertwine_chain(q.n, q.p, q.a, q.mrow, q.primed);
  if (kind == "ladder-composite") return verify_ladder_composite(q.n, q.p, q.a, q.r, q.s, q.samples, q.seed);
  if (kind == "loop-composite") return verify_loop_composite(q.n, q.p, q.a, q.mrow, q.r, q.samples, q.seed);
  if (kind == "z-step") return verify_z_step(q.n, q.p, q.a, q.mrow, q.r, q.samples, q.seed);
  if (kind == "z-scalar") return verify_z_scalar(q.n, q.p, q.a, q.r, q.samples, q.seed);
  if (kind == "ladder-step")
    return verify_ladder_step(q.n, q.p, q.a, q.r, q.s, q.samples, q.seed);
  if (kind == "stable-composite")
    return verify_stable_composite(q.n, q.p, q.a, q.k, q.r, q.samples, q.seed);
  if (kind == "mirror-expansion" || kind == "mirror-composite" || kind == "row-expansion") {
    PrincipalSeries ps(q.n, q.p, dispatch_mu(q, true));
    if (kind == "mirror-expansion")
      return verify_mirror_expansion(ps, q.a, q.k, q.r, q.samples, q.seed);
    if (kind == "row-expansion") return verify_row_expansion(ps, q.k, q.r, q.samples, q.seed);
    return verify_mirror_composite(ps, q.a, q.k, q.r, q.samples, q.seed);
  }
  PrincipalSeries ps(q.n, q.p, dispatch_mu(q, false));
  if (kind == "lower-exponent") {
    if (!q.w || !q.alpha) throw usage_error("verify: need w and alpha");
    return verify_lower_exponent(ps, JacobiOperator{*q.w, q.k}, *q.alpha, q.m);
  }
  if (kind == "fixed-vector") {
    if (!q.w || !q.alpha) throw usage_error("verify: need w and alpha");
    return verify_fixed_vector(ps, JacobiOperator{*q.w, q.k}, *q.alpha, q.t);
  }
  if (kind == "superdiagonal-product") return verify_superdiag_product(ps, q.kvec, q.mvec);
  if (kind == "eigencharacter") {
    if (!q.w) throw usage_error("verify: need w");
    return verify_eigencharacter(ps, JacobiOperator{*q.w, q.k});
  }
  if (kind == "u-fixed-line") {
    if (!q.w) throw usage_error("verify: need w");
    return verify_u_fixed_line(ps, *q.w);
  }
  if (kind == "cell-basis") {
    if (!q.w) throw usage_error("verify: need w");
    return verify_cell_basis(ps, *q.w);
  }
  if (kind == "intertwine-step") return verify_intertwine_step(ps, q.kvec, q.r);
  if (kind == "top-column-lower") return verify_top_column_lower(ps, q.k, q.r);
  if (kind == "row-annihilate") return verify_row_annihilate(ps, q.k);
  if (kind == "inversion") {
    if (!q.alpha) throw usage_error("verify: need alpha");
    return verify_inversion(ps, *q.alpha, q.t, q.seed);
  }
  throw usage_error("verify: unknown kind " + kind);
}

}  // namespace glnp
