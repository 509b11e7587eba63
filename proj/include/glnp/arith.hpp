#pragma once
// Exact arithmetic substrate: F_p and small extensions, truncated p-adic
// integers (valuation + unit), truncated cyclotomic integers in Z[x]/(Phi_p, p^N),
// Teichmuller lifts, Gauss and Jacobi sums, and the unit constants kappa_n,
// P_n, eps* of the intertwining identity.

#include <algorithm>
#include <cassert>
#include <climits>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace glnp {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct value_error : std::domain_error {
  using std::domain_error::domain_error;
};
struct precision_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// word-size modular kit
// ---------------------------------------------------------------------------

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}
inline u64 addmod(u64 a, u64 b, u64 m) { return (a + b) % m; }
inline u64 submod(u64 a, u64 b, u64 m) { return (a + m - b % m) % m; }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// inverse of a mod m for gcd(a, m) = 1; extended Euclid
inline u64 invmod(u64 a, u64 m) {
  i64 t = 0, nt = 1;
  i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
  while (nr != 0) {
    i64 q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  if (r != 1) throw value_error("invmod: not a unit");
  if (t < 0) t += static_cast<i64>(m);
  return static_cast<u64>(t);
}

inline bool is_prime(u32 n) {
  if (n < 2) return false;
  for (u32 d = 2; static_cast<u64>(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// p^k as u64, guarded against overflow of the 62-bit working range
inline u64 ppow(u32 p, int k) {
  assert(k >= 0);
  u64 r = 1;
  for (int i = 0; i < k; ++i) {
    if (r > (u64{1} << 62) / p) throw precision_error("ppow: modulus exceeds 2^62");
    r *= p;
  }
  return r;
}

inline u64 umod(i64 x, u64 m) {
  i64 r = x % static_cast<i64>(m);
  if (r < 0) r += static_cast<i64>(m);
  return static_cast<u64>(r);
}

// binomial coefficient for 0 <= k <= n < p, reduced mod p
inline u32 binom_mod_p(u32 n, u32 k, u32 p) {
  if (k > n) return 0;
  u64 num = 1, den = 1;
  for (u32 i = 0; i < k; ++i) {
    num = num * ((n - i) % p) % p;
    den = den * ((i + 1) % p) % p;
  }
  return static_cast<u32>(num * invmod(den, p) % p);
}

inline u32 factorial_mod_p(u32 n, u32 p) {
  u64 r = 1;
  for (u32 i = 2; i <= n; ++i) r = r * (i % p) % p;
  return static_cast<u32>(r);
}

// ---------------------------------------------------------------------------
// F_p
// ---------------------------------------------------------------------------

struct Fp {
  u32 p = 0;
  u32 v = 0;

  Fp() = default;
  Fp(u32 p_, i64 x) : p(p_), v(static_cast<u32>(umod(x, p_))) {}

  static Fp zero(u32 p) { return Fp(p, 0); }
  static Fp one(u32 p) { return Fp(p, 1); }

  bool is_zero() const { return v == 0; }

  friend Fp operator+(Fp a, Fp b) {
    assert(a.p == b.p);
    return Fp(a.p, static_cast<i64>(a.v) + b.v);
  }
  friend Fp operator-(Fp a, Fp b) {
    assert(a.p == b.p);
    return Fp(a.p, static_cast<i64>(a.v) - b.v);
  }
  friend Fp operator*(Fp a, Fp b) {
    assert(a.p == b.p);
    return Fp(a.p, static_cast<i64>(static_cast<u64>(a.v) * b.v % a.p));
  }
  friend Fp operator-(Fp a) { return Fp(a.p, -static_cast<i64>(a.v)); }
  Fp inv() const {
    if (v == 0) throw value_error("Fp::inv of zero");
    return Fp(p, static_cast<i64>(invmod(v, p)));
  }
  friend Fp operator/(Fp a, Fp b) { return a * b.inv(); }
  friend bool operator==(Fp a, Fp b) { return a.p == b.p && a.v == b.v; }
  friend bool operator!=(Fp a, Fp b) { return !(a == b); }
  Fp pow(i64 e) const {
    if (v == 0) {
      if (e < 0) throw value_error("Fp::pow of zero to negative power");
      return e == 0 ? one(p) : zero(p);  // 0^0 := 1
    }
    u64 ee = umod(e, p - 1);
    return Fp(p, static_cast<i64>(powmod(v, ee, p)));
  }
};

// ---------------------------------------------------------------------------
// F_q = F_p[x]/(f), f monic irreducible of degree d (small d, search-built)
// ---------------------------------------------------------------------------

struct FqCtx {
  u32 p = 0;
  u32 d = 1;
  std::vector<u32> f;  // monic irreducible, f.size() == d+1, f[d] == 1

  FqCtx() = default;
  FqCtx(u32 p_, u32 d_) : p(p_), d(d_) {
    if (!is_prime(p_) || d_ < 1) throw usage_error("FqCtx: bad parameters");
    if (d == 1) {
      f = {0, 1};  // x
      return;
    }
    // deterministic scan for a monic irreducible of degree d
    std::vector<u32> cand(d + 1, 0);
    cand[d] = 1;
    while (true) {
      if (irreducible(cand)) {
        f = cand;
        return;
      }
      for (u32 i = 0;; ++i) {
        if (i == d) throw value_error("FqCtx: no irreducible found");
        if (++cand[i] < p) break;
        cand[i] = 0;
      }
    }
  }

  // Rabin test: f irreducible iff x^{p^d} == x mod f and gcd(x^{p^{d/q}} - x, f) = 1
  // for every prime divisor q of d
  bool irreducible(const std::vector<u32>& g) const {
    auto xp = frobenius_powers(g);
    if (xp[d] != canonical_x(g)) return false;
    for (u32 q = 2; q <= d; ++q)
      if (d % q == 0 && is_prime(q)) {
        auto diff = poly_sub(xp[d / q], canonical_x(g));
        if (poly_gcd(diff, g).size() > 1) return false;
      }
    return true;
  }

 private:
  std::vector<u32> canonical_x(const std::vector<u32>& g) const {
    std::vector<u32> x = {0, 1};
    return poly_mod(x, g);
  }
  std::vector<std::vector<u32>> frobenius_powers(const std::vector<u32>& g) const {
    std::vector<std::vector<u32>> xp(d + 1);
    xp[0] = canonical_x(g);
    for (u32 i = 0; i < d; ++i) xp[i + 1] = poly_powmod(xp[i], p, g);
    return xp;
  }
  std::vector<u32> poly_trim(std::vector<u32> a) const {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
  }
  std::vector<u32> poly_sub(std::vector<u32> a, const std::vector<u32>& b) const {
    a.resize(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = static_cast<u32>((a[i] + p - b[i]) % p);
    return poly_trim(a);
  }
  std::vector<u32> poly_mulmod(const std::vector<u32>& a, const std::vector<u32>& b,
                               const std::vector<u32>& g) const {
    std::vector<u32> c(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j)
        c[i + j] = static_cast<u32>((c[i + j] + static_cast<u64>(a[i]) * b[j]) % p);
    return poly_mod(c, g);
  }
  std::vector<u32> poly_mod(std::vector<u32> a, const std::vector<u32>& g) const {
    a = poly_trim(a);
    size_t dg = g.size() - 1;
    u64 lginv = invmod(g.back(), p);
    while (a.size() > dg) {
      u64 c = a.back() * lginv % p;
      size_t off = a.size() - 1 - dg;
      for (size_t i = 0; i <= dg; ++i)
        a[off + i] = static_cast<u32>((a[off + i] + p - c * g[i] % p) % p);
      a = poly_trim(a);
    }
    return a;
  }
  std::vector<u32> poly_powmod(std::vector<u32> a, u64 e, const std::vector<u32>& g) const {
    std::vector<u32> r = {1};
    while (e) {
      if (e & 1) r = poly_mulmod(r, a, g);
      a = poly_mulmod(a, a, g);
      e >>= 1;
    }
    return r;
  }
  std::vector<u32> poly_gcd(std::vector<u32> a, std::vector<u32> b) const {
    a = poly_trim(a);
    b = poly_trim(b);
    while (!b.empty()) {
      a = poly_mod(a, b);
      std::swap(a, b);
    }
    return a;
  }
};

struct Fq {
  const FqCtx* ctx = nullptr;
  std::vector<u32> c;  // size ctx->d

  Fq() = default;
  explicit Fq(const FqCtx& k) : ctx(&k), c(k.d, 0) {}
  Fq(const FqCtx& k, i64 x) : ctx(&k), c(k.d, 0) { c[0] = static_cast<u32>(umod(x, k.p)); }

  bool is_zero() const {
    return std::all_of(c.begin(), c.end(), [](u32 x) { return x == 0; });
  }
  static Fq gen(const FqCtx& k) {
    Fq g(k);
    if (k.d == 1)
      g.c[0] = 1;
    else
      g.c[1] = 1;
    return g;
  }

  friend Fq operator+(Fq a, const Fq& b) {
    assert(a.ctx == b.ctx);
    for (u32 i = 0; i < a.ctx->d; ++i) a.c[i] = (a.c[i] + b.c[i]) % a.ctx->p;
    return a;
  }
  friend Fq operator-(Fq a, const Fq& b) {
    assert(a.ctx == b.ctx);
    for (u32 i = 0; i < a.ctx->d; ++i) a.c[i] = (a.c[i] + a.ctx->p - b.c[i]) % a.ctx->p;
    return a;
  }
  friend Fq operator-(Fq a) {
    for (auto& x : a.c) x = x ? a.ctx->p - x : 0;
    return a;
  }
  friend Fq operator*(const Fq& a, const Fq& b) {
    assert(a.ctx == b.ctx);
    const auto& k = *a.ctx;
    std::vector<u32> prod(2 * k.d, 0);
    for (u32 i = 0; i < k.d; ++i)
      for (u32 j = 0; j < k.d; ++j)
        prod[i + j] = static_cast<u32>((prod[i + j] + static_cast<u64>(a.c[i]) * b.c[j]) % k.p);
    // reduce by f
    for (int t = static_cast<int>(2 * k.d) - 1; t >= static_cast<int>(k.d); --t) {
      u64 coef = prod[t];
      if (!coef) continue;
      prod[t] = 0;
      for (u32 i = 0; i < k.d; ++i)
        prod[t - k.d + i] =
            static_cast<u32>((prod[t - k.d + i] + (k.p - coef % k.p) * k.f[i]) % k.p);
    }
    Fq r(k);
    std::copy(prod.begin(), prod.begin() + k.d, r.c.begin());
    return r;
  }
  Fq pow(u64 e) const {
    Fq r(*ctx, 1), a = *this;
    while (e) {
      if (e & 1) r = r * a;
      a = a * a;
      e >>= 1;
    }
    return r;
  }
  Fq inv() const {
    if (is_zero()) throw value_error("Fq::inv of zero");
    u64 q = 1;
    for (u32 i = 0; i < ctx->d; ++i) q *= ctx->p;
    return pow(q - 2);
  }
  friend Fq operator/(const Fq& a, const Fq& b) { return a * b.inv(); }
  friend bool operator==(const Fq& a, const Fq& b) { return a.ctx == b.ctx && a.c == b.c; }
  friend bool operator!=(const Fq& a, const Fq& b) { return !(a == b); }
};

// ---------------------------------------------------------------------------
// PadicScalar: p^val * u with u a unit known mod p^nd.
// val may be negative (p^{2-n} and friends); exact zero is a distinct state.
// All divisions are by units or exact p-power cancellations; anything else throws.
// ---------------------------------------------------------------------------

struct PadicScalar {
  u32 p = 0;
  int val = kZeroVal;
  int nd = 0;  // number of valid p-adic digits of u
  u64 u = 0;   // 0 <= u < p^nd, u % p != 0 (unless exact zero)

  static constexpr int kZeroVal = INT_MAX;

  PadicScalar() = default;

  static PadicScalar zero(u32 p) {
    PadicScalar z;
    z.p = p;
    return z;
  }
  static PadicScalar one(u32 p, int nd) { return from_int(1, p, nd); }

  // exact integer, recorded to nd digits
  static PadicScalar from_int(i64 x, u32 p, int nd) {
    if (nd < 1) throw usage_error("PadicScalar: precision must be >= 1");
    if (x == 0) return zero(p);
    PadicScalar r;
    r.p = p;
    r.val = 0;
    bool neg = x < 0;
    u64 ax = neg ? static_cast<u64>(-x) : static_cast<u64>(x);
    while (ax % p == 0) {
      ax /= p;
      ++r.val;
    }
    r.nd = nd;
    u64 q = ppow(p, nd);
    r.u = ax % q;
    if (neg) r.u = q - r.u;
    return r;
  }

  // residue class x mod p^nd interpreted as a scalar; x == 0 becomes exact zero
  static PadicScalar from_residue(u64 x, u32 p, int nd) {
    if (nd < 1) throw usage_error("PadicScalar: precision must be >= 1");
    u64 q = ppow(p, nd);
    x %= q;
    if (x == 0) return zero(p);
    PadicScalar r;
    r.p = p;
    r.val = 0;
    while (x % p == 0) {
      x /= p;
      ++r.val;
    }
    r.nd = nd - r.val;
    r.u = x % ppow(p, r.nd);
    return r;
  }

  static PadicScalar p_power(u32 p, int k, int nd) {
    PadicScalar r;
    r.p = p;
    r.val = k;
    r.nd = nd;
    r.u = 1;
    return r;
  }

  bool is_zero() const { return val == kZeroVal; }
  bool is_unit() const { return !is_zero() && val == 0; }

  int valuation() const {
    if (is_zero()) throw value_error("valuation of exact zero");
    return val;
  }

  // residue of the full value mod p^k (needs val >= 0 and enough digits)
  u64 residue(int k) const {
    if (is_zero()) return 0;
    if (val < 0) throw value_error("residue of a scalar with negative valuation");
    if (val >= k) return 0;
    if (nd < k - val) throw precision_error("residue: insufficient digits");
    return mulmod(u % ppow(p, k - val), ppow(p, val), ppow(p, k));
  }
  u64 unit_mod(int k) const {
    if (is_zero()) throw value_error("unit of exact zero");
    if (nd < k) throw precision_error("unit_mod: insufficient digits");
    return u % ppow(p, k);
  }

  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    assert(a.p == b.p);
    if (a.is_zero() || b.is_zero()) return zero(a.p);
    PadicScalar r;
    r.p = a.p;
    r.val = a.val + b.val;
    r.nd = std::min(a.nd, b.nd);
    r.u = mulmod(a.u, b.u, ppow(a.p, r.nd));
    return r;
  }
  friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
    assert(a.p == b.p);
    if (b.is_zero()) throw value_error("p-adic division by zero");
    if (a.is_zero()) return zero(a.p);
    PadicScalar r;
    r.p = a.p;
    r.val = a.val - b.val;
    r.nd = std::min(a.nd, b.nd);
    u64 q = ppow(a.p, r.nd);
    r.u = mulmod(a.u % q, invmod(b.u % q, q), q);
    return r;
  }
  friend PadicScalar operator-(PadicScalar a) {
    if (a.is_zero()) return a;
    a.u = ppow(a.p, a.nd) - a.u;
    return a;
  }
  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    assert(a.p == b.p);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const PadicScalar& lo = a.val <= b.val ? a : b;
    const PadicScalar& hi = a.val <= b.val ? b : a;
    int delta = hi.val - lo.val;
    if (delta >= lo.nd) return lo;  // hi is invisible at lo's precision
    int m = std::min(lo.nd, delta + hi.nd);
    u64 q = ppow(lo.p, m);
    u64 s = addmod(lo.u % q, mulmod(hi.u % q, ppow(lo.p, delta), q), q);
    if (s == 0)
      throw precision_error("p-adic addition cancelled beyond known precision");
    PadicScalar r;
    r.p = lo.p;
    r.val = lo.val;
    r.nd = m;
    r.u = s;
    while (r.u % r.p == 0) {
      r.u /= r.p;
      ++r.val;
      --r.nd;
    }
    r.u %= ppow(r.p, r.nd);
    return r;
  }
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }

  // equality to the overlap of known digits; distinct valuations are distinct values
  friend bool operator==(const PadicScalar& a, const PadicScalar& b) {
    assert(a.p == b.p);
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    if (a.val != b.val) return false;
    int m = std::min(a.nd, b.nd);
    if (m < 1) throw precision_error("p-adic comparison with no overlapping digits");
    u64 q = ppow(a.p, m);
    return a.u % q == b.u % q;
  }
  friend bool operator!=(const PadicScalar& a, const PadicScalar& b) { return !(a == b); }
};

// ---------------------------------------------------------------------------
// Teichmuller lift: the fixed point of x -> x^p in Z/p^nd over the residue a
// ---------------------------------------------------------------------------

inline u64 teichmuller_residue(u32 a, u32 p, int nd) {
  if (nd < 1) throw usage_error("teichmuller: precision must be >= 1");
  u64 q = ppow(p, nd);
  u64 x = a % p;
  if (x == 0) return 0;
  for (int i = 0; i < nd + 1; ++i) {
    u64 nx = powmod(x, p, q);
    if (nx == x) break;
    x = nx;
  }
  assert(powmod(x, p, q) == x);
  return x;
}

inline PadicScalar teichmuller(u32 a, u32 p, int nd) {
  return PadicScalar::from_residue(teichmuller_residue(a, p, nd), p, nd);
}

// t^e mod p^nd with the global convention 0^0 := 1
inline u64 powmod00(u64 t, u64 e, u64 q) {
  if (t == 0) return e == 0 ? 1 % q : 0;
  return powmod(t, e, q);
}

// ---------------------------------------------------------------------------
// CycloScalar: Z[x]/(Phi_p(x), p^nd), power basis {1, x, ..., x^{p-2}},
// xi := x, eps := xi - 1, v_eps(p) = p-1.
// ---------------------------------------------------------------------------

struct CycloScalar {
  u32 p = 0;
  int nd = 0;
  std::vector<u64> c;  // length p-1, entries mod p^nd

  CycloScalar() = default;
  CycloScalar(u32 p_, int nd_) : p(p_), nd(nd_), c(p_ - 1, 0) {
    if (nd_ < 1) throw usage_error("CycloScalar: precision must be >= 1");
  }

  u64 q() const { return ppow(p, nd); }

  static CycloScalar from_int(i64 x, u32 p, int nd) {
    CycloScalar r(p, nd);
    r.c[0] = umod(x, r.q());
    return r;
  }
  static CycloScalar xi_pow(u32 k, u32 p, int nd) {
    CycloScalar r(p, nd);
    r.add_xi_pow(k, 1);
    return r;
  }
  static CycloScalar from_padic(const PadicScalar& a, int nd) {
    CycloScalar r(a.p, nd);
    r.c[0] = a.residue(nd);
    return r;
  }

  // += coef * xi^k, any k >= 0
  void add_xi_pow(u64 k, u64 coef) {
    k %= p;
    coef %= q();
    if (k <= p - 2) {
      c[k] = addmod(c[k], coef, q());
    } else {  // xi^{p-1} = -(1 + xi + ... + xi^{p-2})
      for (u32 i = 0; i + 1 < p; ++i) c[i] = submod(c[i], coef, q());
    }
  }

  bool is_zero() const {
    return std::all_of(c.begin(), c.end(), [](u64 x) { return x == 0; });
  }

  friend CycloScalar operator+(CycloScalar a, const CycloScalar& b) {
    assert(a.p == b.p && a.nd == b.nd);
    for (u32 i = 0; i + 1 < a.p; ++i) a.c[i] = addmod(a.c[i], b.c[i], a.q());
    return a;
  }
  friend CycloScalar operator-(CycloScalar a, const CycloScalar& b) {
    assert(a.p == b.p && a.nd == b.nd);
    for (u32 i = 0; i + 1 < a.p; ++i) a.c[i] = submod(a.c[i], b.c[i], a.q());
    return a;
  }
  friend CycloScalar operator*(const CycloScalar& a, const CycloScalar& b) {
    assert(a.p == b.p && a.nd == b.nd);
    const u32 p = a.p;
    const u64 q = a.q();
    // cyclic convolution in Z[x]/(x^p - 1), then x^{p-1} -> -(1 + ... + x^{p-2})
    std::vector<u64> d(p, 0);
    for (u32 i = 0; i + 1 < p; ++i) {
      if (!a.c[i]) continue;
      for (u32 j = 0; j + 1 < p; ++j) {
        if (!b.c[j]) continue;
        u32 k = (i + j) % p;
        d[k] = addmod(d[k], mulmod(a.c[i], b.c[j], q), q);
      }
    }
    CycloScalar r(p, a.nd);
    for (u32 i = 0; i + 1 < p; ++i) r.c[i] = submod(d[i], d[p - 1], q);
    return r;
  }
  friend bool operator==(const CycloScalar& a, const CycloScalar& b) {
    assert(a.p == b.p);
    int m = std::min(a.nd, b.nd);
    u64 qm = ppow(a.p, m);
    for (u32 i = 0; i + 1 < a.p; ++i)
      if (a.c[i] % qm != b.c[i] % qm) return false;
    return true;
  }
  friend bool operator!=(const CycloScalar& a, const CycloScalar& b) { return !(a == b); }

  // coefficients in the basis {1, eps, ..., eps^{p-2}}: b_j = sum_i C(i,j) c_i
  std::vector<u64> eps_basis() const {
    const u64 qq = q();
    std::vector<std::vector<u64>> pascal(p - 1, std::vector<u64>(p - 1, 0));
    for (u32 i = 0; i + 1 < p; ++i) {
      pascal[i][0] = 1;
      for (u32 j = 1; j <= i; ++j)
        pascal[i][j] = addmod(pascal[i - 1][j - 1], j <= i - 1 ? pascal[i - 1][j] : 0, qq);
    }
    std::vector<u64> b(p - 1, 0);
    for (u32 j = 0; j + 1 < p; ++j)
      for (u32 i = j; i + 1 < p; ++i)
        b[j] = addmod(b[j], mulmod(pascal[i][j], c[i], qq), qq);
    return b;
  }

  // v_eps via min_j (j + (p-1) v_p(b_j)): the candidates are distinct mod p-1,
  // so the minimum is achieved once and no cancellation can hide it
  int eps_valuation() const {
    if (is_zero()) throw value_error("eps valuation of zero");
    auto b = eps_basis();
    long best = LONG_MAX;
    for (u32 j = 0; j + 1 < p; ++j) {
      if (!b[j]) continue;
      int vp = 0;
      u64 x = b[j];
      while (x % p == 0) {
        x /= p;
        ++vp;
      }
      best = std::min(best, static_cast<long>(j) + static_cast<long>(p - 1) * vp);
    }
    if (best == LONG_MAX) throw precision_error("eps valuation beyond known precision");
    return static_cast<int>(best);
  }

  // the class of (this / eps^{v_eps}) mod (eps), an element of F_p;
  // uses p = -eps^{p-1} * (1 + O(eps))
  u32 eps_unit_mod_p() const {
    int v = eps_valuation();
    auto b = eps_basis();
    for (u32 j = 0; j + 1 < p; ++j) {
      if (!b[j]) continue;
      int vp = 0;
      u64 x = b[j];
      while (x % p == 0) {
        x /= p;
        ++vp;
      }
      if (static_cast<long>(j) + static_cast<long>(p - 1) * vp == v) {
        u64 unit = x % p;
        if (vp % 2) unit = (p - unit) % p;  // each p/eps^{p-1} contributes -1 mod eps
        return static_cast<u32>(unit);
      }
    }
    throw value_error("eps_unit_mod_p: unreachable");
  }
};

// ---------------------------------------------------------------------------
// Gauss and Jacobi sums
// ---------------------------------------------------------------------------

// G(a) = sum_{lambda in F_p} [lambda]^a xi^lambda, 0 <= a <= p-1
inline CycloScalar gauss_sum(u32 a, u32 p, int nd) {
  if (a > p - 1) throw usage_error("gauss_sum: exponent out of range");
  CycloScalar g(p, nd);
  u64 q = g.q();
  for (u32 lam = 0; lam < p; ++lam)
    g.add_xi_pow(lam, powmod00(teichmuller_residue(lam, p, nd), a, q));
  return g;
}

// J(a,b) = sum_{lambda in F_p} [lambda]^a [1-lambda]^b, 0 <= a,b <= p-1
inline PadicScalar jacobi_sum(u32 a, u32 b, u32 p, int nd) {
  if (a > p - 1 || b > p - 1) throw usage_error("jacobi_sum: exponent out of range");
  u64 q = ppow(p, nd);
  u64 s = 0;
  for (u32 lam = 0; lam < p; ++lam) {
    u64 ta = powmod00(teichmuller_residue(lam, p, nd), a, q);
    u64 tb = powmod00(teichmuller_residue((p + 1 - lam) % p, p, nd), b, q);
    s = addmod(s, mulmod(ta, tb, q), q);
  }
  return PadicScalar::from_residue(s, p, nd);
}

// ---------------------------------------------------------------------------
// the unit constants of the intertwining identity
// ---------------------------------------------------------------------------

// x reduced into [0, p-2] mod p-1
inline u32 bracket1(i64 x, u32 p) {
  if (p < 3) throw usage_error("bracket1: p must be >= 3");
  return static_cast<u32>(umod(x, p - 1));
}

// a-tuple in ascending storage a[0] = a_0, ..., a[n-1] = a_{n-1}
inline bool tuple_k_generic_lowest(const std::vector<int>& a, int k, u32 p) {
  int n = static_cast<int>(a.size());
  for (int i = 1; i < n; ++i)
    if (a[i] - a[i - 1] <= k) return false;
  return a[n - 1] - a[0] < static_cast<int>(p) - k;
}

struct ConstantBundle {
  int n = 0;
  std::vector<int> a;  // ascending: a[0] = a_0
  PadicScalar kappa;
  PadicScalar Pn;
  int eps_star = 1;
};

// kappa_n = (-1)^{(n-2)(a_0 - a_{n-1})} p^{2-n} prod_{m=1}^{n-2} Y_m with
// Y_m = J([a_0-a_m]_1, [a_m-a_{m+1}]_1 + n-2) * J(a_{n-1}-a_m, [a_{m-1}-a_{n-1}]_1 + n-2)
inline ConstantBundle constants(int n, const std::vector<int>& a_asc, u32 p, int nd) {
  if (static_cast<int>(a_asc.size()) != n || n < 3) throw usage_error("constants: bad tuple");
  if (!tuple_k_generic_lowest(a_asc, n, p))
    throw value_error("constants: tuple is not n-generic in the lowest alcove");
  ConstantBundle out;
  out.n = n;
  out.a = a_asc;
  const auto& a = a_asc;

  PadicScalar prod = PadicScalar::one(p, nd);
  for (int m = 1; m <= n - 2; ++m) {
    u32 e1 = bracket1(a[0] - a[m], p);
    u32 e2 = bracket1(a[m] - a[m + 1], p) + static_cast<u32>(n) - 2;
    u32 e3 = static_cast<u32>(a[n - 1] - a[m]);
    u32 e4 = bracket1(a[m - 1] - a[n - 1], p) + static_cast<u32>(n) - 2;
    prod = prod * jacobi_sum(e1, e2, p, nd) * jacobi_sum(e3, e4, p, nd);
  }
  int sign = ((static_cast<long>(n) - 2) * (a[0] - a[n - 1])) % 2 ? -1 : 1;
  out.kappa = prod * PadicScalar::p_power(p, 2 - n, nd);
  if (sign < 0) out.kappa = -out.kappa;
  if (out.kappa.is_zero() || out.kappa.valuation() != 0)
    throw value_error("constants: kappa_n is not a unit (tuple too degenerate)");

  i64 num = 1, den = 1;
  for (int k = 1; k <= n - 2; ++k)
    for (int j = 0; j <= n - 3; ++j) {
      num *= a[k] - a[n - 1] + j;
      den *= a[0] - a[k] + j;
    }
  if (num == 0 || den == 0) throw value_error("constants: P_n degenerate");
  out.Pn = PadicScalar::from_int(num, p, nd) / PadicScalar::from_int(den, p, nd);
  if (!out.Pn.is_unit()) throw value_error("constants: P_n is not a unit");

  int es = 1;
  for (int m = 1; m <= n - 2; ++m)
    if ((a[0] - a[m]) % 2) es = -es;
  out.eps_star = es;
  return out;
}

// kappa_n == eps* P_n mod p
inline bool check_kappa_congruence(int n, const std::vector<int>& a_asc, u32 p, int nd) {
  if (nd < 2) throw usage_error("check_kappa_congruence: precision must be >= 2");
  auto cb = constants(n, a_asc, p, nd);
  u64 lhs = cb.kappa.unit_mod(1);
  u64 rhs = cb.Pn.unit_mod(1);
  if (cb.eps_star < 0) rhs = (p - rhs) % p;
  return lhs == rhs;
}

}  // namespace glnp
