#pragma once
// Weight and character combinatorics: genericity predicates, the distinguished
// characters mu*, mu_1, mu_1', the parabolic case tables of the weight
// elimination section, r-profiles and inertial type exponents.
//
// Indexing: subscripted tuples (a_i, b_i, c_i, r_i, k_i) are stored ascending
// by subscript, so v[i] holds the entry with subscript i. Weight holds the
// displayed position order (d_1, ..., d_n). The two differ by a reversal.

#include <utility>

#include "glnp/arith.hpp"

namespace glnp {

inline std::vector<int> reversed(std::vector<int> t) {
  std::reverse(t.begin(), t.end());
  return t;
}

struct Weight {
  std::vector<int> d;  // (d_1, ..., d_n)

  Weight() = default;
  explicit Weight(std::vector<int> entries) : d(std::move(entries)) {}
  int n() const { return static_cast<int>(d.size()); }

  friend bool operator==(const Weight& a, const Weight& b) { return a.d == b.d; }
  friend bool operator!=(const Weight& a, const Weight& b) { return !(a == b); }
};

struct TorusCharacter {
  u32 p = 0;
  std::vector<u32> e;  // entries reduced to [0, p-2]

  TorusCharacter() = default;
  TorusCharacter(u32 p_, const std::vector<int>& raw) : p(p_) {
    e.reserve(raw.size());
    for (int x : raw) e.push_back(bracket1(x, p_));
  }

  friend bool operator==(const TorusCharacter& a, const TorusCharacter& b) {
    return a.p == b.p && a.e == b.e;
  }
  friend bool operator!=(const TorusCharacter& a, const TorusCharacter& b) {
    return !(a == b);
  }
};

inline TorusCharacter reduce_weight(const Weight& w, u32 p) {
  return TorusCharacter(p, w.d);
}

struct RProfile {
  std::vector<int> r;  // r[i] = r_i

  int n() const { return static_cast<int>(r.size()); }
  int sum() const { return std::accumulate(r.begin(), r.end(), 0); }
};

inline Weight eta(int n) {
  std::vector<int> d(n);
  for (int i = 0; i < n; ++i) d[i] = n - 1 - i;
  return Weight(d);
}

// ---------------------------------------------------------------------------
// genericity predicates
// ---------------------------------------------------------------------------

// ascending a-tuple: gaps > k and total spread < p - k
inline bool is_k_generic_lowest(const std::vector<int>& a_asc, int k, u32 p) {
  return tuple_k_generic_lowest(a_asc, k, p);
}

// general weights: every root pairing avoids [-k, k] mod p
inline bool is_k_generic(const Weight& w, int k, u32 p) {
  for (int i = 0; i < w.n(); ++i)
    for (int j = i + 1; j < w.n(); ++j) {
      u64 res = umod(w.d[i] - w.d[j], p);
      if (res <= static_cast<u64>(k) || res >= p - static_cast<u64>(k)) return false;
    }
  return true;
}

// ascending c-tuple: gaps > n-1 and spread < (p-1) - (n-1)
inline bool is_generic(const std::vector<int>& c_asc, u32 p) {
  int n = static_cast<int>(c_asc.size());
  for (int i = 1; i < n; ++i)
    if (c_asc[i] - c_asc[i - 1] <= n - 1) return false;
  return c_asc[n - 1] - c_asc[0] < static_cast<int>(p) - n;
}

inline bool is_strongly_generic(const std::vector<int>& c_asc, u32 p) {
  int n = static_cast<int>(c_asc.size());
  return is_generic(c_asc, p) &&
         c_asc[n - 1] - c_asc[0] < static_cast<int>(p) - 1 - (3 * n - 5);
}

// ---------------------------------------------------------------------------
// distinguished characters
// ---------------------------------------------------------------------------

// (a_{n-1}-n+2, a_{n-2}, ..., a_1, a_0+n-2)
inline Weight mu_star(const std::vector<int>& a_asc) {
  int n = static_cast<int>(a_asc.size());
  std::vector<int> d = reversed(a_asc);
  d[0] -= n - 2;
  d[n - 1] += n - 2;
  return Weight(d);
}

// mu_1 = (a_1, a_2, ..., a_{n-1}, a_0) and mu_1' = (a_{n-1}, a_0, a_1, ..., a_{n-2})
inline std::pair<Weight, Weight> mu1_pair(const std::vector<int>& a_asc) {
  int n = static_cast<int>(a_asc.size());
  std::vector<int> m1, m1p;
  for (int i = 1; i < n; ++i) m1.push_back(a_asc[i]);
  m1.push_back(a_asc[0]);
  m1p.push_back(a_asc[n - 1]);
  for (int i = 0; i < n - 1; ++i) m1p.push_back(a_asc[i]);
  return {Weight(m1), Weight(m1p)};
}

// the fixed p-restricted lift of mu_0^{w0}: (a_0+p-1, a_{n-2}, ..., a_1, a_{n-1}-p+1)
inline Weight mu0_w0_lift(const std::vector<int>& a_asc, u32 p) {
  int n = static_cast<int>(a_asc.size());
  std::vector<int> d;
  d.push_back(a_asc[0] + static_cast<int>(p) - 1);
  for (int i = n - 2; i >= 1; --i) d.push_back(a_asc[i]);
  d.push_back(a_asc[n - 1] - static_cast<int>(p) + 1);
  return Weight(d);
}

// b_k = -c_{n-1-k}
inline std::vector<int> b_from_c(const std::vector<int>& c_asc) {
  int n = static_cast<int>(c_asc.size());
  std::vector<int> b(n);
  for (int k = 0; k < n; ++k) b[k] = -c_asc[n - 1 - k];
  return b;
}

struct SpecialCharacters {
  Weight mu_box;       // (b_{n-1}, ..., b_0)
  Weight mu_ij;        // (x_{n-1}, ..., x_0)
  Weight mu_ij_prime;  // (x'_{n-1}, ..., x'_0)
  Weight mu_box_ij;    // (y_{n-1}, ..., y_0)
};

inline SpecialCharacters special_characters(const std::vector<int>& b_asc, int i1,
                                            int j1) {
  int n = static_cast<int>(b_asc.size());
  if (!(0 <= i1 && i1 + 1 < j1 && j1 <= n - 1))
    throw usage_error("special_characters: need 0 <= i1 < i1+1 < j1 <= n-1");
  const auto& b = b_asc;
  std::vector<int> x(n), xp(n), y(n);
  for (int j = 0; j < n; ++j) {
    if (j > j1 || j < i1) {
      x[j] = b[j];
      xp[j] = b[j];
    } else if (j == i1) {
      x[j] = b[i1] - j1 + i1 + 1;
    } else if (j == i1 + 1) {
      x[j] = b[j1] + j1 - i1 - 1;
    } else {  // i1+1 < j <= j1
      x[j] = b[j1 + i1 + 1 - j];
    }
    if (j <= j1 && j >= i1) {
      if (j == j1)
        xp[j] = b[j1] + j1 - i1 - 1;
      else if (j == j1 - 1)
        xp[j] = b[i1] - j1 + i1 + 1;
      else  // i1 <= j < j1-1
        xp[j] = b[j1 + i1 - 1 - j];
    }
    if (j == j1)
      y[j] = b[i1] - j1 + i1 + 1;
    else if (j == i1)
      y[j] = b[j1] + j1 - i1 - 1;
    else
      y[j] = b[j];
  }
  SpecialCharacters out;
  out.mu_box = Weight(reversed(b_asc));
  out.mu_ij = Weight(reversed(x));
  out.mu_ij_prime = Weight(reversed(xp));
  out.mu_box_ij = Weight(reversed(y));
  return out;
}

// ---------------------------------------------------------------------------
// r-profiles and inertial type exponents
// ---------------------------------------------------------------------------

inline RProfile r_profile_base(int n) {
  if (n < 2) throw usage_error("r_profile_base: need n >= 2");
  RProfile out;
  out.r.resize(n);
  out.r[0] = n - 2;
  for (int i = 1; i < n - 1; ++i) out.r[i] = i;
  out.r[n - 1] = 1;
  return out;
}

inline RProfile r_profile(int n, int i0, int j0) {
  if (!(0 <= j0 && j0 + 1 < i0 && i0 <= n - 1))
    throw usage_error("r_profile: need 0 <= j0 < j0+1 < i0 <= n-1");
  RProfile out;
  out.r.resize(n);
  for (int i = 0; i < n; ++i) out.r[i] = i;
  out.r[i0] = j0 + 1;
  out.r[j0] = i0 - 1;
  return out;
}

// k_i = [c_i + i - r_i]_1
inline TorusCharacter galois_type_exponents(const std::vector<int>& c_asc,
                                            const RProfile& r, u32 p) {
  if (c_asc.size() != r.r.size())
    throw usage_error("galois_type_exponents: size mismatch");
  std::vector<int> raw(c_asc.size());
  for (size_t i = 0; i < c_asc.size(); ++i)
    raw[i] = c_asc[i] + static_cast<int>(i) - r.r[i];
  return TorusCharacter(p, raw);
}

}  // namespace glnp
