// dev probes; not part of the shipped tree
#include <cstdio>
#include <deque>
#include <set>
#include <string>
#include <numeric>

#include "glnp/psreps.hpp"

using namespace glnp;

// full expansion of a w0-block vector in the S_{k,w0} basis via per-axis
// inverse Vandermonde over the big-cell coordinates
struct Spectrum {
  const PrincipalSeries& ps;
  size_t w0i;
  std::vector<std::vector<u32>> vinv;  // p x p inverse of V[x][e]=x^e

  explicit Spectrum(const PrincipalSeries& ps_) : ps(ps_), w0i(ps_.ws.size() - 1) {
    u32 p = ps.p;
    std::vector<std::vector<u32>> m(p, std::vector<u32>(2 * p, 0));
    for (u32 x = 0; x < p; ++x) {
      for (u32 e = 0; e < p; ++e) m[x][e] = static_cast<u32>(powmod(x, e, p));
      m[x][p + x] = 1;
    }
    for (u32 c = 0; c < p; ++c) {
      u32 pr = c;
      while (!m[pr][c]) ++pr;
      std::swap(m[c], m[pr]);
      u64 inv = invmod(m[c][c], p);
      for (u32 j = 0; j < 2 * p; ++j) m[c][j] = static_cast<u32>(m[c][j] * inv % p);
      for (u32 r = 0; r < p; ++r)
        if (r != c && m[r][c]) {
          u64 f = p - m[r][c];
          for (u32 j = 0; j < 2 * p; ++j)
            m[r][j] = static_cast<u32>((m[r][j] + f * m[c][j]) % p);
        }
    }
    vinv.assign(p, std::vector<u32>(p));
    for (u32 r = 0; r < p; ++r)
      for (u32 j = 0; j < p; ++j) vinv[r][j] = m[r][p + j];
  }

  // returns {tuple, coeff}; flags support off the w0 block
  std::vector<std::pair<KTuple, u32>> run(const Dense& v, bool* leak = nullptr) const {
    u32 p = ps.p;
    int n = ps.n;
    u64 base = ps.offset[w0i];
    const auto& roots = ps.rfree[w0i];
    size_t nr = roots.size();
    u64 cnt = ppow(p, static_cast<int>(nr));
    if (leak) *leak = false;
    for (u64 c = 0; c < ps.dim; ++c)
      if (v[c] && (c < base || c >= base + cnt)) {
        if (leak) *leak = true;
        return {};
      }
    std::vector<u32> g(cnt, 0);
    for (u64 loc = 0; loc < cnt; ++loc) {
      if (!v[base + loc]) continue;
      MatFp u = ps.u_of(w0i, loc);
      MatFp a = u.inverse();
      u64 idx = 0;
      for (size_t d = nr; d-- > 0;) idx = idx * p + a(roots[d].i, roots[d].j);
      g[idx] = v[base + loc];
    }
    std::vector<u32> cur = std::move(g);
    u64 stride = 1;
    for (size_t ax = 0; ax < nr; ++ax) {
      std::vector<u32> nxt(cnt, 0);
      u64 outer = cnt / (stride * p);
      for (u64 o = 0; o < outer; ++o)
        for (u64 s = 0; s < stride; ++s) {
          u64 at = o * stride * p + s;
          for (u32 e = 0; e < p; ++e) {
            u64 acc = 0;
            for (u32 x = 0; x < p; ++x)
              acc += static_cast<u64>(vinv[e][x]) * cur[at + x * stride];
            nxt[at + e * stride] = static_cast<u32>(acc % p);
          }
        }
      cur = std::move(nxt);
      stride *= p;
    }
    std::vector<std::pair<KTuple, u32>> out;
    for (u64 idx = 0; idx < cnt; ++idx) {
      if (!cur[idx]) continue;
      KTuple k = ktuple_zero(n);
      u64 rest = idx;
      for (size_t d = 0; d < nr; ++d) {
        kref(k, n, roots[d].i, roots[d].j) = static_cast<u32>(rest % p);
        rest /= p;
      }
      out.emplace_back(std::move(k), cur[idx]);
    }
    return out;
  }
};

// one-line decomposition as deltas from the input tuple
static void show_delta(const PrincipalSeries& ps, const KTuple& in,
                       const std::vector<std::pair<KTuple, u32>>& dec, bool leak) {
  if (leak) {
    std::printf(" LEAK\n");
    return;
  }
  if (dec.empty()) {
    std::printf(" 0\n");
    return;
  }
  int n = ps.n;
  for (auto& [k, c] : dec) {
    std::printf("  %u*[", c);
    bool first = true;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        int d = static_cast<int>(kval(k, n, i, j)) - static_cast<int>(kval(in, n, i, j));
        if (d) {
          std::printf("%s%+d@%d%d", first ? "" : " ", d, i, j);
          first = false;
        }
      }
    if (first) std::printf("id");
    std::printf("]");
  }
  std::printf("\n");
}

static Dense xop(const PrincipalSeries& ps, const ActionTable& t1, const Dense& v,
                 u32 expo) {
  // sum_{t=1}^{p-1} t^expo [I+tE] v  given the table of [I+E]
  Dense out(ps.dim, 0), work = v;
  for (u32 t = 1; t <= ps.p - 1; ++t) {
    work = apply_table(t1, work, ps.p);
    axpy(out, static_cast<u32>(powmod(t, expo, ps.p)), work, ps.p);
  }
  return out;
}

static ActionTable transvection_table(const PrincipalSeries& ps, int i, int j) {
  MatFp g = MatFp::identity(ps.n, ps.p);
  g(i, j) = 1;
  return make_table(ps, g);
}

struct Cand {
  const char* name;
  std::vector<std::array<int, 3>> delta;  // {i,j,shift}
};

static void lazy_fit(const PrincipalSeries& ps, int r, const KTuple& k,
                     const std::vector<Cand>& cands, std::mt19937_64& rng) {
  int n = ps.n;
  u32 p = ps.p;
  Perm w0 = Perm::longest(n);
  size_t J = cands.size();
  std::vector<KTuple> kt;
  std::vector<bool> ok;
  for (auto& c : cands) {
    KTuple k2 = k;
    bool good = true;
    for (auto& d : c.delta) {
      int v2 = static_cast<int>(k2[kidx(n, d[0], d[1])]) + d[2];
      if (v2 < 0 || v2 >= static_cast<int>(p)) good = false;
      else k2[kidx(n, d[0], d[1])] = static_cast<u32>(v2);
    }
    kt.push_back(k2);
    ok.push_back(good);
  }
  size_t M = 2 * J + 12;
  std::vector<std::vector<u32>> rows;
  u32 offcell_bad = 0, offcell_tot = 0;
  while (rows.size() < M) {
    MatFp y = random_gl(rng, n, p);
    u64 lhs = 0;
    for (u32 t = 1; t < p; ++t) {
      MatFp g = MatFp::identity(n, p);
      g(n + 1 - r, 1) = t;
      lhs += static_cast<u64>(powmod(t, p - 2, p)) *
             jacobi_eval(ps, {w0, k}, y * g);
    }
    BruhatForm f = bruhat_normal_form(y);
    if (!(f.w == w0)) {
      ++offcell_tot;
      if (lhs % p) ++offcell_bad;
      continue;
    }
    std::vector<u32> row;
    for (size_t j = 0; j < J; ++j)
      row.push_back(ok[j] ? jacobi_eval(ps, {w0, kt[j]}, y) : 0);
    row.push_back(static_cast<u32>(lhs % p));
    rows.push_back(std::move(row));
  }
  size_t R = rows.size();
  std::vector<int> piv(J, -1);
  size_t rr = 0;
  for (size_t c = 0; c < J && rr < R; ++c) {
    size_t sel = rr;
    while (sel < R && !rows[sel][c]) ++sel;
    if (sel == R) continue;
    std::swap(rows[rr], rows[sel]);
    u64 inv = invmod(rows[rr][c], p);
    for (auto& x : rows[rr]) x = static_cast<u32>(x * inv % p);
    for (size_t i = 0; i < R; ++i)
      if (i != rr && rows[i][c]) {
        u64 fct = p - rows[i][c];
        for (size_t j2 = 0; j2 <= J; ++j2)
          rows[i][j2] = static_cast<u32>((rows[i][j2] + fct * rows[rr][j2]) % p);
      }
    piv[c] = static_cast<int>(rr);
    ++rr;
  }
  bool incons = false;
  for (size_t i = rr; i < R; ++i)
    if (rows[i][J]) incons = true;
  if (offcell_tot && offcell_bad)
    std::printf("  offcell: %u/%u NONZERO\n", offcell_bad, offcell_tot);
  if (incons) {
    std::printf("  INCONSISTENT (extra tuples beyond candidate set)\n");
    return;
  }
  bool any = false;
  for (size_t c = 0; c < J; ++c) {
    u32 v2 = piv[c] >= 0 ? rows[static_cast<size_t>(piv[c])][J] : 0;
    if (v2) {
      any = true;
      std::printf("  %-28s : %u (=%d)\n", cands[c].name, v2,
                  v2 > p / 2 ? static_cast<int>(v2) - static_cast<int>(p)
                             : static_cast<int>(v2));
    }
  }
  if (!any) std::printf("  (zero)\n");
}

static void print_k(const PrincipalSeries& ps, const KTuple& k) {
  std::printf("k=(");
  for (size_t i = 0; i < k.size(); ++i)
    std::printf("%s%u", i ? "," : "", k[i]);
  std::printf("):\n");
}

// generalized lazy fit: LHS = word of transvection-sums (each Sum_t t^{p-2}[I+tE_{pos}])
// applied right-to-left to S_k; word given left-to-right as matrix positions.
static void lazy_fit_word(const PrincipalSeries& ps,
                          const std::vector<std::array<int, 2>>& word,
                          const KTuple& k, const std::vector<Cand>& cands,
                          std::mt19937_64& rng) {
  int n = ps.n;
  u32 p = ps.p;
  Perm w0 = Perm::longest(n);
  size_t J = cands.size();
  std::vector<KTuple> kt;
  std::vector<bool> ok;
  for (auto& c : cands) {
    KTuple k2 = k;
    bool good = true;
    for (auto& d : c.delta) {
      int v2 = static_cast<int>(k2[kidx(n, d[0], d[1])]) + d[2];
      if (v2 < 0 || v2 >= static_cast<int>(p)) good = false;
      else k2[kidx(n, d[0], d[1])] = static_cast<u32>(v2);
    }
    kt.push_back(k2);
    ok.push_back(good);
  }
  size_t M = 2 * J + 12;
  std::vector<std::vector<u32>> rows;
  u32 offcell_bad = 0, offcell_tot = 0;
  size_t W = word.size();
  while (rows.size() < M) {
    MatFp y = random_gl(rng, n, p);
    u64 lhs = 0;
    std::vector<u32> tv(W, 1);
    // iterate all t-assignments in [1,p-1]^W
    bool done = false;
    while (!done) {
      MatFp g = y;
      u64 cf = 1;
      for (size_t w = 0; w < W; ++w) {
        MatFp u = MatFp::identity(n, p);
        u(word[w][0], word[w][1]) = tv[w];
        g = g * u;
        cf = cf * powmod(tv[w], p - 2, p) % p;
      }
      lhs += cf * jacobi_eval(ps, {w0, k}, g) % p;
      size_t w = 0;
      while (w < W) {
        if (++tv[w] < p) break;
        tv[w] = 1;
        ++w;
      }
      done = (w == W);
    }
    BruhatForm f = bruhat_normal_form(y);
    if (!(f.w == w0)) {
      ++offcell_tot;
      if (lhs % p) ++offcell_bad;
      continue;
    }
    std::vector<u32> row;
    for (size_t j = 0; j < J; ++j)
      row.push_back(ok[j] ? jacobi_eval(ps, {w0, kt[j]}, y) : 0);
    row.push_back(static_cast<u32>(lhs % p));
    rows.push_back(std::move(row));
  }
  size_t R = rows.size();
  std::vector<int> piv(J, -1);
  size_t rr = 0;
  for (size_t c = 0; c < J && rr < R; ++c) {
    size_t sel = rr;
    while (sel < R && !rows[sel][c]) ++sel;
    if (sel == R) continue;
    std::swap(rows[rr], rows[sel]);
    u64 inv = invmod(rows[rr][c], p);
    for (auto& x : rows[rr]) x = static_cast<u32>(x * inv % p);
    for (size_t i = 0; i < R; ++i)
      if (i != rr && rows[i][c]) {
        u64 fct = p - rows[i][c];
        for (size_t j2 = 0; j2 <= J; ++j2)
          rows[i][j2] = static_cast<u32>((rows[i][j2] + fct * rows[rr][j2]) % p);
      }
    piv[c] = static_cast<int>(rr);
    ++rr;
  }
  bool incons = false;
  for (size_t i = rr; i < R; ++i)
    if (rows[i][J]) incons = true;
  if (offcell_tot && offcell_bad)
    std::printf("  offcell: %u/%u NONZERO\n", offcell_bad, offcell_tot);
  if (incons) {
    std::printf("  INCONSISTENT (extra tuples beyond candidate set)\n");
    return;
  }
  bool any = false;
  for (size_t c = 0; c < J; ++c) {
    u32 v2 = piv[c] >= 0 ? rows[static_cast<size_t>(piv[c])][J] : 0;
    if (v2) {
      any = true;
      std::printf("  %-28s : %u (=%d)\n", cands[c].name, v2,
                  v2 > p / 2 ? static_cast<int>(v2) - static_cast<int>(p)
                             : static_cast<int>(v2));
    }
  }
  if (!any) std::printf("  (zero)\n");
}

static void print_k2(const PrincipalSeries& ps, const KTuple& k) {
  std::printf("k=(");
  for (size_t i = 0; i < k.size(); ++i)
    std::printf("%s%u", i ? "," : "", k[i]);
  std::printf("):\n");
}

// compose deltas: concat then cancel per-slot
static std::vector<std::array<int, 3>> canon_delta(std::vector<std::array<int, 3>> d) {
  std::map<std::pair<int, int>, int> m;
  for (auto& x : d) m[{x[0], x[1]}] += x[2];
  std::vector<std::array<int, 3>> out;
  for (auto& [ij, v] : m)
    if (v) out.push_back({ij.first, ij.second, v});
  return out;
}

static void leakmap(const PrincipalSeries& ps, const Dense& v) {
  // off-w0-block support summary: per block, count of nonzero coords
  for (size_t wi = 0; wi + 1 < ps.ws.size(); ++wi) {
    u64 base = ps.offset[wi], cnt = ppow(ps.p, static_cast<int>(ps.rfree[wi].size()));
    u64 nz = 0;
    for (u64 c = 0; c < cnt; ++c)
      if (v[base + c]) ++nz;
    if (nz) {
      std::printf("    block w=[");
      for (int i = 1; i <= ps.n; ++i) std::printf("%s%d", i > 1 ? " " : "", ps.ws[wi].img[static_cast<size_t>(i - 1)]);
      std::printf("] len %d: %llu/%llu nonzero\n", ps.ws[wi].length(),
                  static_cast<unsigned long long>(nz), static_cast<unsigned long long>(cnt));
    }
  }
}

static void dissect(const PrincipalSeries& ps, const Spectrum& sp,
                    const std::vector<int>& a, int r,
                    std::vector<std::array<int, 3>> slots) {
  int n = ps.n;
  u32 p = ps.p;
  KTuple k = ktuple_zero(n);
  for (auto& s : slots) kref(k, n, s[0], s[1]) = static_cast<u32>(s[2]);
  print_k(ps, k);
  MatFp g = MatFp::identity(n, p);
  g(n + 1 - r, 1) = 1;
  ActionTable t1 = make_table(ps, g);
  Dense v = xop(ps, t1, jacobi_vec(ps, {Perm::longest(n), k}), p - 2);
  bool leak = false;
  auto dec = sp.run(v, &leak);
  if (leak) {
    std::printf("  LEAK\n");
    return;
  }
  KCombo combo;
  x_minus_expand(n, p, a, r, k, 1, combo);
  // compare
  bool match = dec.size() == combo.size();
  if (match)
    for (auto& [kt, c] : dec)
      if (!combo.count(kt) || combo[kt] != c) match = false;
  if (match) {
    std::printf("  MATCH (%zu terms)\n", dec.size());
    return;
  }
  std::printf("  MISMATCH: measured:\n");
  show_delta(ps, k, dec, false);
  std::printf("  predicted:\n");
  std::vector<std::pair<KTuple, u32>> pr(combo.begin(), combo.end());
  show_delta(ps, k, pr, false);
}

static int g_pass = 0, g_fail = 0;

static void rep_line(const char* what, const FormulaReport& r, bool expect_hyp = false) {
  bool good = expect_hyp ? !r.hyp_ok : r.ok;
  (good ? g_pass : g_fail)++;
  std::printf("  [%s] %-34s %s\n", good ? "ok" : "FAIL", what, r.detail.c_str());
}

int main() {
  struct Venue { int n; u32 p; std::vector<int> a; };
  std::vector<Venue> vs{{3, 13, {0, 4, 8}}, {4, 11, {0, 2, 5, 9}}, {4, 13, {0, 3, 7, 10}}};
  std::mt19937_64 rng(20260816ull);
  char buf[128];
  for (const auto& v : vs) {
    int n = v.n;
    u32 p = v.p;
    const auto& a = v.a;
    u32 K = lambda_K(n, p, a);
    std::printf("=== venue (%d,%u) K=%u ===\n", n, p, K);
    PrincipalSeries ps(n, p, mu_zero(n, p, a));
    rep_line("constants", verify_constants(n, p, a));
    for (int r = 2; r <= n - 1; ++r)
      for (int t = 0; t < 4; ++t) {
        KTuple k = random_admissible_minus(n, p, a, r, rng);
        std::snprintf(buf, sizeof buf, "mirror-expansion r=%d #%d", r, t);
        rep_line(buf, verify_mirror_expansion(ps, a, k, r));
      }
    for (int j0 = 2; j0 <= n; ++j0)
      for (int t = 0; t < 2; ++t) {
        KTuple k = ktuple_zero(n);
        for (size_t i = 0; i < k.size(); ++i) k[i] = static_cast<u32>(rng() % p);
        std::snprintf(buf, sizeof buf, "row-expansion j0=%d #%d", j0, t);
        rep_line(buf, verify_row_expansion(ps, k, j0));
      }
    for (int r = 2; r <= n - 1; ++r)
      for (int t = 0; t < 2; ++t) {
        KTuple k = random_admissible_minus(n, p, a, r, rng);
        std::snprintf(buf, sizeof buf, "mirror-composite r=%d #%d", r, t);
        rep_line(buf, verify_mirror_composite(ps, a, k, r));
      }
    for (int r = 2; r <= n - 1; ++r)
      for (int m = 1; m <= r - 1; ++m) {
        std::snprintf(buf, sizeof buf, "loop-composite m=%d r=%d", m, r);
        rep_line(buf, verify_loop_composite(n, p, a, m, r));
      }
    for (int r = 2; r <= n - 1; ++r)
      for (int t = 0; t < 2; ++t) {
        int s = n + 1 - r;
        KTuple k = ktuple_zero(n);
        for (int j = s + 1; j <= n; ++j) kref(k, n, 1, j) = static_cast<u32>(rng() % (p - 1));
        for (int i = s + 1; i <= n - 1; ++i)
          for (int j = i + 1; j <= n; ++j) kref(k, n, i, j) = static_cast<u32>(rng() % (p - 1));
        std::snprintf(buf, sizeof buf, "stable-composite r=%d #%d", r, t);
        rep_line(buf, verify_stable_composite(n, p, a, k, r));
      }
    for (int r = 2; r <= n - 1; ++r)
      for (int s = 0; static_cast<u32>(s) < K; ++s) {
        SharpTuples st = sharp_tuples(n, p, a, r - 1, s);
        if (!x_minus_hyp(n, p, a, r, st.at_rs).empty()) continue;
        std::snprintf(buf, sizeof buf, "ladder-composite r=%d s=%d", r, s);
        rep_line(buf, verify_ladder_composite(n, p, a, r, s));
      }
    for (int r = 2; r <= n - 1; ++r)
      for (int m = 1; m <= r - 1; ++m) {
        std::snprintf(buf, sizeof buf, "z-step m=%d r=%d", m, r);
        rep_line(buf, verify_z_step(n, p, a, m, r));
      }
    for (int r = 2; r <= n - 1; ++r) {
      std::snprintf(buf, sizeof buf, "z-scalar r=%d", r);
      rep_line(buf, verify_z_scalar(n, p, a, r));
    }
    for (int r = 1; r <= n - 2; ++r)
      for (int s = 1; static_cast<u32>(s) <= K; ++s) {
        KCombo probe{{sharp_tuples(n, p, a, r, s - 1).at_rs, 1u}};
        if (!expand_minus(n, p, a, r + 1, probe).empty()) continue;
        std::snprintf(buf, sizeof buf, "ladder-step r=%d s=%d", r, s);
        rep_line(buf, verify_ladder_step(n, p, a, r, s));
      }
  }
  std::printf("=== expected hypothesis rejections ===\n");
  {
    std::vector<int> a{0, 3, 7, 10};
    rep_line("anomaly sharp(2,0) @13", verify_ladder_composite(4, 13, a, 3, 0), true);
    PrincipalSeries ps(4, 13, mu_zero(4, 13, a));
    KTuple k = ktuple_zero(4);
    kref(k, 4, 1, 3) = 3;
    rep_line("window k13=3 @13 r=2", verify_mirror_expansion(ps, a, k, 2), true);
    KTuple k2 = ktuple_zero(4);
    kref(k2, 4, 3, 4) = 4;
    rep_line("window k34=4 @13 r=2", verify_mirror_expansion(ps, a, k2, 2), true);
    KTuple k3 = ktuple_zero(4);
    kref(k3, 4, 2, 3) = 1;
    rep_line("interior k23 @13 r=2", verify_mirror_expansion(ps, a, k3, 2), true);
    KTuple k4 = ktuple_zero(4);
    kref(k4, 4, 1, 2) = 4;
    rep_line("anomaly k12=4 @13 r=3", verify_mirror_expansion(ps, a, k4, 3), true);
  }
  std::printf("battery: %d pass, %d fail\n", g_pass, g_fail);
  return g_fail != 0;
}
