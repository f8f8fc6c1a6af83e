#include "permpoly/field_tower.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace permpoly {
namespace {

// ---------------------------------------------------------------------------
// bootstrap arithmetic: dense little-endian coefficient vectors over F_p,
// used only while the context is being built
// ---------------------------------------------------------------------------

using IPoly = std::vector<long>;

long lmod(long a, long p) {
  long r = a % p;
  return r < 0 ? r + p : r;
}

long mod_pow(long a, long e, long p) {
  long r = 1 % p;
  a = lmod(a, p);
  while (e > 0) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return r;
}

long mod_inv(long a, long p) { return mod_pow(lmod(a, p), p - 2, p); }

int ip_deg(const IPoly& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[i]) return i;
  return -1;
}

IPoly ip_mul(const IPoly& a, const IPoly& b, long p) {
  if (a.empty() || b.empty()) return {};
  IPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  return r;
}

// remainder of a modulo b (b need not be monic)
IPoly ip_rem(IPoly a, const IPoly& b, long p) {
  int db = ip_deg(b);
  long lead_inv = mod_inv(b[db], p);
  for (int da = ip_deg(a); da >= db; da = ip_deg(a)) {
    long f = a[da] * lead_inv % p;
    if (f)
      for (int j = 0; j <= db; ++j)
        a[da - db + j] = lmod(a[da - db + j] - f * b[j], p);
    a[da] = 0;
  }
  return a;
}

// trial division by every monic polynomial of degree 1..deg/2
bool ip_irreducible(const IPoly& poly, long p) {
  int d = ip_deg(poly);
  if (d <= 0) return false;
  if (d == 1) return true;
  for (int dd = 1; dd <= d / 2; ++dd) {
    std::uint64_t count = 1;
    for (int i = 0; i < dd; ++i) count *= static_cast<std::uint64_t>(p);
    IPoly div(dd + 1, 0);
    div[dd] = 1;
    for (std::uint64_t v = 0; v < count; ++v) {
      std::uint64_t t = v;
      for (int i = 0; i < dd; ++i) {
        div[i] = static_cast<long>(t % p);
        t /= p;
      }
      if (ip_deg(ip_rem(poly, div, p)) < 0) return false;
    }
  }
  return true;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> fs;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      fs.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) fs.push_back(v);
  return fs;
}

// ---------------------------------------------------------------------------
// polynomials over F_q (coefficients are inner indices); only needed during
// construction for the outer modulus scan and for inversion afterwards
// ---------------------------------------------------------------------------

using QPoly = std::vector<fq_t>;

int qp_deg(const QPoly& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[i]) return i;
  return -1;
}

}  // namespace

fq_t FieldCtx::add_slow(fq_t a, fq_t b) const {
  fq_t res = 0;
  std::uint64_t mult = 1;
  for (int i = 0; i < n; ++i) {
    long da = static_cast<long>(a % p), db = static_cast<long>(b % p);
    a /= static_cast<fq_t>(p);
    b /= static_cast<fq_t>(p);
    res += static_cast<fq_t>(((da + db) % p) * mult);
    mult *= static_cast<std::uint64_t>(p);
  }
  return res;
}

fq_t FieldCtx::finv(fq_t a) const {
  if (a == 0) throw std::invalid_argument("inner inverse of zero");
  return inv_tab[a];
}

fq_t FieldCtx::fpow(fq_t a, std::uint64_t e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  if (q == 2) return 1;
  std::uint64_t k = static_cast<std::uint64_t>(log_tab[a]) % (q - 1);
  return exp_tab[(k * (e % (q - 1))) % (q - 1)];
}

std::uint64_t FieldCtx::forder(fq_t a) const {
  if (a == 0) throw std::invalid_argument("order of zero");
  std::uint64_t k = log_tab[a];
  return (q - 1) / std::gcd(q - 1, k);
}

Element FieldCtx::zero() const {
  Element e;
  e.size = m;
  return e;
}

Element FieldCtx::one() const { return from_fq(1 % static_cast<fq_t>(q)); }

Element FieldCtx::from_fq(fq_t c) const {
  Element e;
  e.size = m;
  e.c[0] = c;
  return e;
}

std::optional<fq_t> FieldCtx::to_fq(const Element& x) const {
  for (int i = 1; i < m; ++i)
    if (x.c[i]) return std::nullopt;
  return x.c[0];
}

Element FieldCtx::from_index(eidx_t i) const {
  Element e;
  e.size = m;
  const fq_t* d = digits_of(i);
  std::copy(d, d + m, e.c.begin());
  return e;
}

eidx_t FieldCtx::index_of(const Element& x) const {
  eidx_t idx = 0;
  std::uint64_t mult = 1;
  for (int i = 0; i < m; ++i) {
    idx += x.c[i] * mult;
    mult *= q;
  }
  return idx;
}

Element FieldCtx::add(const Element& a, const Element& b) const {
  Element r;
  r.size = m;
  for (int i = 0; i < m; ++i) r.c[i] = fadd(a.c[i], b.c[i]);
  return r;
}

Element FieldCtx::sub(const Element& a, const Element& b) const {
  Element r;
  r.size = m;
  for (int i = 0; i < m; ++i) r.c[i] = fadd(a.c[i], fneg(b.c[i]));
  return r;
}

Element FieldCtx::neg(const Element& a) const {
  Element r;
  r.size = m;
  for (int i = 0; i < m; ++i) r.c[i] = fneg(a.c[i]);
  return r;
}

Element FieldCtx::smul(fq_t c, const Element& a) const {
  Element r;
  r.size = m;
  for (int i = 0; i < m; ++i) r.c[i] = fmul(c, a.c[i]);
  return r;
}

Element FieldCtx::mul(const Element& a, const Element& b) const {
  // schoolbook product, then fold degrees >= m through the precomputed
  // reduction rows (each row is already fully reduced, so one pass suffices)
  std::array<fq_t, 2 * kMaxDeg> acc{};
  for (int i = 0; i < m; ++i) {
    if (!a.c[i]) continue;
    for (int j = 0; j < m; ++j) {
      if (!b.c[j]) continue;
      acc[i + j] = fadd(acc[i + j], fmul(a.c[i], b.c[j]));
    }
  }
  Element r;
  r.size = m;
  for (int i = 0; i < m; ++i) r.c[i] = acc[i];
  for (int t = 0; t <= 2 * m - 2 - m; ++t) {
    fq_t c = acc[m + t];
    if (!c) continue;
    const fq_t* row = &red_[static_cast<std::size_t>(t) * m];
    for (int j = 0; j < m; ++j) r.c[j] = fadd(r.c[j], fmul(c, row[j]));
  }
  return r;
}

Element FieldCtx::inv(const Element& a) const {
  if (a.is_zero()) throw std::invalid_argument("outer inverse of zero");
  // extended Euclid in F_q[Y] against the modulus
  QPoly r0(g_mod.begin(), g_mod.end());
  QPoly r1(a.c.begin(), a.c.begin() + m);
  QPoly s0(m + 1, 0), s1(m + 1, 0);
  s1[0] = 1;
  while (qp_deg(r1) >= 0) {
    int d0 = qp_deg(r0), d1 = qp_deg(r1);
    if (d0 < d1) {
      std::swap(r0, r1);
      std::swap(s0, s1);
      continue;
    }
    fq_t f = fmul(r0[d0], finv(r1[d1]));
    int shift = d0 - d1;
    for (int j = 0; j <= d1; ++j) r0[j + shift] = fadd(r0[j + shift], fneg(fmul(f, r1[j])));
    for (int j = 0; j + shift < static_cast<int>(s0.size()); ++j)
      if (s1[j]) s0[j + shift] = fadd(s0[j + shift], fneg(fmul(f, s1[j])));
  }
  int dg = qp_deg(r0);
  if (dg != 0) throw internal_error("outer inverse: gcd with modulus not constant");
  fq_t scale = finv(r0[0]);
  Element res;
  res.size = m;
  for (int j = 0; j < m; ++j) res.c[j] = fmul(scale, s0[j]);
  if (mul(res, a) != one()) throw internal_error("outer inverse self-check failed");
  return res;
}

Element FieldCtx::pow(Element a, std::uint64_t e) const {
  Element r = one();
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t FieldCtx::elt_order(const Element& a) const {
  if (a.is_zero()) throw std::invalid_argument("order of zero");
  std::uint64_t o = order - 1;
  for (std::uint64_t r : prime_factors(order - 1)) {
    while (o % r == 0 && pow(a, o / r) == one()) o /= r;
  }
  return o;
}

Element FieldCtx::apply_matrix(const fq_t* mat, const Element& x) const {
  Element r;
  r.size = m;
  for (int row = 0; row < m; ++row) {
    fq_t acc = 0;
    const fq_t* mr = mat + static_cast<std::size_t>(row) * m;
    for (int j = 0; j < m; ++j)
      if (x.c[j]) acc = fadd(acc, fmul(mr[j], x.c[j]));
    r.c[row] = acc;
  }
  return r;
}

Element FieldCtx::frobenius(const Element& x, int i) const {
  int k = ((i % m) + m) % m;
  return apply_matrix(frobenius_matrix(k), x);
}

fq_t FieldCtx::rel_trace(const Element& x) const {
  Element acc = x;
  Element s = x;
  for (int i = 1; i < m; ++i) {
    s = frobenius(s, 1);
    acc = add(acc, s);
  }
  for (int i = 1; i < m; ++i)
    if (acc.c[i]) throw internal_error("relative trace has a nonconstant coefficient");
  return acc.c[0];
}

Element FieldCtx::find_primitive(Level level) const {
  if (level == Level::inner) {
    for (fq_t c = 1; c < q; ++c)
      if (forder(c) == q - 1) return from_fq(c);
    throw internal_error("no inner primitive element found");
  }
  auto fs = prime_factors(order - 1);
  for (eidx_t e = 1; e < order; ++e) {
    Element x = from_index(e);
    bool ok = true;
    for (std::uint64_t r : fs) {
      if (pow(x, (order - 1) / r) == one()) {
        ok = false;
        break;
      }
    }
    if (ok) return x;
  }
  throw internal_error("no outer primitive element found");
}

eidx_t FieldCtx::index_add(eidx_t a, eidx_t b) const {
  const fq_t* da = digits_of(a);
  const fq_t* db = digits_of(b);
  eidx_t idx = 0;
  std::uint64_t mult = 1;
  for (int i = 0; i < m; ++i) {
    idx += fadd(da[i], db[i]) * mult;
    mult *= q;
  }
  return idx;
}

std::uint64_t resolve_size_cap(std::uint64_t requested) {
  if (requested != 0) return requested;
  if (const char* env = std::getenv(kSizeCapEnvVar)) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    throw std::invalid_argument(std::string(kSizeCapEnvVar) + " is not a positive integer");
  }
  return kDefaultSizeCap;
}

FieldCtx make_field(long p, int n, int m, std::uint64_t size_cap) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (n < 1 || n > kMaxDeg) throw std::invalid_argument("n out of range");
  if (m < 1 || m > kMaxDeg) throw std::invalid_argument("m out of range");

  const std::uint64_t cap = resolve_size_cap(size_cap);
  unsigned __int128 ord = 1;
  for (int i = 0; i < n * m; ++i) {
    ord *= static_cast<unsigned>(p);
    if (ord > cap)
      throw std::invalid_argument("field size q^m exceeds the size cap (" + std::to_string(cap) + ")");
  }
  if (ord > kTableHardCap)
    throw std::invalid_argument("field size q^m exceeds the dense-table bound");

  FieldCtx F;
  F.p = p;
  F.n = n;
  F.m = m;
  F.q = 1;
  for (int i = 0; i < n; ++i) F.q *= static_cast<std::uint64_t>(p);
  F.order = 1;
  for (int i = 0; i < m; ++i) F.order *= F.q;

  // ---- inner modulus: first irreducible in canonical coefficient order ----
  if (n == 1) {
    F.f_mod = {0, 1};  // X itself; residues mod p need no extension
  } else {
    std::uint64_t limit = F.q;
    bool found = false;
    for (std::uint64_t v = 0; v < limit && !found; ++v) {
      IPoly cand(n + 1, 0);
      cand[n] = 1;
      std::uint64_t t = v;
      for (int i = 0; i < n; ++i) {
        cand[i] = static_cast<long>(t % p);
        t /= p;
      }
      if (ip_irreducible(cand, p)) {
        F.f_mod = cand;
        found = true;
      }
    }
    if (!found) throw internal_error("no irreducible inner modulus found");
  }

  // ---- inner index arithmetic ----
  auto idx_to_poly = [&](fq_t a) {
    IPoly r(n, 0);
    for (int i = 0; i < n; ++i) {
      r[i] = static_cast<long>(a % p);
      a /= static_cast<fq_t>(p);
    }
    return r;
  };
  auto poly_to_idx = [&](const IPoly& a) {
    fq_t idx = 0;
    std::uint64_t mult = 1;
    for (int i = 0; i < n && i < static_cast<int>(a.size()); ++i) {
      idx += static_cast<fq_t>(a[i] * mult);
      mult *= static_cast<std::uint64_t>(p);
    }
    return idx;
  };
  auto boot_mul = [&](fq_t a, fq_t b) {
    if (n == 1) return static_cast<fq_t>((static_cast<std::uint64_t>(a) * b) % p);
    IPoly r = ip_rem(ip_mul(idx_to_poly(a), idx_to_poly(b), p), F.f_mod, p);
    return poly_to_idx(r);
  };

  const std::uint64_t q = F.q;
  F.neg_tab.resize(q);
  for (fq_t a = 0; a < q; ++a) {
    fq_t res = 0;
    std::uint64_t mult = 1;
    fq_t t = a;
    for (int i = 0; i < n; ++i) {
      long d = static_cast<long>(t % p);
      t /= static_cast<fq_t>(p);
      res += static_cast<fq_t>(((p - d) % p) * mult);
      mult *= static_cast<std::uint64_t>(p);
    }
    F.neg_tab[a] = res;
  }

  // discrete log tables against the first generator in index order
  F.log_tab.assign(q, 0);
  F.exp_tab.assign(q - 1, 0);
  {
    fq_t gen = 0;
    for (fq_t g = 1; g < q && !gen; ++g) {
      fq_t acc = g;
      std::uint64_t ord_g = 1;
      while (acc != 1) {
        acc = boot_mul(acc, g);
        ++ord_g;
      }
      if (ord_g == q - 1) gen = g;
    }
    if (!gen) throw internal_error("no inner generator found");
    F.gen_ = gen;
    fq_t acc = 1;
    for (std::uint64_t k = 0; k < q - 1; ++k) {
      F.exp_tab[k] = acc;
      F.log_tab[acc] = static_cast<std::uint32_t>(k);
      acc = boot_mul(acc, gen);
    }
  }

  constexpr std::uint64_t kInnerTableMax = 512;
  if (q <= kInnerTableMax) {
    F.add_tab.resize(q * q);
    F.mul_tab.resize(q * q);
    for (fq_t a = 0; a < q; ++a)
      for (fq_t b = 0; b < q; ++b) {
        F.add_tab[a * q + b] = F.add_slow(a, b);
        F.mul_tab[a * q + b] = (a && b)
            ? F.exp_tab[(static_cast<std::uint64_t>(F.log_tab[a]) + F.log_tab[b]) % (q - 1)]
            : 0;
      }
  }

  F.inv_tab.assign(q, 0);
  for (fq_t a = 1; a < q; ++a)
    F.inv_tab[a] = F.exp_tab[(q - 1 - F.log_tab[a]) % (q - 1)];

  // ---- outer modulus scan over F_q ----
  {
    auto qp_rem = [&](QPoly a, const QPoly& b) {
      int db = qp_deg(b);
      fq_t lead_inv = F.finv(b[db]);
      for (int da = qp_deg(a); da >= db; da = qp_deg(a)) {
        fq_t f = F.fmul(a[da], lead_inv);
        if (f)
          for (int j = 0; j <= db; ++j)
            a[da - db + j] = F.fadd(a[da - db + j], F.fneg(F.fmul(f, b[j])));
        a[da] = 0;
      }
      return a;
    };
    auto qp_irreducible = [&](const QPoly& poly) {
      int d = qp_deg(poly);
      if (d == 1) return true;
      for (int dd = 1; dd <= d / 2; ++dd) {
        std::uint64_t count = 1;
        for (int i = 0; i < dd; ++i) count *= q;
        QPoly div(dd + 1, 0);
        div[dd] = 1;
        for (std::uint64_t v = 0; v < count; ++v) {
          std::uint64_t t = v;
          for (int i = 0; i < dd; ++i) {
            div[i] = static_cast<fq_t>(t % q);
            t /= q;
          }
          if (qp_deg(qp_rem(poly, div)) < 0) return false;
        }
      }
      return true;
    };

    bool found = false;
    for (std::uint64_t v = 0; v < F.order && !found; ++v) {
      QPoly cand(m + 1, 0);
      cand[m] = 1;
      std::uint64_t t = v;
      for (int i = 0; i < m; ++i) {
        cand[i] = static_cast<fq_t>(t % q);
        t /= q;
      }
      if (qp_irreducible(cand)) {
        F.g_mod.assign(cand.begin(), cand.end());
        found = true;
      }
    }
    if (!found) throw internal_error("no irreducible outer modulus found");
  }

  // ---- digit table ----
  F.digits_.resize(F.order * static_cast<std::size_t>(m));
  {
    std::vector<fq_t> dig(m, 0);
    for (eidx_t i = 0; i < F.order; ++i) {
      std::copy(dig.begin(), dig.end(), F.digits_.begin() + static_cast<std::size_t>(i) * m);
      for (int j = 0; j < m; ++j) {  // odometer in base q
        if (++dig[j] < q) break;
        dig[j] = 0;
      }
    }
  }

  // ---- reduction rows: Y^{m+t} mod g for t = 0..m-2 ----
  if (m >= 2) {
    F.red_.resize(static_cast<std::size_t>(m - 1) * m);
    std::vector<fq_t> row(m);
    for (int j = 0; j < m; ++j) row[j] = F.fneg(F.g_mod[j]);  // Y^m
    std::copy(row.begin(), row.end(), F.red_.begin());
    for (int t = 1; t <= m - 2; ++t) {
      std::vector<fq_t> nxt(m, 0);
      fq_t top = row[m - 1];
      for (int j = m - 1; j >= 1; --j) nxt[j] = row[j - 1];
      nxt[0] = 0;
      if (top)
        for (int j = 0; j < m; ++j)
          nxt[j] = F.fadd(nxt[j], F.fmul(top, F.fneg(F.g_mod[j])));
      row = nxt;
      std::copy(row.begin(), row.end(), F.red_.begin() + static_cast<std::size_t>(t) * m);
    }
  }

  // ---- Frobenius matrices ----
  F.frob_.assign(static_cast<std::size_t>(m) * m * m, 0);
  {
    fq_t* id = &F.frob_[0];
    for (int j = 0; j < m; ++j) id[j * m + j] = 1;
    if (m >= 2) {
      Element Y;
      Y.size = m;
      Y.c[1] = 1;
      Element B = F.pow(Y, F.q);  // Y^q
      fq_t* f1 = &F.frob_[static_cast<std::size_t>(1) * m * m];
      Element col = F.one();
      for (int j = 0; j < m; ++j) {  // column j = (Y^q)^j = (Y^j)^q
        for (int r = 0; r < m; ++r) f1[r * m + j] = col.c[r];
        if (j + 1 < m) col = F.mul(col, B);
      }
      for (int i = 2; i < m; ++i) {
        const fq_t* prev = &F.frob_[static_cast<std::size_t>(i - 1) * m * m];
        fq_t* cur = &F.frob_[static_cast<std::size_t>(i) * m * m];
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < m; ++c) {
            fq_t acc = 0;
            for (int k = 0; k < m; ++k)
              acc = F.fadd(acc, F.fmul(f1[r * m + k], prev[k * m + c]));
            cur[r * m + c] = acc;
          }
      }
    }
  }

  // ---- trace of the power basis, then the full trace table ----
  F.tr_vec_.assign(m, 0);
  {
    std::vector<fq_t> T(static_cast<std::size_t>(m) * m, 0);
    for (int i = 0; i < m; ++i) {
      const fq_t* mat = F.frobenius_matrix(i);
      for (int rc = 0; rc < m * m; ++rc) T[rc] = F.fadd(T[rc], mat[rc]);
    }
    for (int r = 1; r < m; ++r)
      for (int j = 0; j < m; ++j)
        if (T[r * m + j])
          throw internal_error("trace of a basis element is not constant");
    for (int j = 0; j < m; ++j) F.tr_vec_[j] = T[j];
  }
  F.tr_of_.resize(F.order);
  for (eidx_t i = 0; i < F.order; ++i) {
    const fq_t* d = F.digits_of(i);
    fq_t acc = 0;
    for (int j = 0; j < m; ++j)
      if (d[j]) acc = F.fadd(acc, F.fmul(F.tr_vec_[j], d[j]));
    F.tr_of_[i] = acc;
  }

  return F;
}

std::string element_str(const FieldCtx& F, const Element& x) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < F.m; ++i) {
    if (i) os << ",";
    os << x.c[i];
  }
  os << ")#" << F.index_of(x);
  return os.str();
}

}  // namespace permpoly
