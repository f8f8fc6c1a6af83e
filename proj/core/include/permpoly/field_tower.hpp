#pragma once

// Finite field tower  F_p < F_q < F_{q^m},  q = p^n.
//
// The inner field F_q is F_p[X]/(f) for a canonical monic irreducible f of
// degree n; inner elements are stored as their canonical integer index
// sum c_i p^i over the coefficient vector.  The outer field F_{q^m} is
// F_q[Y]/(g) for a canonical monic irreducible g of degree m over F_q;
// outer elements carry m inner indices (little-endian in Y) and have the
// canonical index sum idx(d_j) q^j.
//
// "Canonical" modulus means: the monic irreducible of the required degree
// whose lower-coefficient vector, read as an integer in base p (resp. base
// q), is smallest.  Found by exhaustive ascending scan with trial-division
// irreducibility testing, so two runs always agree on the representation.
//
// A FieldCtx is immutable after construction.  All lookup tables (inner
// add/mul, digit decompositions, Frobenius matrices, traces) are built
// eagerly, so const FieldCtx is safe to share across threads.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permpoly/errors.hpp"

namespace permpoly {

using fq_t = std::uint32_t;     // index of an element of the inner field F_q
using eidx_t = std::uint64_t;   // canonical index of an element of F_{q^m}

inline constexpr int kMaxDeg = 32;                      // bound on n and m
inline constexpr std::uint64_t kDefaultSizeCap = 65536; // default bound on q^m
inline constexpr std::uint64_t kTableHardCap = (1ULL << 20);
inline constexpr const char* kSizeCapEnvVar = "PERMPOLY_SIZE_CAP";

// Element of F_{q^m}: m coefficients over F_q, c[0] + c[1] Y + ...
struct Element {
  std::array<fq_t, kMaxDeg> c{};
  int size = 0;

  bool operator==(const Element& o) const {
    if (size != o.size) return false;
    for (int i = 0; i < size; ++i)
      if (c[i] != o.c[i]) return false;
    return true;
  }
  bool operator!=(const Element& o) const { return !(*this == o); }
  bool is_zero() const {
    for (int i = 0; i < size; ++i)
      if (c[i]) return false;
    return true;
  }
};

class FieldCtx {
 public:
  long p = 0;
  int n = 0;
  int m = 0;
  std::uint64_t q = 0;      // p^n
  std::uint64_t order = 0;  // q^m

  std::vector<long> f_mod;  // n+1 coefficients over F_p, monic
  std::vector<fq_t> g_mod;  // m+1 coefficients over F_q (inner indices), monic

  // --- inner field ops (on canonical indices) ---------------------------

  fq_t fadd(fq_t a, fq_t b) const {
    if (!add_tab.empty()) return add_tab[a * q + b];
    return add_slow(a, b);
  }
  fq_t fneg(fq_t a) const { return neg_tab[a]; }
  fq_t fsub(fq_t a, fq_t b) const { return fadd(a, fneg(b)); }
  fq_t fmul(fq_t a, fq_t b) const {
    if (!mul_tab.empty()) return mul_tab[a * q + b];
    if (a == 0 || b == 0) return 0;
    return exp_tab[(static_cast<std::uint64_t>(log_tab[a]) + log_tab[b]) % (q - 1)];
  }
  fq_t finv(fq_t a) const;
  fq_t fpow(fq_t a, std::uint64_t e) const;
  // multiplicative order of a nonzero inner element
  std::uint64_t forder(fq_t a) const;
  fq_t inner_generator() const { return gen_; }

  // --- outer field ops --------------------------------------------------

  Element zero() const;
  Element one() const;
  Element from_fq(fq_t c) const;                // embed F_q into F_{q^m}
  std::optional<fq_t> to_fq(const Element& x) const;  // defined iff x lies in F_q
  Element from_index(eidx_t i) const;
  eidx_t index_of(const Element& x) const;
  const fq_t* digits_of(eidx_t i) const { return &digits_[i * m]; }

  Element add(const Element& a, const Element& b) const;
  Element sub(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  Element mul(const Element& a, const Element& b) const;
  Element smul(fq_t c, const Element& a) const;  // scalar multiple
  Element inv(const Element& a) const;
  Element pow(Element a, std::uint64_t e) const;
  std::uint64_t elt_order(const Element& a) const;

  // x -> x^{q^i}; an F_q-linear map, applied through a precomputed matrix.
  Element frobenius(const Element& x, int i) const;
  // matrix of x -> x^{q^i} acting on the power basis {1, Y, ..., Y^{m-1}};
  // row-major m*m block of inner indices, column j = image of Y^j.
  const fq_t* frobenius_matrix(int i) const { return &frob_[static_cast<std::size_t>(i) * m * m]; }

  // Relative trace F_{q^m} -> F_q computed as the explicit Frobenius sum;
  // raises internal_error if the sum is not a constant polynomial in Y.
  fq_t rel_trace(const Element& x) const;
  // table-backed trace by element index (same values, built once)
  fq_t trace_of(eidx_t i) const { return tr_of_[i]; }
  fq_t trace_of_basis(int j) const { return tr_vec_[j]; }

  enum class Level { inner, outer };
  // Element of smallest canonical index generating the multiplicative group
  // of the requested level (embedded into F_{q^m} for Level::inner).
  Element find_primitive(Level level) const;

  Element apply_matrix(const fq_t* mat, const Element& x) const;  // m*m row-major

  // index-level add helper for tight loops
  eidx_t index_add(eidx_t a, eidx_t b) const;

 private:
  friend FieldCtx make_field(long, int, int, std::uint64_t);

  fq_t add_slow(fq_t a, fq_t b) const;

  std::vector<fq_t> add_tab;   // q*q if q <= kInnerTableMax
  std::vector<fq_t> mul_tab;   // q*q if q <= kInnerTableMax
  std::vector<fq_t> neg_tab;   // q
  std::vector<fq_t> inv_tab;   // q (entry 0 unused)
  std::vector<std::uint32_t> log_tab;  // q (entry 0 unused)
  std::vector<fq_t> exp_tab;           // q-1
  fq_t gen_ = 0;

  std::vector<fq_t> digits_;   // order * m
  std::vector<fq_t> red_;      // (m-1) rows * m: Y^{m+t} mod g
  std::vector<fq_t> frob_;     // m matrices, each m*m
  std::vector<fq_t> tr_vec_;   // m: Tr(Y^j)
  std::vector<fq_t> tr_of_;    // order
};

// Build the canonical context for the tower (p, n, m).  size_cap == 0 means:
// use the PERMPOLY_SIZE_CAP environment variable if set, else the default
// bound of 65536 on q^m.  Raising the cap past the default is allowed but
// every dense table still refuses to exceed kTableHardCap entries.
FieldCtx make_field(long p, int n, int m, std::uint64_t size_cap = 0);

// Resolved size cap for an explicit request (exposed for the CLI).
std::uint64_t resolve_size_cap(std::uint64_t requested);

std::string element_str(const FieldCtx& F, const Element& x);  // debug aid

}  // namespace permpoly
