#include "permpoly/translators.hpp"

#include <string>

#include "permpoly/errors.hpp"

namespace permpoly {

SelfMap self_map_zero(const FieldCtx& F) {
  SelfMap H;
  H.table.assign(F.order, 0);
  H.poly = std::vector<Element>{};
  return H;
}

SelfMap self_map_from_table(const FieldCtx& F, std::vector<eidx_t> table) {
  if (table.size() != F.order)
    throw std::invalid_argument("self_map_from_table: table length must be q^m");
  for (eidx_t v : table)
    if (v >= F.order) throw std::invalid_argument("self_map_from_table: entry out of range");
  SelfMap H;
  H.table = std::move(table);
  return H;
}

SelfMap self_map_from_poly(const FieldCtx& F, const std::vector<Element>& coeffs) {
  SelfMap H;
  H.table.resize(F.order);
  for (eidx_t i = 0; i < F.order; ++i) {
    Element x = F.from_index(i);
    Element acc = F.zero();
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
      acc = F.add(F.mul(acc, x), *it);
    H.table[i] = F.index_of(acc);
  }
  H.poly = coeffs;
  return H;
}

SelfMap random_self_map(const FieldCtx& F, Rng& rng) {
  SelfMap H;
  H.table.resize(F.order);
  for (eidx_t i = 0; i < F.order; ++i) H.table[i] = rng.below(F.order);
  return H;
}

FqMap fq_map_from_table(const FieldCtx& F, std::vector<fq_t> table) {
  FqMap f;
  f.table = std::move(table);
  validate_fq_map(F, f);
  return f;
}

FqMap fq_map_trace(const FieldCtx& F) {
  FqMap f;
  f.table.resize(F.order);
  for (eidx_t i = 0; i < F.order; ++i) f.table[i] = F.trace_of(i);
  return f;
}

void validate_fq_map(const FieldCtx& F, const FqMap& f) {
  if (f.table.size() != F.order)
    throw std::invalid_argument("FqMap: table length must be q^m");
  for (fq_t v : f.table)
    if (v >= F.q) throw std::invalid_argument("FqMap: value out of F_q range");
  if (!f.description) return;
  const TraceForm& d = *f.description;
  if (d.H.table.size() != F.order)
    throw std::invalid_argument("FqMap: description H table length must be q^m");
  std::vector<eidx_t> Ltab = lin_table(F, d.L);
  for (eidx_t i = 0; i < F.order; ++i) {
    Element val = F.add(F.mul(d.beta, F.from_index(i)), F.from_index(d.H.table[Ltab[i]]));
    if (f.table[i] != F.trace_of(F.index_of(val)))
      throw std::invalid_argument("FqMap: table disagrees with its description");
  }
}

namespace {

// The u values to quantify over, as inner-field values. u = 0 is trivially
// satisfied and skipped.
std::vector<fq_t> u_values(const FieldCtx& F, CheckMode mode) {
  std::vector<fq_t> us;
  if (mode == CheckMode::all_u) {
    for (fq_t u = 1; u < F.q; ++u) us.push_back(u);
  } else {
    fq_t u = 1;  // powers of the generator digit: 1, t, t^2, ... as values p^i
    for (int i = 0; i < F.n; ++i) {
      us.push_back(u);
      u *= static_cast<fq_t>(F.p);
    }
  }
  return us;
}

}  // namespace

std::optional<fq_t> translator_coefficient(const FieldCtx& F, const FqMap& f,
                                           const Element& alpha, CheckMode mode) {
  if (alpha.is_zero())
    throw hypothesis_error("translator_coefficient: direction must be nonzero");
  eidx_t alpha_idx = F.index_of(alpha);
  fq_t a = F.fsub(f.table[alpha_idx], f.table[0]);
  for (fq_t u : u_values(F, mode)) {
    eidx_t ua = F.index_of(F.smul(u, alpha));
    fq_t want = F.fmul(u, a);
    for (eidx_t x = 0; x < F.order; ++x)
      if (F.fsub(f.table[F.index_add(x, ua)], f.table[x]) != want) return std::nullopt;
  }
  return a;
}

std::vector<TranslatorCertificate> all_translators(const FieldCtx& F, const FqMap& f,
                                                   CheckMode mode) {
  std::vector<TranslatorCertificate> certs;
  for (eidx_t i = 1; i < F.order; ++i) {
    Element alpha = F.from_index(i);
    if (auto a = translator_coefficient(F, f, alpha, mode))
      certs.push_back({alpha, *a});
  }

  // The translator set plus 0 must be an F_q-subspace, and alpha -> a must
  // be F_q-linear on it. Both follow from the defining identity; failure
  // here means the search itself is broken.
  std::vector<std::vector<fq_t>> vecs;
  for (const auto& c : certs) {
    std::vector<fq_t> v(F.m);
    for (int j = 0; j < F.m; ++j) v[j] = c.alpha.c[j];
    vecs.push_back(std::move(v));
  }
  auto basis_rows = span_basis(F, vecs, F.m);
  std::uint64_t span_size = 1;
  for (std::size_t i = 0; i < basis_rows.size(); ++i) span_size *= F.q;
  if (span_size != certs.size() + 1)
    throw internal_error("all_translators: translator set is not a subspace");
  std::vector<Element> basis;
  for (const auto& row : basis_rows) {
    Element e = F.zero();
    for (int j = 0; j < F.m; ++j) e.c[j] = row[j];
    basis.push_back(e);
  }
  auto a_of = [&](eidx_t idx) { return F.fsub(f.table[idx], f.table[0]); };
  // Enumerate the span with explicit coordinates and compare a against the
  // matching linear combination of the basis coefficients.
  std::vector<fq_t> coords(basis.size(), 0);
  while (true) {
    Element e = F.zero();
    fq_t want = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      e = F.add(e, F.smul(coords[i], basis[i]));
      want = F.fadd(want, F.fmul(coords[i], a_of(F.index_of(basis[i]))));
    }
    if (a_of(F.index_of(e)) != want)
      throw internal_error("all_translators: coefficient map is not linear");
    std::size_t pos = 0;
    while (pos < coords.size() && ++coords[pos] == F.q) coords[pos++] = 0;
    if (pos == coords.size()) break;
  }
  return certs;
}

namespace {

// Tr(beta * x) for every x, computed through the linear functional
// x -> sum_j Tr(beta * Y^j) x_j instead of a full product per element.
std::vector<fq_t> trace_functional_table(const FieldCtx& F, const Element& beta) {
  std::vector<fq_t> tvec(F.m);
  for (int j = 0; j < F.m; ++j) {
    Element basis = F.zero();
    basis.c[j] = 1;
    tvec[j] = F.trace_of(F.index_of(F.mul(beta, basis)));
  }
  std::vector<fq_t> out(F.order);
  for (eidx_t i = 0; i < F.order; ++i) {
    const fq_t* d = F.digits_of(i);
    fq_t s = 0;
    for (int j = 0; j < F.m; ++j) s = F.fadd(s, F.fmul(tvec[j], d[j]));
    out[i] = s;
  }
  return out;
}

}  // namespace

FqMap fq_map_linear(const FieldCtx& F, const Element& beta) {
  FqMap f;
  f.table = trace_functional_table(F, beta);
  return f;
}

std::vector<FqMap> make_translator_maps(const FieldCtx& F,
                                        const std::vector<Element>& betas,
                                        const std::vector<SelfMap>& Hs,
                                        const LinearizedPoly& L) {
  if (betas.size() != Hs.size())
    throw std::invalid_argument("make_translator_maps: need one H per beta");
  for (const auto& H : Hs)
    if (H.table.size() != F.order)
      throw std::invalid_argument("make_translator_map: H table length must be q^m");
  LinStructure S = structure(F, L);
  if (S.bijective)
    throw hypothesis_error("make_translator_map: the linearized polynomial is bijective");
  std::vector<eidx_t> Ltab = matrix_table(F, S.mat);
  std::vector<FqMap> out;
  out.reserve(betas.size());
  for (std::size_t j = 0; j < betas.size(); ++j) {
    std::vector<fq_t> lin = trace_functional_table(F, betas[j]);
    const std::vector<eidx_t>& Htab = Hs[j].table;
    FqMap f;
    f.table.resize(F.order);
    for (eidx_t i = 0; i < F.order; ++i)
      f.table[i] = F.fadd(lin[i], F.trace_of(Htab[Ltab[i]]));
    f.description = TraceForm{betas[j], Hs[j], L};
    // Certify the kernel basis directions; linearity of the translator set
    // extends the certificate to every nonzero kernel element.
    for (const auto& alpha : S.kernel) {
      fq_t want = F.trace_of(F.index_of(F.mul(alpha, betas[j])));
      auto got = translator_coefficient(F, f, alpha, CheckMode::basis_u);
      if (!got || *got != want)
        throw internal_error("make_translator_map: kernel direction failed certification");
    }
    out.push_back(std::move(f));
  }
  return out;
}

FqMap make_translator_map(const FieldCtx& F, const Element& beta, const SelfMap& H,
                          const LinearizedPoly& L) {
  return make_translator_maps(F, {beta}, {H}, L).front();
}

FqMatrix translator_matrix(const FieldCtx& F, const std::vector<Element>& gammas,
                           const std::vector<FqMap>& fs, CheckMode mode) {
  const int k = static_cast<int>(gammas.size());
  const int cols = static_cast<int>(fs.size());
  {
    FqMatrix G(k, F.m);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < F.m; ++j) G.at(i, j) = gammas[i].c[j];
    if (rank(F, G) != k)
      throw hypothesis_error("translator_matrix: directions are linearly dependent");
  }
  FqMatrix B(k, cols);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < cols; ++j) {
      auto a = translator_coefficient(F, fs[j], gammas[i], mode);
      if (!a)
        throw hypothesis_error("translator_matrix: gamma " + std::to_string(i + 1) +
                               " is not a linear translator of f " + std::to_string(j + 1));
      B.at(i, j) = *a;
    }
  }
  return B;
}

}  // namespace permpoly
