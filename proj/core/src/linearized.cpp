#include "permpoly/linearized.hpp"

#include <algorithm>

namespace permpoly {

LinearizedPoly lin_from_coeffs(const FieldCtx& F, const std::vector<Element>& coeffs) {
  LinearizedPoly L;
  L.a.assign(F.m, F.zero());
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    L.a[i % F.m] = F.add(L.a[i % F.m], coeffs[i]);
  return L;
}

LinearizedPoly lin_zero(const FieldCtx& F) {
  LinearizedPoly L;
  L.a.assign(F.m, F.zero());
  return L;
}

bool lin_is_zero(const LinearizedPoly& L) {
  for (const auto& c : L.a)
    if (!c.is_zero()) return false;
  return true;
}

Element eval_lin(const FieldCtx& F, const LinearizedPoly& L, const Element& x) {
  Element acc = F.zero();
  for (int i = 0; i < F.m; ++i) {
    if (L.a[i].is_zero()) continue;
    acc = F.add(acc, F.mul(L.a[i], F.frobenius(x, i)));
  }
  return acc;
}

LinStructure structure(const FieldCtx& F, const LinearizedPoly& L) {
  const int m = F.m;
  LinStructure S;
  S.mat = FqMatrix(m, m);
  for (int j = 0; j < m; ++j) {
    Element basis = F.zero();
    basis.c[j] = 1;
    Element img = eval_lin(F, L, basis);
    for (int r = 0; r < m; ++r) S.mat.at(r, j) = img.c[r];
  }

  auto rows_to_elements = [&](const std::vector<std::vector<fq_t>>& rows) {
    std::vector<Element> out;
    for (const auto& row : rows) {
      Element e = F.zero();
      for (int i = 0; i < m; ++i) e.c[i] = row[i];
      out.push_back(e);
    }
    return out;
  };

  S.kernel = rows_to_elements(span_basis(F, null_space(F, S.mat), m));
  S.kernel_dim = static_cast<int>(S.kernel.size());
  S.bijective = (S.kernel_dim == 0);

  std::vector<std::vector<fq_t>> cols;
  for (int j = 0; j < m; ++j) {
    std::vector<fq_t> col(m);
    for (int r = 0; r < m; ++r) col[r] = S.mat.at(r, j);
    cols.push_back(std::move(col));
  }
  S.image = rows_to_elements(span_basis(F, cols, m));

  // Ker + Im is direct iff stacking both bases does not drop rank.
  FqMatrix stacked(static_cast<int>(S.kernel.size() + S.image.size()), m);
  int r = 0;
  for (const auto& e : S.kernel) {
    for (int j = 0; j < m; ++j) stacked.at(r, j) = e.c[j];
    ++r;
  }
  for (const auto& e : S.image) {
    for (int j = 0; j < m; ++j) stacked.at(r, j) = e.c[j];
    ++r;
  }
  S.trivial_intersection =
      rank(F, stacked) == static_cast<int>(S.kernel.size() + S.image.size());
  return S;
}

std::vector<eidx_t> matrix_table(const FieldCtx& F, const FqMatrix& M) {
  const int m = F.m;
  std::vector<eidx_t> tab(F.order);
  std::vector<std::uint64_t> qpow(m);
  std::uint64_t mult = 1;
  for (int i = 0; i < m; ++i) {
    qpow[i] = mult;
    mult *= F.q;
  }
  for (eidx_t i = 0; i < F.order; ++i) {
    const fq_t* d = F.digits_of(i);
    eidx_t out = 0;
    for (int r = 0; r < m; ++r) {
      fq_t acc = 0;
      for (int j = 0; j < m; ++j)
        if (d[j]) acc = F.fadd(acc, F.fmul(M.at(r, j), d[j]));
      out += acc * qpow[r];
    }
    tab[i] = out;
  }
  return tab;
}

std::vector<eidx_t> lin_table(const FieldCtx& F, const LinearizedPoly& L) {
  return matrix_table(F, structure(F, L).mat);
}

LinearizedPoly lin_trace(const FieldCtx& F) {
  LinearizedPoly L;
  L.a.assign(F.m, F.one());
  return L;
}

LinearizedPoly lin_diff(const FieldCtx& F, int k) {
  if (k < 1 || k >= F.m) throw std::invalid_argument("lin_diff: need 1 <= k < m");
  LinearizedPoly L = lin_zero(F);
  L.a[0] = F.one();
  L.a[k] = F.neg(F.one());
  return L;
}

LinearizedPoly lin_two_root(const FieldCtx& F, const Element& gamma) {
  if (F.m < 2) throw std::invalid_argument("lin_two_root: need m >= 2");
  Element gq = F.frobenius(gamma, 1);
  if (gq == gamma) throw hypothesis_error("lin_two_root: gamma lies in the base field");
  Element c = F.pow(F.sub(gq, gamma), F.q - 1);  // (gamma^q - gamma)^(q-1)
  std::vector<Element> coeffs = {c, F.neg(F.add(F.one(), c)), F.one()};
  LinearizedPoly L = lin_from_coeffs(F, coeffs);
  if (!eval_lin(F, L, F.one()).is_zero() || !eval_lin(F, L, gamma).is_zero())
    throw internal_error("lin_two_root: stated roots are not roots");
  return L;
}

LinearizedPoly lin_three_root(const FieldCtx& F, const Element& alpha) {
  if (F.m <= 3) throw std::invalid_argument("lin_three_root: need m > 3");
  const Element a1 = alpha;
  const Element a2 = F.mul(alpha, alpha);
  {
    FqMatrix M(3, F.m);
    const Element one = F.one();
    for (int j = 0; j < F.m; ++j) {
      M.at(0, j) = one.c[j];
      M.at(1, j) = a1.c[j];
      M.at(2, j) = a2.c[j];
    }
    if (rank(F, M) != 3)
      throw hypothesis_error("lin_three_root: 1, alpha, alpha^2 are linearly dependent");
  }
  Element fq1 = F.frobenius(alpha, 1);
  Element fq2 = F.frobenius(alpha, 2);
  Element fq3 = F.frobenius(alpha, 3);
  Element den = F.sub(fq2, fq1);  // alpha^{q^2} - alpha^q, nonzero given independence
  Element den_inv = F.inv(den);
  Element a = F.mul(F.mul(F.sub(alpha, fq3), F.pow(F.sub(fq2, alpha), F.q - 1)), den_inv);
  Element b = F.mul(F.mul(F.sub(fq3, alpha), F.pow(F.sub(alpha, fq1), F.q * F.q - 1)), den_inv);
  Element c = F.neg(F.add(F.one(), F.add(a, b)));
  LinearizedPoly L = lin_from_coeffs(F, {c, b, a, F.one()});
  if (!eval_lin(F, L, F.one()).is_zero() || !eval_lin(F, L, alpha).is_zero() ||
      !eval_lin(F, L, a2).is_zero())
    throw internal_error("lin_three_root: 1, alpha, alpha^2 are not all roots");
  return L;
}

std::optional<LinearizedPoly> random_linearized(const FieldCtx& F, Rng& rng,
                                                const RandomLinOpts& opts) {
  for (int t = 0; t < opts.max_tries; ++t) {
    LinearizedPoly L;
    L.a.reserve(F.m);
    for (int i = 0; i < F.m; ++i) L.a.push_back(F.from_index(rng.below(F.order)));
    LinStructure S = structure(F, L);
    if (S.kernel_dim < opts.min_kernel_dim || S.kernel_dim > opts.max_kernel_dim) continue;
    if (opts.exact_kernel_dim && S.kernel_dim != *opts.exact_kernel_dim) continue;
    if (opts.require_trivial_intersection && !S.trivial_intersection) continue;
    return L;
  }
  return std::nullopt;
}

std::vector<eidx_t> subspace_elements(const FieldCtx& F, const std::vector<Element>& basis) {
  std::vector<eidx_t> out = {0};
  for (const auto& b : basis) {
    std::vector<eidx_t> next;
    next.reserve(out.size() * F.q);
    for (fq_t c = 0; c < F.q; ++c) {
      Element cb = F.smul(c, b);
      eidx_t cb_idx = F.index_of(cb);
      for (eidx_t e : out) next.push_back(F.index_add(e, cb_idx));
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace permpoly
