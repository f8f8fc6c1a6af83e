// Linearized polynomials (structure, named builders, sampling) and the
// translator layer built on them. The F_9 values pinned below come from the
// canonical model F_3[Y]/(Y^2+1): Tr(1) = 2, Tr(Y) = 0, Y^3 = -Y.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "permpoly/errors.hpp"
#include "permpoly/field_tower.hpp"
#include "permpoly/linearized.hpp"
#include "permpoly/rng.hpp"
#include "permpoly/translators.hpp"

using namespace permpoly;

namespace {

// Direct power-sum evaluation, independent of the matrix path inside the lib.
Element eval_by_powers(const FieldCtx& F, const LinearizedPoly& L, const Element& x) {
  Element acc = F.zero();
  std::uint64_t e = 1;
  for (int i = 0; i < F.m; ++i) {
    acc = F.add(acc, F.mul(L.a[i], F.pow(x, e)));
    e *= F.q;
  }
  return acc;
}

LinearizedPoly random_lin(const FieldCtx& F, Rng& rng) {
  LinearizedPoly L;
  for (int i = 0; i < F.m; ++i) L.a.push_back(F.from_index(rng.below(F.order)));
  return L;
}

// f(x) = Tr(x^2) on the given field, as a bare table.
FqMap trace_of_square(const FieldCtx& F) {
  FqMap f;
  f.table.resize(F.order);
  for (eidx_t i = 0; i < F.order; ++i)
    f.table[i] = F.trace_of(F.index_of(F.mul(F.from_index(i), F.from_index(i))));
  return f;
}

}  // namespace

TEST_CASE("evaluation matches the explicit power sum") {
  for (auto [p, n, m] : {std::array<int, 3>{3, 1, 2}, {2, 1, 3}, {2, 2, 2}, {3, 1, 3}, {5, 1, 2}}) {
    FieldCtx F = make_field(p, n, m);
    Rng rng(mix_seed({41, static_cast<std::uint64_t>(p * 100 + n * 10 + m)}));
    for (int t = 0; t < 10; ++t) {
      LinearizedPoly L = random_lin(F, rng);
      for (eidx_t i = 0; i < F.order; ++i) {
        Element x = F.from_index(i);
        CHECK(eval_lin(F, L, x) == eval_by_powers(F, L, x));
      }
      auto table = lin_table(F, L);
      for (eidx_t i = 0; i < F.order; ++i)
        CHECK(table[i] == F.index_of(eval_lin(F, L, F.from_index(i))));
      auto S = structure(F, L);
      CHECK(matrix_table(F, S.mat) == table);
    }
  }
}

TEST_CASE("coefficient folding uses x^{q^m} = x") {
  FieldCtx F = make_field(3, 1, 2);
  // x^{q^2} alone must collapse to x
  std::vector<Element> coeffs(3, F.zero());
  coeffs[2] = F.one();
  LinearizedPoly L = lin_from_coeffs(F, coeffs);
  REQUIRE(L.a.size() == 2);
  for (eidx_t i = 0; i < F.order; ++i)
    CHECK(eval_lin(F, L, F.from_index(i)) == F.from_index(i));
}

TEST_CASE("frozen structure of the trace map on F_9") {
  FieldCtx F = make_field(3, 1, 2);
  LinearizedPoly L = lin_trace(F);
  REQUIRE(L.a.size() == 2);
  CHECK(L.a[0] == F.one());
  CHECK(L.a[1] == F.one());
  auto S = structure(F, L);
  CHECK(S.mat.at(0, 0) == 2);  // image of 1 is Tr(1) = 2
  CHECK(S.mat.at(1, 0) == 0);
  CHECK(S.mat.at(0, 1) == 0);  // image of Y is Tr(Y) = 0
  CHECK(S.mat.at(1, 1) == 0);
  CHECK(S.kernel_dim == 1);
  REQUIRE(S.kernel.size() == 1);
  CHECK(F.index_of(S.kernel[0]) == 3);  // span{Y}
  REQUIRE(S.image.size() == 1);
  CHECK(F.index_of(S.image[0]) == 1);  // span{1}
  CHECK(!S.bijective);
  CHECK(S.trivial_intersection);
}

TEST_CASE("frozen structure of x - x^q on F_9") {
  FieldCtx F = make_field(3, 1, 2);
  LinearizedPoly L = lin_diff(F, 1);
  auto S = structure(F, L);
  CHECK(S.kernel_dim == 1);
  REQUIRE(S.kernel.size() == 1);
  CHECK(F.index_of(S.kernel[0]) == 1);  // the base field
  REQUIRE(S.image.size() == 1);
  CHECK(F.index_of(S.image[0]) == 3);  // span{Y}
  CHECK(S.trivial_intersection);
  CHECK_THROWS_AS(lin_diff(F, 0), std::invalid_argument);
  CHECK_THROWS_AS(lin_diff(F, 2), std::invalid_argument);
}

TEST_CASE("kernel and image really are kernel and image") {
  FieldCtx F = make_field(2, 1, 4);
  Rng rng(43);
  for (int t = 0; t < 20; ++t) {
    LinearizedPoly L = random_lin(F, rng);
    auto S = structure(F, L);
    for (const auto& k : S.kernel) CHECK(eval_lin(F, L, k).is_zero());
    CHECK(static_cast<int>(S.kernel.size()) == S.kernel_dim);
    CHECK(static_cast<int>(S.image.size()) == F.m - S.kernel_dim);
    CHECK(S.bijective == (S.kernel_dim == 0));
    // every actual value lies in the span of the image basis
    auto img = subspace_elements(F, S.image);
    auto tab = lin_table(F, L);
    for (eidx_t v : tab) CHECK(std::binary_search(img.begin(), img.end(), v));
  }
}

TEST_CASE("two-root builder annihilates 1 and gamma") {
  for (auto [p, n, m] : {std::array<int, 3>{2, 1, 3}, {3, 1, 3}}) {
    FieldCtx F = make_field(p, n, m);
    Element gamma = F.from_index(F.q);  // Y, outside F_q
    LinearizedPoly L = lin_two_root(F, gamma);
    CHECK(eval_lin(F, L, F.one()).is_zero());
    CHECK(eval_lin(F, L, gamma).is_zero());
    auto S = structure(F, L);
    CHECK(S.kernel_dim == 2);
  }
}

TEST_CASE("three-root builder has kernel exactly span{1, alpha, alpha^2}") {
  for (auto [p, n, m] : {std::array<int, 3>{2, 1, 4}, {3, 1, 4}}) {
    FieldCtx F = make_field(p, n, m);
    Element alpha = F.find_primitive(FieldCtx::Level::outer);
    LinearizedPoly N = lin_three_root(F, alpha);
    std::vector<Element> want = {F.one(), alpha, F.mul(alpha, alpha)};
    for (const auto& w : want) CHECK(eval_lin(F, N, w).is_zero());
    auto S = structure(F, N);
    CHECK(S.kernel_dim == 3);
    auto span = subspace_elements(F, want);
    auto kernel = subspace_elements(F, S.kernel);
    CHECK(span == kernel);
  }
  FieldCtx F3 = make_field(3, 1, 3);
  CHECK_THROWS_AS(lin_three_root(F3, F3.find_primitive(FieldCtx::Level::outer)),
                  std::invalid_argument);
}

TEST_CASE("random_linearized respects its constraints") {
  FieldCtx F = make_field(3, 1, 2);
  Rng rng(47);
  RandomLinOpts opts;
  opts.exact_kernel_dim = 1;
  for (int t = 0; t < 20; ++t) {
    auto L = random_linearized(F, rng, opts);
    REQUIRE(L.has_value());
    CHECK(structure(F, *L).kernel_dim == 1);
  }
  opts.exact_kernel_dim = {};
  opts.min_kernel_dim = 1;
  opts.require_trivial_intersection = true;
  for (int t = 0; t < 20; ++t) {
    auto L = random_linearized(F, rng, opts);
    REQUIRE(L.has_value());
    auto S = structure(F, *L);
    CHECK(S.kernel_dim >= 1);
    CHECK(S.trivial_intersection);
  }
  // no linearized map has kernel dimension above m
  RandomLinOpts impossible;
  impossible.exact_kernel_dim = 3;
  impossible.max_tries = 200;
  CHECK(!random_linearized(F, rng, impossible).has_value());
}

TEST_CASE("subspace_elements enumerates the span in ascending index order") {
  FieldCtx F = make_field(3, 1, 2);
  CHECK(subspace_elements(F, {F.one()}) == std::vector<eidx_t>{0, 1, 2});
  CHECK(subspace_elements(F, {F.from_index(3)}) == std::vector<eidx_t>{0, 3, 6});
  auto all = subspace_elements(F, {F.one(), F.from_index(3)});
  CHECK(all.size() == 9);
  CHECK(all.front() == 0);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(subspace_elements(F, {}) == std::vector<eidx_t>{0});
}

TEST_CASE("linear forms translate in every direction") {
  FieldCtx F = make_field(3, 1, 2);
  FqMap tr = fq_map_linear(F, F.one());
  // table really is x -> Tr(x)
  for (eidx_t i = 0; i < F.order; ++i) CHECK(tr.table[i] == F.trace_of(i));

  auto a1 = translator_coefficient(F, tr, F.one());
  REQUIRE(a1.has_value());
  CHECK(*a1 == 2);  // Tr(1) = 2
  auto aY = translator_coefficient(F, tr, F.from_index(3));
  REQUIRE(aY.has_value());
  CHECK(*aY == 0);  // Tr(Y) = 0
  CHECK_THROWS_AS(translator_coefficient(F, tr, F.zero()), hypothesis_error);

  auto certs = all_translators(F, tr);
  CHECK(certs.size() == 8);  // every nonzero direction works
  for (const auto& c : certs)
    CHECK(c.a == F.trace_of(F.index_of(F.mul(c.alpha, F.one()))));
}

TEST_CASE("Tr(x^2) admits no translator on F_9") {
  FieldCtx F = make_field(3, 1, 2);
  FqMap f = trace_of_square(F);
  int candidates = 0;
  for (eidx_t i = 1; i < F.order; ++i) {
    ++candidates;
    CHECK(!translator_coefficient(F, f, F.from_index(i)).has_value());
  }
  CHECK(candidates == 8);
  CHECK(all_translators(F, f).empty());
}

TEST_CASE("the zero function translates trivially in every direction") {
  FieldCtx F = make_field(3, 1, 2);
  FqMap z;
  z.table.assign(F.order, 0);
  auto certs = all_translators(F, z);
  CHECK(certs.size() == 8);
  for (const auto& c : certs) CHECK(c.a == 0);
}

TEST_CASE("checking u over a basis equals checking every u") {
  FieldCtx F = make_field(2, 2, 2);  // proper basis case: F_4 needs two basis u's
  Rng rng(53);
  for (eidx_t b = 0; b < F.order; ++b) {
    FqMap f = fq_map_linear(F, F.from_index(b));
    auto all = all_translators(F, f, CheckMode::all_u);
    auto basis = all_translators(F, f, CheckMode::basis_u);
    REQUIRE(all.size() == basis.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
      CHECK(all[i].alpha == basis[i].alpha);
      CHECK(all[i].a == basis[i].a);
    }
  }
  // and on unstructured tables, where most directions fail
  for (int t = 0; t < 10; ++t) {
    FqMap f;
    f.table.resize(F.order);
    for (auto& v : f.table) v = static_cast<fq_t>(rng.below(F.q));
    for (eidx_t i = 1; i < F.order; ++i) {
      Element alpha = F.from_index(i);
      CHECK(translator_coefficient(F, f, alpha, CheckMode::all_u) ==
            translator_coefficient(F, f, alpha, CheckMode::basis_u));
    }
  }
}

TEST_CASE("assembled trace-form maps match their definition pointwise") {
  FieldCtx F = make_field(3, 1, 2);
  LinearizedPoly L = lin_diff(F, 1);
  Rng rng(59);
  for (int t = 0; t < 8; ++t) {
    Element beta = F.from_index(rng.below(F.order));
    SelfMap H = random_self_map(F, rng);
    FqMap f = make_translator_map(F, beta, H, L);
    REQUIRE(f.description.has_value());
    for (eidx_t i = 0; i < F.order; ++i) {
      Element x = F.from_index(i);
      Element inner = F.add(F.mul(beta, x), F.from_index(H.table[F.index_of(eval_lin(F, L, x))]));
      CHECK(f.table[i] == F.rel_trace(inner));
    }
    // every nonzero kernel element of L translates f
    auto S = structure(F, L);
    for (const auto& k : S.kernel) {
      auto a = translator_coefficient(F, f, k);
      REQUIRE(a.has_value());
      CHECK(*a == F.trace_of(F.index_of(F.mul(k, beta))));
    }
  }
}

TEST_CASE("batch assembly equals one-at-a-time assembly") {
  FieldCtx F = make_field(3, 1, 2);
  LinearizedPoly L = lin_trace(F);
  Rng rng(61);
  std::vector<Element> betas;
  std::vector<SelfMap> Hs;
  for (int j = 0; j < 3; ++j) {
    betas.push_back(F.from_index(rng.below(F.order)));
    Hs.push_back(random_self_map(F, rng));
  }
  auto batch = make_translator_maps(F, betas, Hs, L);
  REQUIRE(batch.size() == 3);
  for (int j = 0; j < 3; ++j) {
    FqMap single = make_translator_map(F, betas[j], Hs[j], L);
    CHECK(batch[j].table == single.table);
  }
  CHECK_THROWS_AS(make_translator_maps(F, betas, {Hs[0]}, L), std::invalid_argument);
}

TEST_CASE("bijective linearized polynomials are rejected") {
  FieldCtx F = make_field(3, 1, 2);
  std::vector<Element> coeffs = {F.one(), F.zero()};  // L(x) = x
  LinearizedPoly L = lin_from_coeffs(F, coeffs);
  CHECK(structure(F, L).bijective);
  CHECK_THROWS_AS(make_translator_map(F, F.one(), self_map_zero(F), L), hypothesis_error);
}

TEST_CASE("map validation catches malformed tables") {
  FieldCtx F = make_field(3, 1, 2);
  FqMap f;
  f.table.assign(4, 0);  // wrong length
  CHECK_THROWS_AS(validate_fq_map(F, f), std::invalid_argument);
  f.table.assign(F.order, 0);
  f.table[2] = 3;  // out of F_3
  CHECK_THROWS_AS(validate_fq_map(F, f), std::invalid_argument);
  FqMap good = make_translator_map(F, F.one(), self_map_zero(F), lin_trace(F));
  CHECK_NOTHROW(validate_fq_map(F, good));
  good.table[0] = F.fadd(good.table[0], 1);  // break agreement with the description
  CHECK_THROWS_AS(validate_fq_map(F, good), std::invalid_argument);
}

TEST_CASE("frozen translator matrices on F_9") {
  FieldCtx F = make_field(3, 1, 2);
  FqMap tr = fq_map_linear(F, F.one());
  FqMatrix B1 = translator_matrix(F, {F.one()}, {tr});
  CHECK(B1.rows == 1);
  CHECK(B1.at(0, 0) == 2);
  FqMatrix B2 = translator_matrix(F, {F.from_index(3)}, {tr});
  CHECK(B2.at(0, 0) == 0);

  // a missing translator names its (row, column) pair
  FqMap bad = trace_of_square(F);
  try {
    translator_matrix(F, {F.one()}, {bad});
    FAIL("expected hypothesis_error");
  } catch (const hypothesis_error& e) {
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }

  // dependent directions are rejected up front
  CHECK_THROWS_AS(translator_matrix(F, {F.one(), F.from_fq(2)}, {tr, tr}), hypothesis_error);
}

TEST_CASE("self map constructors") {
  FieldCtx F = make_field(3, 1, 2);
  SelfMap z = self_map_zero(F);
  for (eidx_t v : z.table) CHECK(v == 0);
  // H(x) = 1 + 2x as a polynomial
  SelfMap aff = self_map_from_poly(F, {F.one(), F.from_fq(2)});
  for (eidx_t i = 0; i < F.order; ++i)
    CHECK(aff.table[i] == F.index_of(F.add(F.one(), F.smul(2, F.from_index(i)))));
  CHECK_THROWS_AS(self_map_from_table(F, std::vector<eidx_t>{1, 2}), std::invalid_argument);
  std::vector<eidx_t> oob(F.order, 0);
  oob[0] = F.order;
  CHECK_THROWS_AS(self_map_from_table(F, oob), std::invalid_argument);
  Rng rng(67);
  SelfMap r1 = random_self_map(F, rng);
  CHECK(r1.table.size() == F.order);
}
