#pragma once

// Linearized polynomials L(x) = sum a_i x^{q^i} over F_{q^m}, kept reduced to
// q-degree < m (x^{q^m} = x on the field, so higher terms fold down).  Each L
// is an F_q-linear self map; its m x m matrix over F_q on the power basis is
// the workhorse for kernels, images and fast whole-field evaluation.

#include <optional>
#include <vector>

#include "permpoly/field_tower.hpp"
#include "permpoly/fq_linalg.hpp"
#include "permpoly/rng.hpp"

namespace permpoly {

struct LinearizedPoly {
  std::vector<Element> a;  // exactly m coefficients, a[i] multiplies x^{q^i}
};

// Folds an arbitrary-length coefficient list into the reduced length-m form.
LinearizedPoly lin_from_coeffs(const FieldCtx& F, const std::vector<Element>& coeffs);

LinearizedPoly lin_zero(const FieldCtx& F);
bool lin_is_zero(const LinearizedPoly& L);

Element eval_lin(const FieldCtx& F, const LinearizedPoly& L, const Element& x);

struct LinStructure {
  FqMatrix mat;                      // m x m over F_q
  std::vector<Element> kernel;       // canonical basis (RREF coordinate rows)
  std::vector<Element> image;        // canonical basis of the column span
  int kernel_dim = 0;
  bool bijective = false;
  bool trivial_intersection = false; // Ker(L) ∩ Im(L) = {0}
};

LinStructure structure(const FieldCtx& F, const LinearizedPoly& L);

// Whole-field evaluation table: entry i is index_of(L(element i)).
std::vector<eidx_t> lin_table(const FieldCtx& F, const LinearizedPoly& L);
std::vector<eidx_t> matrix_table(const FieldCtx& F, const FqMatrix& M);

// Named builders.
LinearizedPoly lin_trace(const FieldCtx& F);            // all coefficients 1
LinearizedPoly lin_diff(const FieldCtx& F, int k);      // x - x^{q^k}, 1 <= k < m

// Degree-q^2 map with kernel containing {1, gamma}; needs gamma outside F_q.
LinearizedPoly lin_two_root(const FieldCtx& F, const Element& gamma);

// Monic (in x^{q^3}) map with kernel exactly span{1, alpha, alpha^2}; needs
// m > 3 and 1, alpha, alpha^2, alpha^3 pairwise q-power separated (any
// element generating a degree >= 4 subfield works, a primitive one always).
LinearizedPoly lin_three_root(const FieldCtx& F, const Element& alpha);

struct RandomLinOpts {
  int min_kernel_dim = 1;
  std::optional<int> exact_kernel_dim;
  int max_kernel_dim = kMaxDeg;
  bool require_trivial_intersection = false;
  int max_tries = 10000;
};

// Rejection sampling on uniformly drawn coefficient vectors; nullopt when the
// constraint set was not hit within max_tries.
std::optional<LinearizedPoly> random_linearized(const FieldCtx& F, Rng& rng,
                                                const RandomLinOpts& opts);

// All q^k elements of the kernel span, as canonical indices in ascending order.
std::vector<eidx_t> subspace_elements(const FieldCtx& F, const std::vector<Element>& basis);

}  // namespace permpoly
