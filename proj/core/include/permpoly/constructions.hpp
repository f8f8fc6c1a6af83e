// Builders and exact decision criteria for the permutation families the tool
// knows how to construct:
//
//   det form    F(x) = L(x) + sum_j gamma_j h_j(f_j(x)),  gamma a basis of
//               Ker(L), Ker(L) and Im(L) meeting trivially; permutation iff
//               det(b_ij) != 0 where gamma_i is a b_ij-translator of f_j.
//   rank form   F(x) = x + sum_j gamma_j f_j(x), gamma linearly independent;
//               permutation iff rank(I+A) = k, and q^l-to-1 when the rank
//               drops to k-l.
//   complete    rank form plus F(x)+x also permuting (odd characteristic);
//               decided by rank(I+A) = k and rank(2I+A) = k.
//   coset form  F(x) = L(x) + sum_i gamma_i Tr(h_i(x)) with gamma_i in
//               Ker(L); permutation iff for every nonzero kernel element
//               eps and every x some h_i has Tr(h_i(x+eps) - h_i(x)) != 0.
//
// Every certificate carries a replayable construction config, the criterion
// payload, and (when the oracle runs) the brute-force verdict and fiber
// histogram. Criterion and oracle must agree; a mismatch is an internal bug.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "permpoly/field_tower.hpp"
#include "permpoly/fq_linalg.hpp"
#include "permpoly/linearized.hpp"
#include "permpoly/translators.hpp"

namespace permpoly {

enum class PermKind { power, dickson, table };

// A permutation of F_q, materialized as a lookup table at construction time
// and validated there (power needs gcd(t, q-1) = 1, dickson gcd(t, q^2-1) = 1,
// an explicit table must be a bijection).
struct FqPermSpec {
  PermKind kind = PermKind::power;
  std::uint64_t t = 1;
  std::vector<fq_t> tab;  // full table over F_q, always present
};

FqPermSpec perm_power(const FieldCtx& F, std::uint64_t t);
FqPermSpec perm_dickson(const FieldCtx& F, std::uint64_t t);
FqPermSpec perm_table(const FieldCtx& F, std::vector<fq_t> values);

fq_t fq_perm_eval(const FieldCtx& F, const FqPermSpec& h, fq_t c);

// D_t(x, 1) by the recurrence D_0 = 2, D_1 = x, D_t = x D_{t-1} - D_{t-2}.
// Exponents at or above q^2 - 1 are reduced first; the value is unchanged
// since D_t(y + 1/y) = y^t + y^{-t} over the quadratic extension.
fq_t dickson_eval(const FieldCtx& F, std::uint64_t t, fq_t x);

nlohmann::json perm_spec_to_json(const FqPermSpec& h);
FqPermSpec perm_spec_from_json(const FieldCtx& F, const nlohmann::json& j);

struct ConstructedMap {
  std::vector<eidx_t> table;  // q^m values, indexed by canonical element index
  nlohmann::json description;
};

struct Certificate {
  long p = 0;
  int n = 0, m = 0;
  nlohmann::json construction;  // replayable config
  nlohmann::json criterion;     // matrix / value / witness payload
  bool criterion_verdict = false;
  std::optional<bool> oracle_verdict;
  std::optional<std::vector<std::pair<std::uint64_t, std::uint64_t>>> fibers;
  ConstructedMap map;
};

nlohmann::json certificate_to_json(const Certificate& cert);

struct BuildOpts {
  bool oracle = true;
  // With the oracle on, a criterion/oracle mismatch throws internal_error.
  // Sweeps turn this off to record the mismatch as a counterexample instead.
  bool enforce_agreement = true;
};

Certificate build_det_criterion(const FieldCtx& F, const LinearizedPoly& L,
                                const std::vector<Element>& gammas,
                                const std::vector<FqPermSpec>& hs,
                                const std::vector<FqMap>& fs, const BuildOpts& opts = {});

Certificate build_rank_criterion(const FieldCtx& F, const std::vector<Element>& gammas,
                                 const std::vector<FqMap>& fs, const BuildOpts& opts = {});

Certificate build_complete_mapping(const FieldCtx& F, const std::vector<Element>& gammas,
                                   const std::vector<FqMap>& fs, const BuildOpts& opts = {});

Certificate build_coset_criterion(const FieldCtx& F, const LinearizedPoly& L,
                                  const std::vector<Element>& gammas,
                                  const std::vector<SelfMap>& hs, const BuildOpts& opts = {});

// Parameters for the preset catalog below; which fields matter depends on
// the preset id.
struct PresetArgs {
  std::optional<LinearizedPoly> L;   // "2.8": the underlying linearized map
  std::vector<Element> gammas;       // translator directions (or theta basis)
  std::vector<Element> betas;        // beta parameters of the assembled f_j
  std::vector<FqMap> fs;             // "2.1"/"2.2": explicit translator maps
  std::vector<FqPermSpec> hs;        // F_q permutations for det-form presets
  std::vector<SelfMap> Hs;           // H_j of the assembled f_j
  std::vector<SelfMap> coset_hs;     // h_i maps for coset-form presets
  std::optional<Element> alpha;      // "2.4"/"2.9": generator, default canonical
};

// Assembles a catalog preset and delegates to the matching criterion builder.
// Ids: "2.1" (trace det form), "2.2" (half-difference det form), "2.3"
// (trace det form with assembled f_j and predicted matrix Tr(gamma_i
// beta_j)), "2.4" (generator powers, predicted Tr(alpha^{i-1} beta_j)),
// "2.8" (rank form over Ker(L), predicted I + Tr(theta_i beta_j)), "2.9"
// (rank form on the three-root kernel, predicted I + Tr(alpha^{i-1}
// gamma_j), with the legacy printed matrix also recorded), "3.1"/"3.2"
// (coset forms over the trace / half-difference kernels).
// The predicted closed-form matrix is checked entry-wise against the generic
// translator matrix.
Certificate build_preset(const FieldCtx& F, const std::string& id, const PresetArgs& args,
                         const BuildOpts& opts = {});

// Worked examples on F_{q^4}. "2.1": F(x) = x^{q^2} - x + (Tr(H_1(x^{q^2}-x)
// + beta_1 x))^{t_1} + alpha (Tr(H_2(x^{q^2}-x) + beta_2 x))^{t_2} with
// alpha in the quadratic subfield but outside F_q; permutation iff
// det[[Tr(beta_1), Tr(beta_2)], [Tr(alpha beta_1), Tr(alpha beta_2)]] != 0.
// "2.2": F(x) = Tr-poly(x) + sum_i alpha^i D_{t_i}(Tr(H_i(Tr-poly(x)) +
// beta_i x), 1) with alpha the canonical generator; permutation iff
// det(Tr(alpha^i beta_j)) != 0. Requires {alpha, alpha^2, alpha^3} to span
// the trace kernel, which pins q = 3 for the canonical generator.
struct ExampleArgs {
  std::optional<Element> alpha;
  std::vector<std::uint64_t> ts;
  std::vector<Element> betas;
  std::vector<SelfMap> Hs;
};

Certificate build_worked_example(const FieldCtx& F, const std::string& id,
                                 const ExampleArgs& args, const BuildOpts& opts = {});

// Canonical parameter choices: the smallest-index element generating the
// multiplicative group of the degree-d subfield, and the smallest-index
// element of the quadratic subfield outside F_q.
Element canonical_subfield_primitive(const FieldCtx& F, int d);
Element canonical_quadratic_nonbase(const FieldCtx& F);

}  // namespace permpoly
