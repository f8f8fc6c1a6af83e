// Linear-translator machinery: verifying that shifting the argument of an
// F_q-valued map by a fixed direction changes the value linearly, searching
// for all such directions, building maps that have prescribed translators,
// and assembling the coefficient matrix used by the permutation criteria.

#pragma once

#include <optional>
#include <vector>

#include "permpoly/field_tower.hpp"
#include "permpoly/fq_linalg.hpp"
#include "permpoly/linearized.hpp"
#include "permpoly/rng.hpp"

namespace permpoly {

// H: F_{q^m} -> F_{q^m}, materialized as a table of element indices.
// `poly` optionally records coefficients when H was built from a polynomial
// (H(x) = sum poly[i] x^i); the table is still the single evaluation path.
struct SelfMap {
  std::vector<eidx_t> table;
  std::optional<std::vector<Element>> poly;
};

// Structured origin of an FqMap: f(x) = Tr(beta*x + H(L(x))).
struct TraceForm {
  Element beta;
  SelfMap H;
  LinearizedPoly L;
};

// f: F_{q^m} -> F_q as a full table over canonical element indices. When a
// TraceForm is attached the table must match it pointwise.
struct FqMap {
  std::vector<fq_t> table;
  std::optional<TraceForm> description;
};

struct TranslatorCertificate {
  Element alpha;  // nonzero direction
  fq_t a;         // f(x + u*alpha) - f(x) = u*a for all x and all u in F_q
};

// How to quantify over u when checking the translator identity. Checking u
// over an F_p-basis of F_q is equivalent to checking every u (the difference
// telescopes over sums of basis elements); both paths are kept and must agree.
enum class CheckMode { all_u, basis_u };

SelfMap self_map_zero(const FieldCtx& F);
SelfMap self_map_from_table(const FieldCtx& F, std::vector<eidx_t> table);
SelfMap self_map_from_poly(const FieldCtx& F, const std::vector<Element>& coeffs);
SelfMap random_self_map(const FieldCtx& F, Rng& rng);

FqMap fq_map_from_table(const FieldCtx& F, std::vector<fq_t> table);
FqMap fq_map_trace(const FieldCtx& F);

// Checks the structural invariants of f: table length q^m, values below q,
// and pointwise agreement with the attached description if any.
void validate_fq_map(const FieldCtx& F, const FqMap& f);

// Candidate a = f(alpha) - f(0); returned iff the identity holds for every x
// (and every u per `mode`). alpha must be nonzero.
std::optional<fq_t> translator_coefficient(const FieldCtx& F, const FqMap& f,
                                           const Element& alpha,
                                           CheckMode mode = CheckMode::all_u);

// All nonzero alpha admitting a coefficient, in ascending canonical index
// order. Verifies post-hoc that the found set plus 0 is an F_q-subspace and
// that alpha -> a is F_q-linear on it.
std::vector<TranslatorCertificate> all_translators(const FieldCtx& F, const FqMap& f,
                                                   CheckMode mode = CheckMode::all_u);

// f(x) = Tr(beta*x), as a bare table. Every direction alpha is then a
// Tr(alpha*beta)-translator, which makes this the degenerate reference case.
FqMap fq_map_linear(const FieldCtx& F, const Element& beta);

// f(x) = Tr(beta*x + H(L(x))) for a non-bijective L. Every nonzero kernel
// element of L is certified a Tr(alpha*beta)-translator of the result
// (checked on a kernel basis; linearity of the translator set extends it).
FqMap make_translator_map(const FieldCtx& F, const Element& beta, const SelfMap& H,
                          const LinearizedPoly& L);

// Batch form of make_translator_map sharing one evaluation table for L across
// all (beta, H) pairs. betas and Hs must have equal length.
std::vector<FqMap> make_translator_maps(const FieldCtx& F,
                                        const std::vector<Element>& betas,
                                        const std::vector<SelfMap>& Hs,
                                        const LinearizedPoly& L);

// B[i][j] = coefficient making gammas[i] a translator of fs[j]. The gammas
// must be linearly independent; a missing translator raises an error naming
// the failing (row, column) pair, 1-based.
FqMatrix translator_matrix(const FieldCtx& F, const std::vector<Element>& gammas,
                           const std::vector<FqMap>& fs,
                           CheckMode mode = CheckMode::all_u);

}  // namespace permpoly
