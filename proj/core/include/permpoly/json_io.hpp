// JSON wire forms for the core value types. Elements are emitted with both
// encodings ({"index": i, "coeffs": [[...], ...]}) and accepted as a bare
// index, a nested little-endian coefficient array, or that object. Long
// tables (maps over the whole field) carry bare indices to stay readable.

#pragma once

#include <json.hpp>

#include "permpoly/field_tower.hpp"
#include "permpoly/fq_linalg.hpp"
#include "permpoly/linearized.hpp"
#include "permpoly/translators.hpp"

namespace permpoly {

nlohmann::json field_to_json(const FieldCtx& F);

nlohmann::json element_to_json(const FieldCtx& F, const Element& e);
Element element_from_json(const FieldCtx& F, const nlohmann::json& j);

// Inner (F_q) values: emitted as the integer inner index, accepted as that
// integer or a little-endian base-p digit array.
fq_t inner_from_json(const FieldCtx& F, const nlohmann::json& j);

nlohmann::json matrix_to_json(const FqMatrix& M);
FqMatrix matrix_from_json(const FieldCtx& F, const nlohmann::json& j);

// Linearized polynomials emit as {"kind":"coeffs","coeffs":[...]}; input also
// accepts {"kind":"trace"}, {"kind":"diff_k","k":1}, {"kind":"two_root",
// "gamma":...}, {"kind":"three_root","alpha":...}, or a bare coefficient
// array.
nlohmann::json lin_to_json(const FieldCtx& F, const LinearizedPoly& L);
LinearizedPoly lin_from_json(const FieldCtx& F, const nlohmann::json& j);

// Self maps emit as {"kind":"zero"} / {"kind":"poly","coeffs":[...]} /
// {"kind":"table","table":[...]}; input additionally accepts
// {"kind":"random","seed":42}, materialized deterministically from the seed.
nlohmann::json self_map_to_json(const FieldCtx& F, const SelfMap& H);
SelfMap self_map_from_json(const FieldCtx& F, const nlohmann::json& j);

// F_q-valued maps emit their trace form {"beta":...,"H":...,"L":"same"|spec}
// when they have one (with "same" referring to `same_L`), else
// {"kind":"table","table":[...]}. Input also accepts {"kind":"trace"} for
// the relative trace and the raw {"table":[...]} wire form.
nlohmann::json fq_map_to_json(const FieldCtx& F, const FqMap& f,
                              const LinearizedPoly* same_L = nullptr);
FqMap fq_map_from_json(const FieldCtx& F, const nlohmann::json& j,
                       const LinearizedPoly* same_L = nullptr);

}  // namespace permpoly
