// Replays construction configs. Every certificate embeds its config under
// "construction"; run_config turns such a config back into a certificate and
// verify_certificate_json checks a printed certificate against a fresh replay.

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "permpoly/constructions.hpp"
#include "permpoly/field_tower.hpp"

namespace permpoly {

// Builds the field tower named by {"p": ..., "n": ..., "m": ...}.
FieldCtx field_from_config(const nlohmann::json& field, std::uint64_t size_cap = 0);

// Dispatches on the single "theorem" / "corollary" / "example" key of the
// config and rebuilds the certificate. The "oracle" flag (default true)
// controls whether the brute force check runs.
Certificate run_config(const nlohmann::json& config, std::uint64_t size_cap = 0);

// Replays cert["construction"] and compares field, construction, criterion,
// verdicts and fiber data against the stored values. On mismatch returns
// false and, when `why` is non-null, names the first differing key.
bool verify_certificate_json(const nlohmann::json& cert, std::uint64_t size_cap = 0,
                             std::string* why = nullptr);

}  // namespace permpoly
