#include "permpoly/runner.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "permpoly/errors.hpp"
#include "permpoly/json_io.hpp"
#include "permpoly/linearized.hpp"
#include "permpoly/translators.hpp"

namespace permpoly {

using nlohmann::json;

namespace {

std::vector<Element> elements_from_json(const FieldCtx& F, const json& arr) {
  if (!arr.is_array()) throw std::invalid_argument("config: expected an array of elements");
  std::vector<Element> out;
  out.reserve(arr.size());
  for (const auto& e : arr) out.push_back(element_from_json(F, e));
  return out;
}

std::vector<FqPermSpec> perm_specs_from_json(const FieldCtx& F, const json& arr) {
  if (!arr.is_array()) throw std::invalid_argument("config: expected an array of F_q permutations");
  std::vector<FqPermSpec> out;
  out.reserve(arr.size());
  for (const auto& h : arr) out.push_back(perm_spec_from_json(F, h));
  return out;
}

std::vector<SelfMap> self_maps_from_json(const FieldCtx& F, const json& arr) {
  if (!arr.is_array()) throw std::invalid_argument("config: expected an array of self maps");
  std::vector<SelfMap> out;
  out.reserve(arr.size());
  for (const auto& h : arr) out.push_back(self_map_from_json(F, h));
  return out;
}

std::vector<FqMap> fq_maps_from_json(const FieldCtx& F, const json& arr,
                                     const LinearizedPoly* same_L) {
  if (!arr.is_array()) throw std::invalid_argument("config: expected an array of F_q-valued maps");
  std::vector<FqMap> out;
  out.reserve(arr.size());
  for (const auto& f : arr) out.push_back(fq_map_from_json(F, f, same_L));
  return out;
}

BuildOpts opts_from_config(const json& config) {
  BuildOpts opts;
  if (config.contains("oracle")) opts.oracle = config.at("oracle").get<bool>();
  return opts;
}

Certificate run_theorem(const FieldCtx& F, const std::string& id, const json& config) {
  const BuildOpts opts = opts_from_config(config);
  if (id == "2.1") {
    LinearizedPoly L = lin_from_json(F, config.at("L"));
    auto gammas = elements_from_json(F, config.at("gammas"));
    auto hs = perm_specs_from_json(F, config.at("hs"));
    auto fs = fq_maps_from_json(F, config.at("fs"), &L);
    return build_det_criterion(F, L, gammas, hs, fs, opts);
  }
  if (id == "2.2") {
    auto gammas = elements_from_json(F, config.at("gammas"));
    auto fs = fq_maps_from_json(F, config.at("fs"), nullptr);
    return build_rank_criterion(F, gammas, fs, opts);
  }
  if (id == "3.1") {
    LinearizedPoly L = lin_from_json(F, config.at("L"));
    auto gammas = elements_from_json(F, config.at("gammas"));
    auto hs = self_maps_from_json(F, config.at("hs"));
    return build_coset_criterion(F, L, gammas, hs, opts);
  }
  throw std::invalid_argument("unknown theorem id: " + id);
}

Certificate run_corollary(const FieldCtx& F, const std::string& id, const json& config) {
  const BuildOpts opts = opts_from_config(config);
  if (id == "2.10") {
    auto gammas = elements_from_json(F, config.at("gammas"));
    auto fs = fq_maps_from_json(F, config.at("fs"), nullptr);
    return build_complete_mapping(F, gammas, fs, opts);
  }

  PresetArgs args;
  if (id == "2.1" || id == "2.2") {
    // These presets fix L, so "L": "same" in the stored f specs refers to it.
    // The preset re-checks its hypotheses; they are mirrored here only where
    // building the fixed L up front would otherwise fail with the wrong
    // error class.
    LinearizedPoly fixed;
    if (id == "2.1") {
      fixed = lin_trace(F);
    } else {
      if (F.p == 2) throw hypothesis_error("preset 2.2 requires odd characteristic");
      if (F.m % 2 != 0) throw hypothesis_error("preset 2.2 requires an even extension degree");
      fixed = lin_diff(F, F.m / 2);
    }
    args.gammas = elements_from_json(F, config.at("gammas"));
    args.hs = perm_specs_from_json(F, config.at("hs"));
    args.fs = fq_maps_from_json(F, config.at("fs"), &fixed);
  } else if (id == "2.3") {
    args.gammas = elements_from_json(F, config.at("gammas"));
    args.betas = elements_from_json(F, config.at("betas"));
    args.Hs = self_maps_from_json(F, config.at("Hs"));
    args.hs = perm_specs_from_json(F, config.at("hs"));
  } else if (id == "2.4") {
    if (config.contains("alpha")) args.alpha = element_from_json(F, config.at("alpha"));
    args.betas = elements_from_json(F, config.at("betas"));
    args.Hs = self_maps_from_json(F, config.at("Hs"));
    args.hs = perm_specs_from_json(F, config.at("hs"));
  } else if (id == "2.8") {
    args.L = lin_from_json(F, config.at("L"));
    args.gammas = elements_from_json(F, config.at("gammas"));
    args.betas = elements_from_json(F, config.at("betas"));
    args.Hs = self_maps_from_json(F, config.at("Hs"));
  } else if (id == "2.9") {
    if (config.contains("alpha")) args.alpha = element_from_json(F, config.at("alpha"));
    args.betas = elements_from_json(F, config.at("betas"));
    args.Hs = self_maps_from_json(F, config.at("Hs"));
  } else if (id == "3.1" || id == "3.2") {
    args.gammas = elements_from_json(F, config.at("gammas"));
    args.coset_hs = self_maps_from_json(F, config.at("hs"));
  } else {
    throw std::invalid_argument("unknown corollary id: " + id);
  }
  return build_preset(F, id, args, opts);
}

Certificate run_example(const FieldCtx& F, const std::string& id, const json& config) {
  const BuildOpts opts = opts_from_config(config);
  ExampleArgs args;
  if (config.contains("alpha")) args.alpha = element_from_json(F, config.at("alpha"));
  if (config.contains("ts")) {
    for (const auto& t : config.at("ts")) args.ts.push_back(t.get<std::uint64_t>());
  }
  args.betas = elements_from_json(F, config.at("betas"));
  args.Hs = self_maps_from_json(F, config.at("Hs"));
  return build_worked_example(F, id, args, opts);
}

}  // namespace

FieldCtx field_from_config(const json& field, std::uint64_t size_cap) {
  if (!field.is_object())
    throw std::invalid_argument("config: \"field\" must be an object with p, n, m");
  return make_field(field.at("p").get<long>(), field.at("n").get<int>(),
                    field.at("m").get<int>(), size_cap);
}

Certificate run_config(const json& config, std::uint64_t size_cap) {
  if (!config.is_object()) throw std::invalid_argument("config must be a JSON object");
  FieldCtx F = field_from_config(config.at("field"), size_cap);
  if (config.contains("theorem"))
    return run_theorem(F, config.at("theorem").get<std::string>(), config);
  if (config.contains("corollary"))
    return run_corollary(F, config.at("corollary").get<std::string>(), config);
  if (config.contains("example"))
    return run_example(F, config.at("example").get<std::string>(), config);
  throw std::invalid_argument("config needs a \"theorem\", \"corollary\" or \"example\" key");
}

bool verify_certificate_json(const json& cert, std::uint64_t size_cap, std::string* why) {
  if (!cert.is_object() || !cert.contains("construction")) {
    if (why) *why = "certificate has no \"construction\" config to replay";
    return false;
  }
  Certificate replay = run_config(cert.at("construction"), size_cap);
  const json fresh = certificate_to_json(replay);
  static const char* kKeys[] = {"field",            "construction",  "criterion",
                                "criterion_verdict", "oracle_verdict", "fibers"};
  for (const char* key : kKeys) {
    const bool in_cert = cert.contains(key);
    const bool in_fresh = fresh.contains(key);
    if (in_cert != in_fresh) {
      if (why)
        *why = std::string("\"") + key + "\" is " + (in_cert ? "present" : "missing") +
               " in the certificate but " + (in_fresh ? "present" : "missing") +
               " in the replay";
      return false;
    }
    if (in_cert && cert.at(key) != fresh.at(key)) {
      if (why) *why = std::string("\"") + key + "\" differs from the replayed value";
      return false;
    }
  }
  return true;
}

}  // namespace permpoly
