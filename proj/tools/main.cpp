// permpoly: constructs permutation polynomials from linear translators and
// certifies the decision criteria against brute force.
//
// Exit codes are the stable automation interface:
//   0  criterion true (and the oracle agrees when it runs)
//   1  criterion false, a valid negative result
//   2  hypothesis violation or malformed input
//   3  criterion/oracle disagreement or failed re-validation (internal bug)
//   4  reproduce: a verdict class stayed empty after the retry budget
// Human-readable messages and timings go to standard error; standard output
// carries exactly the JSON artifacts, one per line, byte-identical across
// runs for identical flags and seed.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "permpoly/errors.hpp"
#include "permpoly/fq_linalg.hpp"
#include "permpoly/json_io.hpp"
#include "permpoly/oracle.hpp"
#include "permpoly/runner.hpp"
#include "permpoly/translators.hpp"

namespace {

using nlohmann::json;
using namespace permpoly;

constexpr int kExitPermutation = 0;
constexpr int kExitNotPermutation = 1;
constexpr int kExitHypothesis = 2;
constexpr int kExitInternal = 3;
constexpr int kExitClassesUnmet = 4;

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

// Parses either one JSON object or an array of them (batch mode).
std::vector<json> parse_batch(const std::string& text) {
  json parsed = json::parse(text);
  if (parsed.is_array()) return std::vector<json>(parsed.begin(), parsed.end());
  return {parsed};
}

int certificate_exit(const Certificate& cert) {
  if (cert.oracle_verdict && *cert.oracle_verdict != cert.criterion_verdict)
    return kExitInternal;
  return cert.criterion_verdict ? kExitPermutation : kExitNotPermutation;
}

int cmd_construct(const std::string& config_path, bool no_oracle, std::uint64_t size_cap) {
  int worst = kExitPermutation;
  std::size_t idx = 0;
  for (json config : parse_batch(read_input(config_path))) {
    ++idx;
    try {
      if (no_oracle) config["oracle"] = false;
      Certificate cert = run_config(config, size_cap);
      emit(certificate_to_json(cert));
      worst = std::max(worst, certificate_exit(cert));
    } catch (const hypothesis_error& e) {
      std::cerr << "config " << idx << ": " << e.what() << "\n";
      worst = std::max(worst, kExitHypothesis);
    } catch (const internal_error& e) {
      std::cerr << "config " << idx << ": " << e.what() << "\n";
      worst = std::max(worst, kExitInternal);
    }
  }
  return worst;
}

int cmd_verify(const std::string& cert_path, std::uint64_t size_cap) {
  int worst = kExitPermutation;
  std::size_t idx = 0;
  for (const json& cert : parse_batch(read_input(cert_path))) {
    ++idx;
    try {
      std::string why;
      if (verify_certificate_json(cert, size_cap, &why)) {
        std::cerr << "certificate " << idx << ": ok\n";
      } else {
        std::cerr << "certificate " << idx << ": mismatch: " << why << "\n";
        worst = std::max(worst, kExitInternal);
      }
    } catch (const hypothesis_error& e) {
      std::cerr << "certificate " << idx << ": " << e.what() << "\n";
      worst = std::max(worst, kExitHypothesis);
    }
  }
  return worst;
}

int cmd_field_info(long p, int n, int m, std::uint64_t size_cap) {
  FieldCtx F = make_field(p, n, m, size_cap);
  json j = field_to_json(F);
  j["inner_modulus"] = F.f_mod;
  j["outer_modulus"] = F.g_mod;
  j["inner_primitive"] = element_to_json(F, F.find_primitive(FieldCtx::Level::inner));
  j["outer_primitive"] = element_to_json(F, F.find_primitive(FieldCtx::Level::outer));
  emit(j);
  return kExitPermutation;
}

int cmd_search_translators(long p, int n, int m, bool use_trace, bool use_zero,
                           const std::string& table_path, const std::string& map_path,
                           std::uint64_t size_cap) {
  const int sources = int(use_trace) + int(use_zero) + int(!table_path.empty()) +
                      int(!map_path.empty());
  if (sources != 1)
    throw std::invalid_argument(
        "pick exactly one function source: --trace, --zero, --table or --map");

  FieldCtx F = make_field(p, n, m, size_cap);
  FqMap f;
  if (use_trace) {
    f = fq_map_from_json(F, json{{"kind", "trace"}});
  } else if (use_zero) {
    f.table.assign(F.order, 0);
  } else if (!table_path.empty()) {
    json t = json::parse(read_input(table_path));
    f = fq_map_from_json(F, t.is_array() ? json{{"kind", "table"}, {"table", t}} : t);
  } else {
    f = fq_map_from_json(F, json::parse(read_input(map_path)));
  }

  auto certs = all_translators(F, f);
  json listing = json::array();
  std::vector<std::vector<fq_t>> coords;
  for (const auto& c : certs) {
    listing.push_back(json{{"alpha", element_to_json(F, c.alpha)}, {"a", c.a}});
    const fq_t* d = F.digits_of(F.index_of(c.alpha));
    coords.emplace_back(d, d + F.m);
  }
  auto basis = span_basis(F, coords, F.m);
  json basis_json = json::array();
  for (const auto& b : basis) {
    Element e = F.zero();
    for (int i = 0; i < F.m; ++i) e.c[i] = b[i];
    basis_json.push_back(element_to_json(F, e));
  }
  json out{{"field", field_to_json(F)},
           {"translators", listing},
           {"lambda", json{{"order", certs.size() + 1},
                           {"dim", static_cast<int>(basis.size())},
                           {"basis", basis_json}}}};
  emit(out);
  return kExitPermutation;
}

int cmd_reproduce(const std::string& example, long q, int trials,
                  std::uint64_t seed, std::uint64_t size_cap) {
  ReproduceReport rep = reproduce_worked_example(example, q, trials, seed, size_cap);
  emit(rep.summary);
  return rep.exit_code;
}

int cmd_sweep(const std::string& theorems_csv, std::uint64_t max_size, int trials,
              std::uint64_t seed, long long inject_fault, std::uint64_t size_cap) {
  SweepConfig cfg;
  cfg.theorems.clear();
  std::stringstream ss(theorems_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) cfg.theorems.push_back(tok);
  }
  if (cfg.theorems.empty()) throw std::invalid_argument("--theorems must name at least one id");
  cfg.fields = enumerate_fields({2, 3, 5}, max_size);
  cfg.trials_per_field = trials;
  cfg.seed = seed;
  cfg.inject_fault_at = inject_fault;
  SweepReport rep = agreement_sweep(cfg, size_cap);
  emit(sweep_report_to_json(rep));
  std::cerr << "sweep: " << rep.trials << " trials, " << rep.agreements << " agreements, "
            << rep.counterexamples.size() << " counterexamples, " << rep.elapsed_seconds
            << " s\n";
  return rep.counterexamples.empty() ? kExitPermutation : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"permutation polynomials from linear translators, with certificates"};
  app.require_subcommand(1);
  std::uint64_t size_cap = 0;
  app.add_option("--size-cap", size_cap,
                 "override the field size cap (default 65536, env PERMPOLY_SIZE_CAP)");

  long p = 0;
  int n = 0, m = 0;
  auto add_field_flags = [&](CLI::App* sub) {
    sub->add_option("--p", p, "characteristic")->required();
    sub->add_option("--n", n, "inner degree, q = p^n")->required();
    sub->add_option("--m", m, "extension degree over F_q")->required();
  };

  auto* info = app.add_subcommand("field-info", "print the tower's moduli and generators");
  add_field_flags(info);

  auto* construct = app.add_subcommand(
      "construct", "build a map from a config and print its certificate");
  std::string config_path;
  bool no_oracle = false;
  construct->add_option("--config", config_path, "config JSON (object or array; - = stdin)");
  construct->add_flag("--no-oracle", no_oracle, "skip the brute-force check");

  auto* verify = app.add_subcommand("verify", "replay certificates and compare");
  std::string cert_path;
  verify->add_option("--cert", cert_path, "certificate JSON (object or array; - = stdin)");

  auto* search = app.add_subcommand("search-translators",
                                    "list every translator direction of a function");
  add_field_flags(search);
  bool use_trace = false, use_zero = false;
  std::string table_path, map_path;
  search->add_flag("--trace", use_trace, "f = relative trace");
  search->add_flag("--zero", use_zero, "f = 0");
  search->add_option("--table", table_path, "f as a JSON value table (- = stdin)");
  search->add_option("--map", map_path, "f as a map spec JSON (- = stdin)");

  auto* reproduce = app.add_subcommand(
      "reproduce", "re-run a worked example with random parameters against the oracle");
  std::string example;
  long rq = 3;
  std::uint64_t seed = 0;
  int trials = 50;
  reproduce->add_option("--example", example, "worked example id: 2.1 or 2.2")->required();
  reproduce->add_option("--q", rq, "base field size, an odd prime power (default 3)");
  reproduce->add_option("--trials", trials, "random draws (default 50)");
  reproduce->add_option("--seed", seed, "RNG seed");

  auto* sweep = app.add_subcommand("sweep",
                                   "random agreement sweep of criteria vs. brute force");
  std::string theorems = "2.1,2.2,3.1,2.10";
  std::uint64_t max_size = 6561, sweep_seed = 0;
  int sweep_trials = 200;
  long long inject_fault = -1;
  sweep->add_option("--theorems", theorems, "comma-separated ids (default 2.1,2.2,3.1,2.10)");
  sweep->add_option("--max-size", max_size, "largest q^m to include (default 6561)");
  sweep->add_option("--trials", sweep_trials, "trials per field and id (default 200)");
  sweep->add_option("--seed", sweep_seed, "RNG seed");
  sweep->add_option("--inject-fault", inject_fault,
                    "flip the criterion verdict of instance N (harness self-test)");

  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  int rc = kExitHypothesis;
  try {
    if (info->parsed()) rc = cmd_field_info(p, n, m, size_cap);
    else if (construct->parsed()) rc = cmd_construct(config_path, no_oracle, size_cap);
    else if (verify->parsed()) rc = cmd_verify(cert_path, size_cap);
    else if (search->parsed())
      rc = cmd_search_translators(p, n, m, use_trace, use_zero, table_path, map_path, size_cap);
    else if (reproduce->parsed()) rc = cmd_reproduce(example, rq, trials, seed, size_cap);
    else if (sweep->parsed())
      rc = cmd_sweep(theorems, max_size, sweep_trials, sweep_seed, inject_fault, size_cap);
  } catch (const hypothesis_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitHypothesis;
  }
  const auto t1 = std::chrono::steady_clock::now();
  std::cerr << "elapsed: " << std::chrono::duration<double>(t1 - t0).count() << " s\n";
  return rc;
}
