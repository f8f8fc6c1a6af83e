#include "permpoly/json_io.hpp"

#include "permpoly/errors.hpp"
#include "permpoly/rng.hpp"

namespace permpoly {

using nlohmann::json;

json field_to_json(const FieldCtx& F) {
  json j;
  j["p"] = F.p;
  j["n"] = F.n;
  j["m"] = F.m;
  j["q"] = F.q;
  j["order"] = F.order;
  return j;
}

namespace {

std::vector<long> inner_digits(const FieldCtx& F, fq_t v) {
  std::vector<long> d(F.n);
  for (int i = 0; i < F.n; ++i) {
    d[i] = static_cast<long>(v % F.p);
    v = static_cast<fq_t>(v / F.p);
  }
  return d;
}

fq_t inner_from_digits(const FieldCtx& F, const json& arr) {
  if (arr.size() > static_cast<std::size_t>(F.n))
    throw std::invalid_argument("inner value: too many base-p digits");
  fq_t v = 0;
  fq_t mult = 1;
  for (const auto& d : arr) {
    long c = d.get<long>();
    if (c < 0 || c >= F.p) throw std::invalid_argument("inner value: digit out of range");
    v += static_cast<fq_t>(c) * mult;
    mult *= static_cast<fq_t>(F.p);
  }
  return v;
}

}  // namespace

json element_to_json(const FieldCtx& F, const Element& e) {
  json coeffs = json::array();
  for (int j = 0; j < F.m; ++j) coeffs.push_back(inner_digits(F, e.c[j]));
  return json{{"index", F.index_of(e)}, {"coeffs", coeffs}};
}

Element element_from_json(const FieldCtx& F, const json& j) {
  if (j.is_number_unsigned() || j.is_number_integer()) {
    std::int64_t idx = j.get<std::int64_t>();
    if (idx < 0 || static_cast<eidx_t>(idx) >= F.order)
      throw std::invalid_argument("element index out of range");
    return F.from_index(static_cast<eidx_t>(idx));
  }
  if (j.is_array()) {
    if (j.size() > static_cast<std::size_t>(F.m))
      throw std::invalid_argument("element: too many coefficients");
    Element e = F.zero();
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto& ci = j[i];
      e.c[i] = ci.is_array() ? inner_from_digits(F, ci) : inner_from_json(F, ci);
    }
    return e;
  }
  if (j.is_object()) {
    std::optional<Element> from_coeffs;
    if (j.contains("coeffs")) from_coeffs = element_from_json(F, j.at("coeffs"));
    if (j.contains("index")) {
      Element e = element_from_json(F, j.at("index"));
      if (from_coeffs && !(e == *from_coeffs))
        throw std::invalid_argument("element: index and coeffs disagree");
      return e;
    }
    if (from_coeffs) return *from_coeffs;
  }
  throw std::invalid_argument("element: expected index, coefficient array, or object");
}

fq_t inner_from_json(const FieldCtx& F, const json& j) {
  if (j.is_array()) return inner_from_digits(F, j);
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw std::invalid_argument("inner value: expected integer or digit array");
  std::int64_t v = j.get<std::int64_t>();
  if (v < 0 || static_cast<fq_t>(v) >= F.q)
    throw std::invalid_argument("inner value out of range");
  return static_cast<fq_t>(v);
}

json matrix_to_json(const FqMatrix& M) {
  json rows = json::array();
  for (int r = 0; r < M.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < M.cols; ++c) row.push_back(M.at(r, c));
    rows.push_back(std::move(row));
  }
  return json{{"rows", M.rows}, {"cols", M.cols}, {"entries", rows}};
}

FqMatrix matrix_from_json(const FieldCtx& F, const json& j) {
  int rows = j.at("rows").get<int>();
  int cols = j.at("cols").get<int>();
  const auto& entries = j.at("entries");
  if (rows < 0 || cols < 0 || entries.size() != static_cast<std::size_t>(rows))
    throw std::invalid_argument("matrix: shape mismatch");
  FqMatrix M(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto& row = entries[r];
    if (row.size() != static_cast<std::size_t>(cols))
      throw std::invalid_argument("matrix: shape mismatch");
    for (int c = 0; c < cols; ++c) M.at(r, c) = inner_from_json(F, row[c]);
  }
  return M;
}

json lin_to_json(const FieldCtx& F, const LinearizedPoly& L) {
  json coeffs = json::array();
  for (const auto& a : L.a) coeffs.push_back(element_to_json(F, a));
  return json{{"kind", "coeffs"}, {"coeffs", coeffs}};
}

LinearizedPoly lin_from_json(const FieldCtx& F, const json& j) {
  if (j.is_array()) {
    std::vector<Element> coeffs;
    for (const auto& c : j) coeffs.push_back(element_from_json(F, c));
    return lin_from_coeffs(F, coeffs);
  }
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "coeffs") {
    std::vector<Element> coeffs;
    for (const auto& c : j.at("coeffs")) coeffs.push_back(element_from_json(F, c));
    return lin_from_coeffs(F, coeffs);
  }
  if (kind == "trace") return lin_trace(F);
  if (kind == "diff_k") return lin_diff(F, j.at("k").get<int>());
  if (kind == "two_root") return lin_two_root(F, element_from_json(F, j.at("gamma")));
  if (kind == "three_root") return lin_three_root(F, element_from_json(F, j.at("alpha")));
  throw std::invalid_argument("linearized polynomial: unknown kind \"" + kind + "\"");
}

json self_map_to_json(const FieldCtx& F, const SelfMap& H) {
  if (H.poly) {
    if (H.poly->empty()) return json{{"kind", "zero"}};
    json coeffs = json::array();
    for (const auto& c : *H.poly) coeffs.push_back(element_to_json(F, c));
    return json{{"kind", "poly"}, {"coeffs", coeffs}};
  }
  return json{{"kind", "table"}, {"table", H.table}};
}

SelfMap self_map_from_json(const FieldCtx& F, const json& j) {
  if (j.is_array()) {
    std::vector<eidx_t> tab;
    for (const auto& v : j) tab.push_back(F.index_of(element_from_json(F, v)));
    return self_map_from_table(F, std::move(tab));
  }
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") return self_map_zero(F);
  if (kind == "poly") {
    std::vector<Element> coeffs;
    for (const auto& c : j.at("coeffs")) coeffs.push_back(element_from_json(F, c));
    return self_map_from_poly(F, coeffs);
  }
  if (kind == "table") return self_map_from_json(F, j.at("table"));
  if (kind == "random") {
    Rng rng(mix_seed({0x48a5u, j.at("seed").get<std::uint64_t>()}));
    return random_self_map(F, rng);
  }
  throw std::invalid_argument("self map: unknown kind \"" + kind + "\"");
}

json fq_map_to_json(const FieldCtx& F, const FqMap& f, const LinearizedPoly* same_L) {
  if (f.description) {
    const TraceForm& d = *f.description;
    json out;
    out["beta"] = element_to_json(F, d.beta);
    out["H"] = self_map_to_json(F, d.H);
    if (same_L && d.L.a == same_L->a)
      out["L"] = "same";
    else
      out["L"] = lin_to_json(F, d.L);
    return out;
  }
  return json{{"kind", "table"}, {"table", f.table}};
}

FqMap fq_map_from_json(const FieldCtx& F, const json& j, const LinearizedPoly* same_L) {
  if (j.contains("beta")) {
    Element beta = element_from_json(F, j.at("beta"));
    SelfMap H = j.contains("H") ? self_map_from_json(F, j.at("H")) : self_map_zero(F);
    LinearizedPoly L;
    if (!j.contains("L") || (j.at("L").is_string() && j.at("L").get<std::string>() == "same")) {
      if (!same_L)
        throw std::invalid_argument("fq map: \"L\":\"same\" with no surrounding linearized polynomial");
      L = *same_L;
    } else {
      L = lin_from_json(F, j.at("L"));
    }
    return make_translator_map(F, beta, H, L);
  }
  if (j.contains("kind")) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "trace") return fq_map_trace(F);
    if (kind != "table") throw std::invalid_argument("fq map: unknown kind \"" + kind + "\"");
  }
  if (!j.contains("table")) throw std::invalid_argument("fq map: expected trace form or table");
  std::vector<fq_t> tab;
  for (const auto& v : j.at("table")) tab.push_back(inner_from_json(F, v));
  return fq_map_from_table(F, std::move(tab));
}

}  // namespace permpoly
