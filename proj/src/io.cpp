#include "iwasawa/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace iwasawa::io {

namespace {

std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t byte) {
  // nlohmann reports the 1-based offset of the offending byte.
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = locate(text, e.byte);
    std::string message = e.what();
    const auto pos = message.find("syntax error");
    if (pos != std::string::npos) message = message.substr(pos);
    throw ParseError(message, line, column);
  }
}

const Json& require(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where + ": missing field \"" + key + "\"");
  return obj.at(key);
}

std::int64_t as_int(const Json& v, const std::string& what) {
  if (v.is_number_integer() && !v.is_number_unsigned()) return v.get<std::int64_t>();
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) throw ParseError(what + ": integer out of range");
    return static_cast<std::int64_t>(u);
  }
  throw ParseError(what + ": expected an integer");
}

Provenance parse_provenance(const Json& v, const std::string& what) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "certified") return Provenance::certified;
    if (s == "unknown") return Provenance::unknown;
  }
  throw ParseError(what + ": expected \"certified\" or \"unknown\"");
}

IwasawaSeries parse_series(const RingParams& params, const Json& v, const std::string& what) {
  if (!v.is_array()) throw ParseError(what + ": expected an array of coefficients");
  if (v.size() > static_cast<std::size_t>(params.precision_x())) {
    throw ParseError(what + ": more coefficients than precision_x");
  }
  std::vector<Residue> coeffs;
  coeffs.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Json& c = v[k];
    const std::string at = what + "[" + std::to_string(k) + "]";
    if (c.is_number_unsigned()) {
      coeffs.push_back(c.get<std::uint64_t>() % params.modulus());
    } else {
      coeffs.push_back(modarith::reduce(as_int(c, at), params.modulus()));
    }
  }
  return IwasawaSeries::from_residues(params, std::move(coeffs));
}

PresentedModule module_from_json(const Json& doc, const std::string& where) {
  if (!doc.is_object()) throw ParseError(where + ": expected a JSON object");
  const auto p = as_int(require(doc, "p", where), where + ".p");
  const auto np = as_int(require(doc, "precision_p", where), where + ".precision_p");
  const auto mx = as_int(require(doc, "precision_x", where), where + ".precision_x");
  if (p < 2 || p > UINT32_MAX || np < 1 || np > 64 || mx < 1 || mx > (1 << 20)) {
    throw ParseError(where + ": p, precision_p or precision_x out of range");
  }
  const RingParams params =
      doc.contains("u0") ? RingParams(static_cast<std::uint32_t>(p), static_cast<int>(np), static_cast<int>(mx),
                                      as_int(doc.at("u0"), where + ".u0"))
                         : RingParams(static_cast<std::uint32_t>(p), static_cast<int>(np), static_cast<int>(mx));
  const auto g = as_int(require(doc, "generators", where), where + ".generators");
  if (g < 0) throw ParseError(where + ".generators: must be non-negative");
  const Json& rels = require(doc, "relations", where);
  if (!rels.is_array()) throw ParseError(where + ".relations: expected an array");
  std::vector<PresentedModule::Relation> relations;
  for (std::size_t j = 0; j < rels.size(); ++j) {
    const std::string at = where + ".relations[" + std::to_string(j) + "]";
    const Json& rel = rels[j];
    if (!rel.is_array() || rel.size() != static_cast<std::size_t>(g)) {
      throw ParseError(at + ": expected one coefficient array per generator");
    }
    PresentedModule::Relation r;
    for (std::size_t i = 0; i < rel.size(); ++i) r.push_back(parse_series(params, rel[i], at + "[" + std::to_string(i) + "]"));
    relations.push_back(std::move(r));
  }
  ModuleFlags flags;
  if (doc.contains("flags")) {
    const Json& f = doc.at("flags");
    if (!f.is_object()) throw ParseError(where + ".flags: expected an object");
    if (f.contains("no_finite_submodule")) {
      flags.no_finite_submodule = parse_provenance(f.at("no_finite_submodule"), where + ".flags.no_finite_submodule");
    }
    if (f.contains("elementary_iso")) {
      flags.elementary_iso = parse_provenance(f.at("elementary_iso"), where + ".flags.elementary_iso");
    }
  }
  return PresentedModule(params, static_cast<std::size_t>(g), std::move(relations), flags);
}

std::string series_text(const IwasawaSeries& f) {
  std::string out = "[";
  const int deg = f.degree();
  for (int k = 0; k <= deg; ++k) {
    if (k > 0) out += ", ";
    out += std::to_string(f[static_cast<std::size_t>(k)]);
  }
  return out + "]";
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PresentedModule parse_module(std::string_view text) { return module_from_json(parse_json(text), "module"); }

PresentedModule load_module(const std::filesystem::path& path) { return parse_module(read_file(path)); }

std::string serialize_module(const PresentedModule& m) {
  const RingParams& params = m.params();
  std::ostringstream out;
  out << "{\n";
  out << "  \"p\": " << params.prime() << ",\n";
  out << "  \"precision_p\": " << params.precision_p() << ",\n";
  out << "  \"precision_x\": " << params.precision_x() << ",\n";
  out << "  \"u0\": " << params.u0() << ",\n";
  out << "  \"generators\": " << m.generators() << ",\n";
  if (m.relation_count() == 0) {
    out << "  \"relations\": [],\n";
  } else {
    out << "  \"relations\": [\n";
    for (std::size_t j = 0; j < m.relation_count(); ++j) {
      out << "    [";
      for (std::size_t i = 0; i < m.generators(); ++i) {
        if (i > 0) out << ", ";
        out << series_text(m.entry(i, j));
      }
      out << "]" << (j + 1 < m.relation_count() ? "," : "") << "\n";
    }
    out << "  ],\n";
  }
  out << "  \"flags\": {\n";
  out << "    \"no_finite_submodule\": \"" << to_string(m.flags().no_finite_submodule) << "\",\n";
  out << "    \"elementary_iso\": \"" << to_string(m.flags().elementary_iso) << "\"\n";
  out << "  }\n";
  out << "}\n";
  return out.str();
}

SelmerSkeleton parse_skeleton(std::string_view text, const std::filesystem::path& base_dir) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("skeleton: expected a JSON object");
  const Json& label = require(doc, "label", "skeleton");
  if (!label.is_string()) throw ParseError("skeleton.label: expected a string");
  const Json& module = require(doc, "module", "skeleton");
  SelmerSkeleton sk{label.get<std::string>(), PresentedModule::zero(RingParams(3, 1, 2)), {}, 0, std::nullopt};
  if (module.is_string()) {
    std::filesystem::path path(module.get<std::string>());
    if (path.is_relative()) path = base_dir / path;
    sk.S_nonprimitive = load_module(path);
  } else {
    sk.S_nonprimitive = module_from_json(module, "skeleton.module");
  }
  const Json& locals = require(doc, "local_lambdas", "skeleton");
  if (!locals.is_object()) throw ParseError("skeleton.local_lambdas: expected an object");
  for (const auto& [place, value] : locals.items()) {
    sk.local_lambdas[place] = as_int(value, "skeleton.local_lambdas." + place);
  }
  sk.expected_corank = static_cast<int>(as_int(require(doc, "expected_corank", "skeleton"), "skeleton.expected_corank"));
  if (doc.contains("ck_lambda") && !doc.at("ck_lambda").is_null()) {
    sk.ck_lambda = as_int(doc.at("ck_lambda"), "skeleton.ck_lambda");
  }
  try {
    sk.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return sk;
}

SelmerSkeleton load_skeleton(const std::filesystem::path& path) {
  return parse_skeleton(read_file(path), path.parent_path());
}

Json to_json(const RingParams& params) {
  return Json{{"p", params.prime()},
              {"precision_p", params.precision_p()},
              {"precision_x", params.precision_x()},
              {"u0", params.u0()}};
}

Json to_json(const InvariantReport& report) {
  Json j;
  j["method"] = to_string(report.method);
  j["rank"] = report.rank;
  j["rank_certified"] = report.rank_certified;
  j["mu"] = optional_json(report.mu);
  j["lambda"] = optional_json(report.lambda);
  j["lambda_tag"] = to_string(report.lambda_tag);
  j["precision_ok"] = report.precision_ok;
  if (report.method == InvariantMethod::growth) {
    j["mu_zero"] = optional_json(report.mu_zero);
    j["slope"] = optional_json(report.slope);
  }
  return j;
}

Json to_json(const GrowthTrace& trace) {
  Json entries = Json::array();
  std::int64_t previous = 0;
  for (const auto& e : trace.entries) {
    entries.push_back(Json{{"n", e.n}, {"pn", e.pn}, {"e", e.e}, {"delta", e.e - previous}});
    previous = e.e;
  }
  return Json{{"params", to_json(trace.params)},
              {"entries", entries},
              {"slope", optional_json(trace.slope)},
              {"intercept", optional_json(trace.intercept)}};
}

std::string growth_csv(const GrowthTrace& trace) {
  std::ostringstream out;
  out << "n,pn,e,delta\n";
  std::int64_t previous = 0;
  for (const auto& e : trace.entries) {
    out << e.n << ',' << e.pn << ',' << e.e << ',' << (e.e - previous) << '\n';
    previous = e.e;
  }
  return out.str();
}

Json to_json(const SuiteReport& report) {
  Json j;
  j["suite"] = report.suite;
  j["params"] = to_json(report.params);
  j["seed"] = report.seed;
  j["trials"] = report.trials;
  j["passes"] = report.passes;
  j["status"] = report.ok() ? "pass" : "fail";
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    failures.push_back(Json{{"trial_seed", f.trial_seed}, {"check", f.check}, {"detail", f.detail}});
  }
  j["failures"] = failures;

  if (!report.defects.empty()) {
    // Per-instance summary first, then the raw rows.
    Json summary = Json::array();
    for (std::size_t k = 0; k < report.defects.size();) {
      const std::string& name = report.defects[k].instance;
      std::int64_t lo = report.defects[k].defect;
      std::int64_t hi = lo;
      bool independent = true;
      bool hold = false;
      std::map<int, std::int64_t> at_level;
      std::size_t end = k;
      while (end < report.defects.size() && report.defects[end].instance == name) {
        const DefectRow& row = report.defects[end];
        lo = std::min(lo, row.defect);
        hi = std::max(hi, row.defect);
        hold = hold || row.hypotheses_hold;
        const auto [it, fresh] = at_level.emplace(row.n, row.defect);
        if (!fresh && it->second != row.defect) independent = false;
        ++end;
      }
      summary.push_back(Json{{"instance", name},
                             {"rank", report.defects[k].rank},
                             {"lambda", report.defects[k].lambda},
                             {"defect_min", lo},
                             {"defect_max", hi},
                             {"twist_independent", independent},
                             {"hypotheses_ever_hold", hold}});
      k = end;
    }
    j["defect_summary"] = summary;
    Json rows = Json::array();
    for (const auto& d : report.defects) {
      rows.push_back(Json{{"instance", d.instance},
                          {"i", d.twist},
                          {"n", d.n},
                          {"pn", d.pn},
                          {"e", d.e},
                          {"rank", d.rank},
                          {"lambda", d.lambda},
                          {"defect", d.defect},
                          {"c_mod_p_invariants", d.c_mod_p_invariants},
                          {"image_invariants", d.image_invariants},
                          {"c_over_torsion_invariants", d.c_over_torsion_invariants},
                          {"hypotheses_hold", d.hypotheses_hold}});
    }
    j["defects"] = rows;
  }

  if (!report.deltas.empty()) {
    Json rows = Json::array();
    for (const auto& d : report.deltas) {
      Json row{{"f", d.label_f},
               {"g", d.label_g},
               {"mu_verdict", d.mu_verdict},
               {"lambda_S_f", d.lambda_s_f},
               {"lambda_S_g", d.lambda_s_g},
               {"delta_f", d.delta_f},
               {"delta_g", d.delta_g},
               {"lambda_L_f", d.lambda_l_f},
               {"lambda_L_g", d.lambda_l_g},
               {"difference", d.difference},
               {"equals_delta_g_minus_delta_f", d.identity_orientation_holds},
               {"equals_delta_f_minus_delta_g", d.stated_orientation_holds}};
      if (d.corrected_difference) {
        row["ck_f"] = optional_json(d.ck_f);
        row["ck_g"] = optional_json(d.ck_g);
        row["corrected_difference"] = *d.corrected_difference;
        row["corrected_equals_g_minus_f"] = optional_json(d.corrected_identity_orientation_holds);
        row["corrected_equals_f_minus_g"] = optional_json(d.corrected_stated_orientation_holds);
      }
      rows.push_back(std::move(row));
    }
    j["deltas"] = rows;
  }
  return j;
}

std::string dump(const Json& value) { return value.dump(2) + "\n"; }

}  // namespace iwasawa::io
