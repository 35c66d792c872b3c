#include "volcol/report.hpp"

#include <algorithm>
#include <array>
#include <string_view>

namespace volcol {

namespace {

// Mirrors schemas/selection_report.schema.json.
enum class Kind { String, UnsignedInt, Count, IndexArray, Number, NumberOrNull, Boolean };

struct Field {
  std::string_view name;
  Kind kind;
  bool required;
};

constexpr std::array<Field, 11> kFields = {{
    {"method", Kind::String, true},
    {"seed", Kind::UnsignedInt, false},
    {"r", Kind::Count, true},
    {"k", Kind::Count, true},
    {"chosen", Kind::IndexArray, true},
    {"residual_trace", Kind::Number, true},
    {"rank_k_error", Kind::Number, true},
    {"achieved_ratio", Kind::NumberOrNull, true},
    {"bound", Kind::Number, true},
    {"bound_satisfied", Kind::Boolean, true},
    {"wall_time_ms", Kind::Number, false},
}};

bool matches(const nlohmann::ordered_json& v, Kind kind) {
  switch (kind) {
    case Kind::String: return v.is_string();
    case Kind::UnsignedInt: return v.is_number_unsigned();
    case Kind::Count: return v.is_number_integer() && v.get<long long>() >= 0;
    case Kind::IndexArray:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const auto& e) {
               return e.is_number_integer() && e.template get<long long>() >= 0;
             });
    case Kind::Number: return v.is_number();
    case Kind::NumberOrNull: return v.is_number() || v.is_null();
    case Kind::Boolean: return v.is_boolean();
  }
  return false;
}

}  // namespace

nlohmann::ordered_json to_json(const SelectionReport& rep) {
  nlohmann::ordered_json j;
  j["method"] = rep.method;
  if (rep.seed) j["seed"] = *rep.seed;
  j["r"] = rep.r;
  j["k"] = rep.k;
  j["chosen"] = rep.chosen.indices();
  j["residual_trace"] = rep.residual_trace;
  j["rank_k_error"] = rep.rank_k_error;
  if (std::isfinite(rep.achieved_ratio))
    j["achieved_ratio"] = rep.achieved_ratio;
  else
    j["achieved_ratio"] = nullptr;
  j["bound"] = rep.bound;
  j["bound_satisfied"] = rep.bound_satisfied;
  if (rep.wall_time_ms) j["wall_time_ms"] = *rep.wall_time_ms;
  return j;
}

std::vector<std::string> validate_report_json(const nlohmann::ordered_json& j) {
  std::vector<std::string> errors;
  if (!j.is_object()) return {"report is not a JSON object"};
  for (const auto& [key, value] : j.items()) {
    const auto it = std::find_if(kFields.begin(), kFields.end(), [&](const Field& f) { return f.name == key; });
    if (it == kFields.end()) {
      errors.push_back("unknown field '" + key + "'");
    } else if (!matches(value, it->kind)) {
      errors.push_back("field '" + key + "' has the wrong type");
    }
  }
  if (j.contains("method") && j["method"].is_string()) {
    const auto m = j["method"].get<std::string>();
    if (m != "volume" && m != "greedy" && m != "brute") errors.push_back("field 'method' has unknown value '" + m + "'");
  }
  for (const Field& f : kFields)
    if (f.required && !j.contains(std::string(f.name))) errors.push_back("missing field '" + std::string(f.name) + "'");
  return errors;
}

SelectionReport report_from_json(const nlohmann::ordered_json& j) {
  const auto errors = validate_report_json(j);
  if (!errors.empty()) throw ParseError("invalid report: " + errors.front());
  SelectionReport rep;
  rep.method = j.at("method").get<std::string>();
  if (j.contains("seed")) rep.seed = j.at("seed").get<std::uint64_t>();
  rep.r = j.at("r").get<Index>();
  rep.k = j.at("k").get<Index>();
  try {
    rep.chosen = ColumnSubset(j.at("chosen").get<std::vector<Index>>());
  } catch (const InvalidArgumentError& e) {
    throw ParseError(std::string("invalid report: ") + e.what());
  }
  rep.residual_trace = j.at("residual_trace").get<double>();
  rep.rank_k_error = j.at("rank_k_error").get<double>();
  rep.achieved_ratio = j.at("achieved_ratio").is_null() ? std::numeric_limits<double>::infinity()
                                                        : j.at("achieved_ratio").get<double>();
  rep.bound = j.at("bound").get<double>();
  rep.bound_satisfied = j.at("bound_satisfied").get<bool>();
  if (j.contains("wall_time_ms")) rep.wall_time_ms = j.at("wall_time_ms").get<double>();
  return rep;
}

}  // namespace volcol
