#pragma once

// Report records and their json / csv / markdown renderings.

#include <chrono>
#include <ctime>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qwedge/rank/rank_engine.hpp"

namespace qwedge {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "qwedge-report/1";
inline constexpr const char* kToolVersion = "0.1.0";
/// Bumped whenever a computation changes its output; invalidates cached entries.
inline constexpr int kEngineVersion = 3;

/// Where an expected value comes from.
///   reference : a published value, reproduced
///   oracle    : an independent computation (classical limit, counting argument)
///   property  : a structural identity with no constant involved
///   none      : exploratory, nothing is asserted beyond consistency
enum class Provenance { reference, oracle, property, none };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::reference: return "reference";
    case Provenance::oracle: return "oracle";
    case Provenance::property: return "property";
    case Provenance::none: return "none";
  }
  return "none";
}

inline json rank_json(const RankResult& r) {
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back({{"p", p.prime}, {"q", p.q_value}});
  return {{"value", r.value}, {"per_point", r.per_point}, {"agreed", r.agreed}, {"mode", to_string(r.mode)}, {"points", pts}};
}

struct Result {
  std::string name;
  std::optional<json> expected;
  json computed;
  Provenance provenance = Provenance::none;
  json rank_evidence = json::array();
  bool pass = true;

  bool agreed() const {
    for (const auto& e : rank_evidence)
      if (!e.value("agreed", true)) return false;
    return true;
  }
  json to_json() const {
    json j{{"name", name}, {"computed", computed}, {"provenance", to_string(provenance)},
           {"rank_evidence", rank_evidence}, {"pass", pass}};
    if (expected) j["expected"] = *expected;
    return j;
  }
  static Result from_json(const json& j) {
    Result r;
    r.name = j.at("name").get<std::string>();
    if (j.contains("expected")) r.expected = j.at("expected");
    r.computed = j.at("computed");
    const auto p = j.at("provenance").get<std::string>();
    r.provenance = p == "reference" ? Provenance::reference
                   : p == "oracle"  ? Provenance::oracle
                   : p == "property" ? Provenance::property
                                     : Provenance::none;
    r.rank_evidence = j.at("rank_evidence");
    r.pass = j.at("pass").get<bool>();
    return r;
  }
};

/// Builds a result comparing an expected value with a computed one.
template <class T>
Result compare(std::string name, const T& expected, const T& computed, Provenance p, json evidence = json::array()) {
  Result r;
  r.name = std::move(name);
  r.expected = json(expected);
  r.computed = json(computed);
  r.provenance = p;
  r.rank_evidence = std::move(evidence);
  r.pass = expected == computed;
  return r;
}

inline Result observation(std::string name, json computed, bool pass, Provenance p = Provenance::property,
                          json evidence = json::array()) {
  Result r;
  r.name = std::move(name);
  r.computed = std::move(computed);
  r.provenance = p;
  r.rank_evidence = std::move(evidence);
  r.pass = pass;
  return r;
}

inline std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Report {
  std::string command;
  json config = json::object();
  std::vector<Result> results;
  std::optional<json> error;  // {"kind", "message"} when the command could not run
  std::string started, finished;

  std::size_t failed() const {
    std::size_t n = 0;
    for (const auto& r : results) n += r.pass ? 0 : 1;
    return n;
  }
  bool all_agreed() const {
    for (const auto& r : results)
      if (!r.agreed()) return false;
    return true;
  }
  bool ok() const { return !error && failed() == 0 && all_agreed(); }

  json to_json() const {
    json res = json::array();
    for (const auto& r : results) res.push_back(r.to_json());
    json j{{"schema", kSchemaVersion},
           {"meta",
            {{"command", command},
             {"config", config},
             {"version", kToolVersion},
             {"engine_version", kEngineVersion},
             {"timestamps", {{"started", started}, {"finished", finished}}}}},
           {"results", res},
           {"summary",
            {{"checks", results.size()}, {"failed", failed()}, {"all_agreed", all_agreed()}, {"ok", ok()}}}};
    if (error) j["error"] = *error;
    return j;
  }
};

namespace detail {

inline std::string cell(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline std::string md_cell(std::string s) {
  std::string out;
  for (char c : s) out += c == '|' ? std::string("\\|") : std::string(1, c);
  return out;
}

}  // namespace detail

inline std::string emit_json(const Report& r) { return r.to_json().dump(2) + "\n"; }

inline std::string emit_csv(const Report& r) {
  std::ostringstream os;
  os << "name,expected,computed,provenance,agreed,pass\n";
  for (const auto& x : r.results)
    os << detail::csv_field(x.name) << ',' << detail::csv_field(x.expected ? detail::cell(*x.expected) : "") << ','
       << detail::csv_field(detail::cell(x.computed)) << ',' << to_string(x.provenance) << ','
       << (x.agreed() ? "true" : "false") << ',' << (x.pass ? "PASS" : "FAIL") << '\n';
  if (r.error) os << "error," << "," << detail::csv_field(r.error->value("message", "")) << ",,,FAIL\n";
  return os.str();
}

inline std::string emit_md(const Report& r) {
  std::ostringstream os;
  os << "# qwedge " << r.command << "\n\n";
  os << "config: `" << r.config.dump() << "`\n\n";
  if (r.error) os << "**error** (" << r.error->value("kind", "") << "): " << r.error->value("message", "") << "\n\n";
  os << "| check | expected | computed | source | agreed | status |\n";
  os << "|---|---|---|---|---|---|\n";
  for (const auto& x : r.results)
    os << "| " << detail::md_cell(x.name) << " | " << detail::md_cell(x.expected ? detail::cell(*x.expected) : "")
       << " | " << detail::md_cell(detail::cell(x.computed)) << " | " << to_string(x.provenance) << " | "
       << (x.agreed() ? "yes" : "no") << " | " << (x.pass ? "PASS" : "FAIL") << " |\n";
  os << "\n" << r.results.size() - r.failed() << "/" << r.results.size() << " checks passed\n";
  return os.str();
}

inline std::string emit(const Report& r, const std::string& format) {
  if (format == "json") return emit_json(r);
  if (format == "csv") return emit_csv(r);
  if (format == "md") return emit_md(r);
  throw ConfigError("unknown format '" + format + "' (expected json, csv or md)");
}

}  // namespace qwedge
