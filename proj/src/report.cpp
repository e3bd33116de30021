#include "wnpi/report.hpp"

#include <cmath>
#include <limits>

#include "wnpi/common.hpp"

namespace wnpi {

using nlohmann::json;

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "fail";
}

CheckStatus check_status_from_string(const std::string& s) {
  if (s == "pass") return CheckStatus::pass;
  if (s == "fail") return CheckStatus::fail;
  if (s == "skipped") return CheckStatus::skipped;
  throw InputError("report: unknown status \"" + s + "\"");
}

void RunReport::add(CheckRecord record) {
  for (const auto& c : checks_) {
    if (c.id == record.id) throw InvariantError("report: duplicate check id \"" + record.id + "\"");
  }
  checks_.push_back(std::move(record));
}

void RunReport::add_measured(const std::string& id, double deviation, double tolerance,
                             std::string note) {
  CheckRecord r;
  r.id = id;
  r.deviation = deviation;
  r.tolerance = tolerance;
  r.status = deviation <= tolerance ? CheckStatus::pass : CheckStatus::fail;
  r.note = std::move(note);
  add(std::move(r));
}

void RunReport::add_boolean(const std::string& id, bool ok, std::string note) {
  CheckRecord r;
  r.id = id;
  r.deviation = std::numeric_limits<double>::quiet_NaN();
  r.tolerance = std::numeric_limits<double>::quiet_NaN();
  r.status = ok ? CheckStatus::pass : CheckStatus::fail;
  r.note = std::move(note);
  add(std::move(r));
}

void RunReport::merge(const RunReport& other) {
  for (const auto& c : other.checks_) add(c);
}

bool RunReport::all_passed() const { return count(CheckStatus::fail) == 0; }

int RunReport::count(CheckStatus s) const {
  int n = 0;
  for (const auto& c : checks_) n += c.status == s;
  return n;
}

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

json RunReport::to_json() const {
  json checks = json::array();
  for (const auto& c : checks_) {
    json r = {{"id", c.id},
              {"status", to_string(c.status)},
              {"deviation", number_or_null(c.deviation)},
              {"tolerance", number_or_null(c.tolerance)}};
    if (!c.note.empty()) r["note"] = c.note;
    if (c.runtime_ms) r["runtime_ms"] = *c.runtime_ms;
    checks.push_back(std::move(r));
  }
  return {{"suite", suite_},
          {"seed", seed_},
          {"tool_version", tool_version_},
          {"parameters", parameters_},
          {"summary",
           {{"pass", count(CheckStatus::pass)},
            {"fail", count(CheckStatus::fail)},
            {"skipped", count(CheckStatus::skipped)}}},
          {"checks", checks}};
}

RunReport RunReport::from_json(const json& j) {
  try {
    RunReport r(j.at("suite").get<std::string>(), j.at("seed").get<std::uint64_t>());
    r.tool_version_ = j.at("tool_version").get<std::string>();
    r.parameters_ = j.at("parameters");
    for (const auto& c : j.at("checks")) {
      CheckRecord rec;
      rec.id = c.at("id").get<std::string>();
      rec.status = check_status_from_string(c.at("status").get<std::string>());
      rec.deviation = number_from(c.at("deviation"));
      rec.tolerance = number_from(c.at("tolerance"));
      if (c.contains("note")) rec.note = c["note"].get<std::string>();
      if (c.contains("runtime_ms")) rec.runtime_ms = c["runtime_ms"].get<double>();
      r.add(std::move(rec));
    }
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
}

}  // namespace wnpi
