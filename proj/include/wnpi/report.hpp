#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace wnpi {

inline constexpr const char* kToolVersion = "0.1.0";

enum class CheckStatus { pass, fail, skipped };

const char* to_string(CheckStatus s);
CheckStatus check_status_from_string(const std::string& s);

struct CheckRecord {
  std::string id;
  CheckStatus status = CheckStatus::pass;
  double deviation = 0.0;  // NaN when not applicable
  double tolerance = 0.0;
  std::string note;
  std::optional<double> runtime_ms;
};

/// Result of one verification run. Check ids are unique; records keep
/// insertion order so the JSON form is deterministic.
class RunReport {
 public:
  RunReport() = default;
  RunReport(std::string suite, std::uint64_t seed) : suite_(std::move(suite)), seed_(seed) {}

  const std::string& suite() const { return suite_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& tool_version() const { return tool_version_; }
  const nlohmann::json& parameters() const { return parameters_; }
  nlohmann::json& parameters() { return parameters_; }
  const std::vector<CheckRecord>& checks() const { return checks_; }

  /// Throws InvariantError on a duplicate id.
  void add(CheckRecord record);
  /// pass iff deviation <= tolerance (NaN fails).
  void add_measured(const std::string& id, double deviation, double tolerance,
                    std::string note = {});
  void add_boolean(const std::string& id, bool ok, std::string note = {});
  /// Appends every record of `other`, prefixing nothing; ids must stay unique.
  void merge(const RunReport& other);

  bool all_passed() const;
  int count(CheckStatus s) const;

  nlohmann::json to_json() const;
  static RunReport from_json(const nlohmann::json& j);

 private:
  std::string suite_;
  std::uint64_t seed_ = 0;
  std::string tool_version_ = kToolVersion;
  nlohmann::json parameters_ = nlohmann::json::object();
  std::vector<CheckRecord> checks_;
};

}  // namespace wnpi
