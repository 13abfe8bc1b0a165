#pragma once

// Machine-readable run reports. JSON is canonical; CSV is a flat projection of the rows.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace orbitlab {

inline constexpr const char* kToolVersion = "0.1.0";

struct ReportRow {
  std::string stage;
  std::string space;
  std::string radius;           // empty when not applicable
  std::string quantity;
  nlohmann::json value;
  std::optional<double> stderr_;  // Monte-Carlo standard error or certified band
  std::optional<bool> verdict;    // inequality or check outcome
};

struct StageRecord {
  std::string name;
  std::string status = "pass";  // pass | fail | error
  std::string error;
  double seconds = 0;
};

class Report {
 public:
  Report(std::string command, nlohmann::json config);

  void add(ReportRow row);
  /// Convenience for rows that carry a verdict.
  void check(const std::string& stage, const std::string& space, const std::string& radius,
             const std::string& quantity, nlohmann::json value, bool verdict,
             std::optional<double> stderr_ = std::nullopt);
  void add_stage(StageRecord stage);

  const std::vector<ReportRow>& rows() const { return rows_; }
  const std::vector<StageRecord>& stages() const { return stages_; }
  /// Every verdict holds and every stage passed.
  bool passed() const;

  /// Wall-clock seconds are included only on request, so that default output is reproducible.
  nlohmann::json to_json(bool timings = false) const;
  std::string to_csv() const;

 private:
  std::string command_;
  nlohmann::json config_;
  std::vector<ReportRow> rows_;
  std::vector<StageRecord> stages_;
};

/// Structured error object printed on failure.
nlohmann::json error_json(const std::string& kind, const std::string& message);

}  // namespace orbitlab
