#include "orbitlab/report.hpp"

#include <sstream>

namespace orbitlab {

Report::Report(std::string command, nlohmann::json config) : command_(std::move(command)), config_(std::move(config)) {}

void Report::add(ReportRow row) { rows_.push_back(std::move(row)); }

void Report::check(const std::string& stage, const std::string& space, const std::string& radius,
                   const std::string& quantity, nlohmann::json value, bool verdict, std::optional<double> stderr_) {
  rows_.push_back({stage, space, radius, quantity, std::move(value), stderr_, verdict});
}

void Report::add_stage(StageRecord stage) { stages_.push_back(std::move(stage)); }

bool Report::passed() const {
  for (const auto& r : rows_)
    if (r.verdict && !*r.verdict) return false;
  for (const auto& s : stages_)
    if (s.status != "pass") return false;
  return true;
}

nlohmann::json Report::to_json(bool timings) const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rows_) {
    nlohmann::json j;
    if (!r.stage.empty()) j["stage"] = r.stage;
    if (!r.space.empty()) j["space"] = r.space;
    if (!r.radius.empty()) j["radius"] = r.radius;
    j["quantity"] = r.quantity;
    j["value"] = r.value;
    if (r.stderr_) j["stderr"] = *r.stderr_;
    if (r.verdict) j["verdict"] = *r.verdict ? "holds" : "fails";
    rows.push_back(std::move(j));
  }
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : stages_) {
    nlohmann::json j{{"name", s.name}, {"status", s.status}};
    if (!s.error.empty()) j["error"] = s.error;
    if (timings) j["seconds"] = s.seconds;
    stages.push_back(std::move(j));
  }
  nlohmann::json out{{"tool", "orbitlab"},
                     {"version", kToolVersion},
                     {"command", command_},
                     {"config", config_},
                     {"rows", std::move(rows)},
                     {"passed", passed()}};
  if (!stages_.empty()) out["stages"] = std::move(stages);
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string Report::to_csv() const {
  std::ostringstream out;
  out << "stage,space,radius,quantity,value,stderr,verdict\n";
  for (const auto& r : rows_) {
    const std::string value = r.value.is_string() ? r.value.get<std::string>() : r.value.dump();
    out << csv_field(r.stage) << ',' << csv_field(r.space) << ',' << csv_field(r.radius) << ','
        << csv_field(r.quantity) << ',' << csv_field(value) << ',';
    if (r.stderr_) out << nlohmann::json(*r.stderr_).dump();
    out << ',';
    if (r.verdict) out << (*r.verdict ? "holds" : "fails");
    out << '\n';
  }
  return out.str();
}

nlohmann::json error_json(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace orbitlab
