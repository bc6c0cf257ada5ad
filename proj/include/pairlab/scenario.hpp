#pragma once

#include <map>
#include <string>

#include "pairlab/cantor.hpp"
#include "pairlab/pairing.hpp"

namespace pairlab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kConfigSchema = "pairlab-config/1";
inline constexpr const char* kReportSchema = "pairlab-report/1";

struct CheckRecord {
  std::string id;
  double value = 0.0;      // measured quantity (residual, error, ...)
  double threshold = 0.0;  // judged against this bound
  bool pass = false;
  std::string note;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ScenarioReport {
  std::string name;
  std::vector<CheckRecord> records;
  std::map<std::string, Table> tables;
  bool pass = true;
  double elapsed_seconds = 0.0;
};

// bundled gallery; every [PAPER]-backed example is runnable by name
std::vector<std::string> scenario_names();
std::string scenario_summary(const std::string& name);
bool has_scenario(const std::string& name);

// tol_scale multiplies every threshold (CLI --tolerance-scale)
ScenarioReport run_scenario(const std::string& name, double tol_scale = 1.0);

// schedule fingerprint recorded in report metadata
std::string schedule_hash(const RadiusSchedule& sched);

}  // namespace pairlab
