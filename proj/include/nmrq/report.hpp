#pragma once

#include <json.hpp>
#include <string>

#include "nmrq/clusters.hpp"
#include "nmrq/costs.hpp"
#include "nmrq/gqsp.hpp"
#include "nmrq/surface_code.hpp"

namespace nmrq {

inline constexpr int kReportSchemaVersion = 1;

using ordered_json = nlohmann::ordered_json;

// Write-then-rename so concurrent batch workers never expose partial files.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

ordered_json budget_to_json(const SimulationBudget& b);
ordered_json estimate_to_json(const LogicalEstimate& e);
ordered_json metrics_to_json(const ClusterMetrics& m);
ordered_json aggregate_to_json(const AggregateEstimate& a);
ordered_json physical_to_json(const PhysicalEstimate& p);
ordered_json plan_to_json(const GqspPlan& p);

// Lossy row-per-cluster CSV projection of an estimate report produced by
// the CLI (canonical form is the JSON).
std::string estimate_report_csv(const ordered_json& report);

}  // namespace nmrq
