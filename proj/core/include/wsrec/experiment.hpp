#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "wsrec/grid_search.hpp"
#include "wsrec/report.hpp"

namespace wsrec {

/// Everything one reproducible experiment run needs. Loadable from a JSON
/// config file; command-line flags override individual fields.
struct RunConfig {
  std::string dataset_name = "dataset";
  std::filesystem::path interactions;  // canonical interactions file
  TuningMode mode = TuningMode::kReuse;
  GridOptions grid;
  std::filesystem::path out_dir = "out";

  void validate() const;
};

RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& config);

/// FNV-1a over the canonical JSON form; embedded in results files so a run
/// can be traced back to its exact configuration.
std::string config_hash(const RunConfig& config);

struct RunOutputs {
  std::filesystem::path results_json;
  std::filesystem::path results_table_csv;
  std::filesystem::path curves_csv;
  GridSearchResult result;
  DatasetSummary dataset;
};

/// Executes the full pipeline for one dataset: split, per-fold training over
/// the grid, recommendation, metric curves, mode selection, and report
/// files under config.out_dir. Grid groups are checkpointed under
/// out_dir/checkpoints so interrupted runs resume.
RunOutputs run_experiment(const RunConfig& config, std::ostream* log = nullptr);

}  // namespace wsrec
