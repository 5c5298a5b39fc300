#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wsrec/grid_search.hpp"

namespace wsrec {

struct DatasetSummary {
  std::string name;
  std::size_t users = 0;
  std::size_t items = 0;
  std::size_t interactions = 0;
  double sparsity = 0.0;
};

/// Cell list <-> JSON, used for results files and grid checkpoints.
std::string serialize_cells(const std::vector<EvalReport>& cells);
std::vector<EvalReport> deserialize_cells(const std::string& json_text);

/// One dataset row with HR@cutoff and NDCG@cutoff column triples
/// (user-item / item-item / weighted); rows from several runs concatenate
/// into the usual comparison-table layout.
void write_results_table_csv(const std::filesystem::path& path,
                             const std::string& dataset,
                             const GridSearchResult& result, TuningMode mode,
                             int cutoff);

/// Long-form curve data: dataset,learner,recommender,n,ndcg,hr with one row
/// per cutoff 1..n_max, means across folds, for external plotting.
void write_curves_csv(const std::filesystem::path& path,
                      const std::string& dataset, const std::string& learner,
                      const GridSearchResult& result, TuningMode mode);

/// n-by-k score table for the rank statistics: header "dataset,<model>,...",
/// one row per dataset.
struct ScoreTable {
  std::vector<std::string> models;
  std::vector<std::string> datasets;
  std::vector<std::vector<double>> scores;  // [dataset][model]
};
ScoreTable read_score_table(const std::filesystem::path& path);

}  // namespace wsrec
