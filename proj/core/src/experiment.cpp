#include "wsrec/experiment.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "wsrec/errors.hpp"
#include "wsrec/ingest.hpp"
#include "wsrec/version.hpp"

namespace wsrec {

namespace {

using nlohmann::json;

json grid_options_to_json(const GridOptions& g) {
  json metrics = json::array();
  for (const Similarity m : g.metrics) {
    metrics.push_back(to_string(m));
  }
  json ratios = json::array();
  for (const auto& [wr, ws] : g.weight_ratios) {
    ratios.push_back(json::array({wr, ws}));
  }
  return json{
      {"learner", to_string(g.learner)},
      {"als",
       {{"epochs", g.als.epochs},
        {"regularization", g.als.regularization},
        {"dims", g.als.dims},
        {"confidence_scale", g.als.confidence_scale}}},
      {"bpr",
       {{"epochs", g.bpr.epochs},
        {"learning_rates", g.bpr.learning_rates},
        {"regularization", g.bpr.regularization},
        {"dims", g.bpr.dims}}},
      {"external_embeddings", g.external_embeddings.string()},
      {"metrics", std::move(metrics)},
      {"weight_ratios", std::move(ratios)},
      {"n_max", g.n_max},
      {"tuning_cutoff", g.tuning_cutoff},
      {"fold_seed", g.fold_seed},
      {"train_seed", g.train_seed}};
}

void grid_options_from_json(const json& j, GridOptions& g) {
  if (j.contains("learner")) {
    g.learner = learner_from_string(j.at("learner").get<std::string>());
  }
  if (j.contains("als")) {
    const auto& a = j.at("als");
    if (a.contains("epochs")) a.at("epochs").get_to(g.als.epochs);
    if (a.contains("regularization"))
      a.at("regularization").get_to(g.als.regularization);
    if (a.contains("dims")) a.at("dims").get_to(g.als.dims);
    if (a.contains("confidence_scale"))
      a.at("confidence_scale").get_to(g.als.confidence_scale);
  }
  if (j.contains("bpr")) {
    const auto& b = j.at("bpr");
    if (b.contains("epochs")) b.at("epochs").get_to(g.bpr.epochs);
    if (b.contains("learning_rates"))
      b.at("learning_rates").get_to(g.bpr.learning_rates);
    if (b.contains("regularization"))
      b.at("regularization").get_to(g.bpr.regularization);
    if (b.contains("dims")) b.at("dims").get_to(g.bpr.dims);
  }
  if (j.contains("external_embeddings")) {
    g.external_embeddings = j.at("external_embeddings").get<std::string>();
  }
  if (j.contains("metrics")) {
    g.metrics.clear();
    for (const auto& m : j.at("metrics")) {
      g.metrics.push_back(similarity_from_string(m.get<std::string>()));
    }
  }
  if (j.contains("weight_ratios")) {
    g.weight_ratios.clear();
    for (const auto& r : j.at("weight_ratios")) {
      g.weight_ratios.emplace_back(r.at(0).get<double>(),
                                   r.at(1).get<double>());
    }
  }
  if (j.contains("n_max")) j.at("n_max").get_to(g.n_max);
  if (j.contains("tuning_cutoff")) j.at("tuning_cutoff").get_to(g.tuning_cutoff);
  if (j.contains("fold_seed")) j.at("fold_seed").get_to(g.fold_seed);
  if (j.contains("train_seed")) j.at("train_seed").get_to(g.train_seed);
}

json run_config_to_json_object(const RunConfig& c) {
  return json{{"dataset_name", c.dataset_name},
              {"interactions", c.interactions.string()},
              {"mode", to_string(c.mode)},
              {"grid", grid_options_to_json(c.grid)},
              {"out_dir", c.out_dir.string()}};
}

/// Checkpoints grid groups as JSON files under `dir`. The context hash ties
/// a checkpoint to its exact configuration and dataset, so stale files from
/// a different run are ignored rather than resumed.
class FileGridCache : public GridCache {
 public:
  FileGridCache(std::filesystem::path dir, std::string context_hash)
      : dir_(std::move(dir)), context_(std::move(context_hash)) {
    std::filesystem::create_directories(dir_);
  }

  std::optional<std::vector<EvalReport>> load(
      const std::string& group_key) override {
    const auto path = group_path(group_key);
    std::ifstream in(path);
    if (!in) {
      return std::nullopt;
    }
    try {
      json j = json::parse(in);
      if (j.at("context").get<std::string>() != context_) {
        return std::nullopt;
      }
      return deserialize_cells(j.at("cells").dump());
    } catch (const std::exception&) {
      return std::nullopt;  // unreadable checkpoint: recompute
    }
  }

  void store(const std::string& group_key,
             const std::vector<EvalReport>& cells) override {
    json j{{"context", context_},
           {"cells", json::parse(serialize_cells(cells))}};
    const auto path = group_path(group_key);
    std::ofstream out(path, std::ios::binary);
    out << j.dump(1) << '\n';
  }

 private:
  std::filesystem::path group_path(const std::string& key) const {
    std::string safe = key;
    for (char& c : safe) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' &&
          c != '_' && c != '.') {
        c = '_';
      }
    }
    return dir_ / (safe + ".json");
  }

  std::filesystem::path dir_;
  std::string context_;
};

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << hash;
  return out.str();
}

json selection_to_json(const GridSearchResult& result,
                       const ModeSelection& sel) {
  auto cell_json = [&](std::size_t index) -> json {
    if (index == ModeSelection::kNone) {
      return nullptr;
    }
    const EvalReport& cell = result.cells[index];
    json folds = json::array();
    for (const auto& curve : cell.per_fold) {
      json fold_curve = json::array();
      for (const auto& point : curve) {
        fold_curve.push_back({{"hr", point.hr}, {"ndcg", point.ndcg}});
      }
      folds.push_back(std::move(fold_curve));
    }
    json mean = json::array();
    for (const auto& point : cell.mean) {
      mean.push_back({{"hr", point.hr}, {"ndcg", point.ndcg}});
    }
    return json{{"recommender", to_string(cell.recommender)},
                {"config", cell.hyper.label()},
                {"metric", to_string(cell.metric)},
                {"weight_user_item", cell.weight_user_item},
                {"weight_item_item", cell.weight_item_item},
                {"per_fold", std::move(folds)},
                {"mean", std::move(mean)}};
  };
  return json{{"user_item", cell_json(sel.user_item)},
              {"item_item", cell_json(sel.item_item)},
              {"weighted", cell_json(sel.weighted)}};
}

}  // namespace

void RunConfig::validate() const {
  if (interactions.empty()) {
    throw UsageError("run config needs an interactions file");
  }
  if (out_dir.empty()) {
    throw UsageError("run config needs an output directory");
  }
  grid.validate();
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open config file: " + path.string());
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw UsageError("config file is not valid JSON: " +
                     std::string(e.what()));
  }
  RunConfig config;
  if (j.contains("dataset_name")) {
    j.at("dataset_name").get_to(config.dataset_name);
  }
  if (j.contains("interactions")) {
    config.interactions = j.at("interactions").get<std::string>();
  }
  if (j.contains("mode")) {
    config.mode = mode_from_string(j.at("mode").get<std::string>());
  }
  if (j.contains("grid")) {
    grid_options_from_json(j.at("grid"), config.grid);
  }
  if (j.contains("out_dir")) {
    config.out_dir = j.at("out_dir").get<std::string>();
  }
  return config;
}

std::string run_config_to_json(const RunConfig& config) {
  return run_config_to_json_object(config).dump(1);
}

std::string config_hash(const RunConfig& config) {
  return fnv1a_hex(run_config_to_json_object(config).dump());
}

RunOutputs run_experiment(const RunConfig& config, std::ostream* log) {
  config.validate();

  const InteractionMatrix matrix = read_canonical(config.interactions);

  RunOutputs outputs;
  outputs.dataset.name = config.dataset_name;
  outputs.dataset.users = matrix.user_count();
  outputs.dataset.items = matrix.item_count();
  outputs.dataset.interactions = matrix.interaction_count();
  outputs.dataset.sparsity = matrix.sparsity();

  std::filesystem::create_directories(config.out_dir);
  const std::string hash = config_hash(config);
  // Checkpoints are keyed by what determines cell values: the grid options
  // and the dataset. The tuning mode only changes which cells get selected,
  // so reuse- and fine-tune-mode runs share checkpoints.
  const std::string cell_context =
      fnv1a_hex(grid_options_to_json(config.grid).dump() + ":" +
                std::to_string(matrix.interaction_count()) + ":" +
                std::to_string(matrix.user_count()));
  FileGridCache cache(config.out_dir / "checkpoints", cell_context);

  if (log != nullptr) {
    *log << "dataset " << config.dataset_name << ": "
         << matrix.user_count() << " users, " << matrix.item_count()
         << " items, " << matrix.interaction_count() << " interactions\n";
  }

  outputs.result = grid_search(matrix, config.grid, &cache, log);
  const GridSearchResult& result = outputs.result;

  json folds = json::array();
  for (const auto& stats : result.fold_stats) {
    folds.push_back({{"train_interactions", stats.train_interactions},
                     {"test_interactions", stats.test_interactions},
                     {"dropped_cold_start", stats.dropped_cold_start}});
  }

  json cell_summaries = json::array();
  for (const auto& cell : result.cells) {
    json c{{"recommender", to_string(cell.recommender)},
           {"config", cell.hyper.label()},
           {"metric", to_string(cell.metric)},
           {"weight_user_item", cell.weight_user_item},
           {"weight_item_item", cell.weight_item_item}};
    if (cell.failed()) {
      c["error"] = cell.error;
    } else {
      json fold_scores = json::array();
      for (const auto& curve : cell.per_fold) {
        fold_scores.push_back(
            curve[static_cast<std::size_t>(config.grid.tuning_cutoff) - 1]
                .ndcg);
      }
      c["fold_ndcg"] = std::move(fold_scores);
      c["mean_ndcg"] = cell.mean_ndcg_at(config.grid.tuning_cutoff);
      c["mean_hr"] = cell.mean_hr_at(config.grid.tuning_cutoff);
    }
    cell_summaries.push_back(std::move(c));
  }

  json results{
      {"tool", {{"name", "wsrec"}, {"version", kVersion}}},
      {"config", run_config_to_json_object(config)},
      {"config_hash", hash},
      {"dataset",
       {{"name", outputs.dataset.name},
        {"users", outputs.dataset.users},
        {"items", outputs.dataset.items},
        {"interactions", outputs.dataset.interactions},
        {"sparsity", outputs.dataset.sparsity}}},
      {"folds", std::move(folds)},
      {"mode", to_string(config.mode)},
      {"tuning_cutoff", config.grid.tuning_cutoff},
      {"selected", selection_to_json(result, result.selection(config.mode))},
      {"fine_tune_improvement",
       {{"item_item", result.item_item_improvement},
        {"weighted", result.weighted_improvement}}},
      {"cells", std::move(cell_summaries)}};

  outputs.results_json = config.out_dir / "results.json";
  {
    std::ofstream out(outputs.results_json, std::ios::binary);
    if (!out) {
      throw DataError("cannot write results file: " +
                      outputs.results_json.string());
    }
    out << results.dump(1) << '\n';
  }

  outputs.results_table_csv = config.out_dir / "results_table.csv";
  write_results_table_csv(outputs.results_table_csv, config.dataset_name,
                          result, config.mode, config.grid.tuning_cutoff);

  outputs.curves_csv = config.out_dir / "curves.csv";
  write_curves_csv(outputs.curves_csv, config.dataset_name,
                   to_string(config.grid.learner), result, config.mode);

  return outputs;
}

}  // namespace wsrec
