#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wsrec/als.hpp"
#include "wsrec/bpr.hpp"
#include "wsrec/embedding_io.hpp"
#include "wsrec/errors.hpp"
#include "wsrec/experiment.hpp"
#include "wsrec/friedman.hpp"
#include "wsrec/ingest.hpp"
#include "wsrec/recommend.hpp"
#include "wsrec/report.hpp"
#include "wsrec/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitTraining = 3;

struct PrepareArgs {
  std::string name = "dataset";
  std::string input;
  std::string out_dir = "out";
  std::string delimiter;
  bool header = false;
  bool no_header = false;
  int user_col = -1;
  int item_col = -1;
  int rating_col = -2;
  int type_col = -2;
  int timestamp_col = -2;
  std::string feedback;
  std::string level;
};

wsrec::DatasetSpec build_spec(const PrepareArgs& args) {
  // Start from the built-in preset when the name matches one; flags override.
  wsrec::DatasetSpec spec;
  if (auto preset = wsrec::find_builtin_spec(args.name)) {
    spec = *preset;
  } else {
    spec.name = args.name;
  }
  spec.path = args.input;
  if (!args.delimiter.empty()) {
    spec.delimiter = args.delimiter == "\\t" ? "\t" : args.delimiter;
  }
  if (args.header) {
    spec.has_header = true;
  }
  if (args.no_header) {
    spec.has_header = false;
  }
  if (args.user_col >= 0) spec.columns.user = args.user_col;
  if (args.item_col >= 0) spec.columns.item = args.item_col;
  if (args.rating_col >= -1) spec.columns.rating = args.rating_col;
  if (args.type_col >= -1) spec.columns.type = args.type_col;
  if (args.timestamp_col >= -1) spec.columns.timestamp = args.timestamp_col;
  if (!args.feedback.empty()) {
    if (args.feedback == "explicit") {
      spec.feedback = wsrec::FeedbackKind::kExplicit;
    } else if (args.feedback == "implicit") {
      spec.feedback = wsrec::FeedbackKind::kImplicit;
    } else if (args.feedback == "multi-level") {
      spec.feedback = wsrec::FeedbackKind::kMultiLevel;
    } else {
      throw wsrec::UsageError("unknown feedback kind: " + args.feedback);
    }
  }
  if (!args.level.empty()) {
    spec.selected_level = args.level;
  }
  return spec;
}

int cmd_prepare(const PrepareArgs& args) {
  const wsrec::DatasetSpec spec = build_spec(args);
  const auto parsed = wsrec::parse_dataset(spec);
  const auto pairs = wsrec::preprocess(parsed.records, spec);
  const auto matrix = wsrec::InteractionMatrix::from_records(pairs);

  std::filesystem::create_directories(args.out_dir);
  const auto interactions_path =
      std::filesystem::path(args.out_dir) / (spec.name + ".interactions.tsv");
  wsrec::write_canonical(interactions_path, matrix);

  const double s = matrix.sparsity();
  char sparsity_text[32];
  std::snprintf(sparsity_text, sizeof(sparsity_text), "%.2f%%", 100.0 * s);

  nlohmann::json stats{{"name", spec.name},
                       {"users", matrix.user_count()},
                       {"items", matrix.item_count()},
                       {"interactions", matrix.interaction_count()},
                       {"sparsity", s},
                       {"raw_records", parsed.records.size()},
                       {"rejected_rows", parsed.rejected_rows},
                       {"interactions_file", interactions_path.string()}};
  const auto stats_path =
      std::filesystem::path(args.out_dir) / (spec.name + ".stats.json");
  std::ofstream stats_out(stats_path, std::ios::binary);
  stats_out << stats.dump(1) << '\n';

  std::cout << spec.name << ": users=" << matrix.user_count()
            << " items=" << matrix.item_count()
            << " interactions=" << matrix.interaction_count()
            << " sparsity=" << sparsity_text << '\n';
  if (parsed.rejected_rows > 0) {
    std::cout << "  (" << parsed.rejected_rows
              << " unparseable rows rejected)\n";
  }
  std::cout << "wrote " << interactions_path.string() << '\n';
  return kExitOk;
}

struct RunArgs {
  std::string config_path;
  std::string dataset;
  std::string name;
  std::string learner;
  std::string mode;
  std::int64_t seed = -1;
  std::int64_t train_seed = -1;
  int n_max = -1;
  int tuning_cutoff = -1;
  std::vector<std::string> metrics;
  std::vector<std::string> weights;
  std::string embeddings;
  std::string out_dir;
};

std::pair<double, double> parse_ratio(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) {
    throw wsrec::UsageError("weight ratio must look like W_R:W_S, got: " +
                            text);
  }
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw wsrec::UsageError("bad weight ratio: " + text);
  }
}

int cmd_run(const RunArgs& args) {
  wsrec::RunConfig config;
  if (!args.config_path.empty()) {
    config = wsrec::load_run_config(args.config_path);
  }
  if (!args.dataset.empty()) config.interactions = args.dataset;
  if (!args.name.empty()) config.dataset_name = args.name;
  if (!args.learner.empty()) {
    config.grid.learner = wsrec::learner_from_string(args.learner);
  }
  if (!args.mode.empty()) config.mode = wsrec::mode_from_string(args.mode);
  if (args.seed >= 0) {
    config.grid.fold_seed = static_cast<std::uint64_t>(args.seed);
  }
  if (args.train_seed >= 0) {
    config.grid.train_seed = static_cast<std::uint64_t>(args.train_seed);
  }
  if (args.n_max > 0) config.grid.n_max = args.n_max;
  if (args.tuning_cutoff > 0) {
    config.grid.tuning_cutoff = args.tuning_cutoff;
  } else if (config.grid.tuning_cutoff > config.grid.n_max) {
    config.grid.tuning_cutoff = config.grid.n_max;
  }
  if (!args.metrics.empty()) {
    config.grid.metrics.clear();
    for (const auto& metric : args.metrics) {
      config.grid.metrics.push_back(wsrec::similarity_from_string(metric));
    }
  }
  if (!args.weights.empty()) {
    config.grid.weight_ratios.clear();
    for (const auto& ratio : args.weights) {
      config.grid.weight_ratios.push_back(parse_ratio(ratio));
    }
  }
  if (!args.embeddings.empty()) {
    config.grid.external_embeddings = args.embeddings;
  }
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;

  const auto outputs = wsrec::run_experiment(config, &std::cout);

  const auto& sel = outputs.result.selection(config.mode);
  auto report_line = [&](const char* label, std::size_t index) {
    if (index == wsrec::ModeSelection::kNone) {
      return;
    }
    const auto& cell = outputs.result.cells[index];
    std::cout << "  " << label << ": ndcg@" << config.grid.tuning_cutoff
              << "=" << cell.mean_ndcg_at(config.grid.tuning_cutoff)
              << " hr@" << config.grid.tuning_cutoff << "="
              << cell.mean_hr_at(config.grid.tuning_cutoff) << "  ["
              << cell.hyper.label() << " metric=" << to_string(cell.metric)
              << " w=" << cell.weight_user_item << ":"
              << cell.weight_item_item << "]\n";
  };
  std::cout << "mode " << to_string(config.mode) << " selections:\n";
  report_line("user-item", sel.user_item);
  report_line("item-item", sel.item_item);
  report_line("weighted ", sel.weighted);
  std::cout << "wrote " << outputs.results_json.string() << '\n'
            << "wrote " << outputs.results_table_csv.string() << '\n'
            << "wrote " << outputs.curves_csv.string() << '\n';
  return kExitOk;
}

struct TrainArgs {
  std::string dataset;
  std::string learner = "als";
  int epochs = 15;
  int dim = 32;
  double regularization = 1e-2;
  double learning_rate = 1e-2;
  double confidence_scale = 40.0;
  std::int64_t seed = 0;
  std::string out;
};

int cmd_train(const TrainArgs& args) {
  const auto matrix = wsrec::read_canonical(args.dataset);
  wsrec::EmbeddingPair embeddings;
  if (args.learner == "als") {
    wsrec::AlsConfig cfg;
    cfg.epochs = args.epochs;
    cfg.dim = args.dim;
    cfg.regularization = args.regularization;
    cfg.confidence_scale = args.confidence_scale;
    cfg.seed = static_cast<std::uint64_t>(args.seed);
    embeddings = wsrec::train_als(matrix, cfg);
  } else if (args.learner == "bpr") {
    wsrec::BprConfig cfg;
    cfg.epochs = args.epochs;
    cfg.dim = args.dim;
    cfg.regularization = args.regularization;
    cfg.learning_rate = args.learning_rate;
    cfg.seed = static_cast<std::uint64_t>(args.seed);
    embeddings = wsrec::train_bpr(matrix, cfg);
  } else {
    throw wsrec::UsageError("train supports learners: als, bpr");
  }
  wsrec::export_embeddings(embeddings, matrix.user_map(), matrix.item_map(),
                           std::filesystem::path(args.out));
  std::cout << "trained " << embeddings.source_tag << '\n'
            << "wrote " << args.out << '\n';
  return kExitOk;
}

struct RecommendArgs {
  std::string dataset;
  std::string embeddings;
  double weight_user_item = 1.0;
  double weight_item_item = 1.0;
  std::string metric = "dot";
  int n = 20;
  std::string out;
};

int cmd_recommend(const RecommendArgs& args) {
  const auto matrix = wsrec::read_canonical(args.dataset);
  const auto embeddings = wsrec::import_embeddings(
      std::filesystem::path(args.embeddings), matrix.user_map(),
      matrix.item_map());
  const wsrec::WeightConfig w{args.weight_user_item, args.weight_item_item,
                              wsrec::similarity_from_string(args.metric)};
  const auto lists = wsrec::top_n(embeddings, matrix, w, args.n);
  if (args.out.empty()) {
    wsrec::write_recommendations(std::cout, lists, matrix);
  } else {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) {
      throw wsrec::DataError("cannot write recommendations: " + args.out);
    }
    wsrec::write_recommendations(out, lists, matrix);
    std::cout << "wrote " << args.out << '\n';
  }
  return kExitOk;
}

struct StatsArgs {
  std::string table_path;
  double alpha = 0.10;
};

int cmd_stats(const StatsArgs& args) {
  const wsrec::ScoreTable table = wsrec::read_score_table(args.table_path);
  const wsrec::StatTestResult result =
      wsrec::friedman_test(table.scores, args.alpha);

  std::printf("friedman: X^2_r = %.4f over %d datasets x %d models\n",
              result.friedman_statistic, result.dataset_count,
              result.model_count);
  std::printf("average ranks (1 = best):\n");
  for (std::size_t j = 0; j < table.models.size(); ++j) {
    std::printf("  %-24s %.4f\n", table.models[j].c_str(),
                result.average_ranks[j]);
  }
  std::printf("nemenyi critical difference (alpha=%.2f): %.4f\n", result.alpha,
              result.nemenyi_cd);
  const auto pairs = wsrec::significant_pairs(result);
  if (pairs.empty()) {
    std::printf("no model pair differs beyond the critical difference\n");
  } else {
    for (const auto& [a, b] : pairs) {
      const std::size_t ia = static_cast<std::size_t>(a);
      const std::size_t ib = static_cast<std::size_t>(b);
      const bool a_better = result.average_ranks[ia] < result.average_ranks[ib];
      std::printf("  %s outperforms %s (rank gap %.4f > CD)\n",
                  table.models[a_better ? ia : ib].c_str(),
                  table.models[a_better ? ib : ia].c_str(),
                  std::abs(result.average_ranks[ia] - result.average_ranks[ib]));
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted-similarity embedding recommender and evaluation "
               "harness"};
  app.set_version_flag("--version", wsrec::kVersion);
  app.require_subcommand(1);

  PrepareArgs prepare;
  auto* prepare_cmd = app.add_subcommand(
      "prepare", "preprocess a raw dataset into a canonical interactions file");
  prepare_cmd->add_option("--input", prepare.input, "raw dataset file")
      ->required();
  prepare_cmd->add_option("--name", prepare.name,
                          "dataset name (built-in presets: anime, bestbuy, "
                          "ciaodvd, delicious, filmtrust, jester, lastfm, "
                          "movielens-1m, retailrocket)");
  prepare_cmd->add_option("--out", prepare.out_dir, "output directory");
  prepare_cmd->add_option("--delimiter", prepare.delimiter,
                          "field delimiter (use \\t for tab)");
  prepare_cmd->add_flag("--has-header", prepare.header,
                        "first line is a header");
  prepare_cmd->add_flag("--no-header", prepare.no_header,
                        "first line is data");
  prepare_cmd->add_option("--user-col", prepare.user_col, "user id column");
  prepare_cmd->add_option("--item-col", prepare.item_col, "item id column");
  prepare_cmd->add_option("--rating-col", prepare.rating_col,
                          "rating column (-1: none)");
  prepare_cmd->add_option("--type-col", prepare.type_col,
                          "interaction-type column (-1: none)");
  prepare_cmd->add_option("--timestamp-col", prepare.timestamp_col,
                          "timestamp column (-1: none)");
  prepare_cmd->add_option("--feedback", prepare.feedback,
                          "explicit | implicit | multi-level");
  prepare_cmd->add_option("--level", prepare.level,
                          "interaction level to keep (multi-level feedback)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand(
      "run", "run the cross-validated grid-search experiment");
  run_cmd->add_option("--config", run.config_path, "JSON run config");
  run_cmd->add_option("--dataset", run.dataset,
                      "canonical interactions file (from prepare)");
  run_cmd->add_option("--name", run.name, "dataset name for reports");
  run_cmd->add_option("--learner", run.learner, "als | bpr | external");
  run_cmd->add_option("--mode", run.mode, "reuse | fine_tune");
  run_cmd->add_option("--seed", run.seed, "fold split seed");
  run_cmd->add_option("--train-seed", run.train_seed, "embedding seed base");
  run_cmd->add_option("--n-max", run.n_max, "recommendation list length");
  run_cmd->add_option("--tuning-cutoff", run.tuning_cutoff,
                      "rank the grid search optimizes NDCG at");
  run_cmd->add_option("--metric", run.metrics,
                      "similarity metric for the ensemble grid (repeatable)");
  run_cmd->add_option("--weights", run.weights,
                      "weight ratio W_R:W_S (repeatable)");
  run_cmd->add_option("--embeddings", run.embeddings,
                      "embedding file for the external learner");
  run_cmd->add_option("--out", run.out_dir, "output directory");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand(
      "train", "train one embedding configuration and export it");
  train_cmd->add_option("--dataset", train.dataset,
                        "canonical interactions file")
      ->required();
  train_cmd->add_option("--learner", train.learner, "als | bpr");
  train_cmd->add_option("--epochs", train.epochs, "training epochs");
  train_cmd->add_option("--dim", train.dim, "embedding dimension");
  train_cmd->add_option("--reg", train.regularization,
                        "regularization factor");
  train_cmd->add_option("--lr", train.learning_rate, "learning rate (bpr)");
  train_cmd->add_option("--confidence", train.confidence_scale,
                        "confidence scale (als)");
  train_cmd->add_option("--seed", train.seed, "initialization seed");
  train_cmd->add_option("--out", train.out, "embedding file to write")
      ->required();

  RecommendArgs recommend;
  auto* recommend_cmd = app.add_subcommand(
      "recommend", "emit top-N lists for every user from an embedding file");
  recommend_cmd
      ->add_option("--dataset", recommend.dataset,
                   "canonical interactions file")
      ->required();
  recommend_cmd
      ->add_option("--embeddings", recommend.embeddings, "embedding file")
      ->required();
  recommend_cmd->add_option("--weight-user-item", recommend.weight_user_item,
                            "w_R");
  recommend_cmd->add_option("--weight-item-item", recommend.weight_item_item,
                            "w_S");
  recommend_cmd->add_option("--metric", recommend.metric, "dot | cosine");
  recommend_cmd->add_option("--n", recommend.n, "list length");
  recommend_cmd->add_option("--out", recommend.out,
                            "output file (stdout when omitted)");

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand(
      "stats", "Friedman test and Nemenyi critical difference over a score "
               "table");
  stats_cmd->add_option("--table", stats.table_path,
                        "CSV: header dataset,<model>,...; one row per dataset")
      ->required();
  stats_cmd->add_option("--alpha", stats.alpha,
                        "significance level (0.05 or 0.10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (prepare_cmd->parsed()) {
      return cmd_prepare(prepare);
    }
    if (run_cmd->parsed()) {
      return cmd_run(run);
    }
    if (train_cmd->parsed()) {
      return cmd_train(train);
    }
    if (recommend_cmd->parsed()) {
      return cmd_recommend(recommend);
    }
    if (stats_cmd->parsed()) {
      return cmd_stats(stats);
    }
    return kExitUsage;
  } catch (const wsrec::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const wsrec::TrainingError& e) {
    std::cerr << "training error: " << e.what() << '\n';
    return kExitTraining;
  } catch (const wsrec::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}
