#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wsrec/als.hpp"
#include "wsrec/bpr.hpp"
#include "wsrec/folds.hpp"
#include "wsrec/metrics.hpp"
#include "wsrec/recommend.hpp"

namespace wsrec {

enum class LearnerKind { kAls, kBpr, kExternal };
enum class TuningMode { kReuse, kFineTune };
enum class RecommenderKind { kUserItem, kItemItem, kWeighted };

std::string to_string(LearnerKind kind);
std::string to_string(TuningMode mode);
std::string to_string(RecommenderKind kind);
LearnerKind learner_from_string(std::string_view name);
TuningMode mode_from_string(std::string_view name);

/// One embedding hyperparameter point, uniform across learners. Unused axes
/// stay zero (e.g. learning_rate for ALS, everything for external imports).
struct HyperPoint {
  LearnerKind learner = LearnerKind::kAls;
  int epochs = 0;
  int dim = 0;
  double regularization = 0.0;
  double learning_rate = 0.0;

  std::string label() const;
  bool operator==(const HyperPoint&) const = default;
};

struct AlsGrid {
  std::vector<int> epochs{15, 30, 50};
  std::vector<double> regularization{1e-3, 1e-2, 1e-1};
  std::vector<int> dims{32, 64, 128};
  double confidence_scale = 40.0;
};

struct BprGrid {
  std::vector<int> epochs{15, 30, 50};
  std::vector<double> learning_rates{1e-3, 1e-2, 1e-1};
  std::vector<double> regularization{1e-3, 1e-2, 1e-1};
  std::vector<int> dims{32, 64, 128};
};

struct GridOptions {
  LearnerKind learner = LearnerKind::kAls;
  AlsGrid als;
  BprGrid bpr;
  std::filesystem::path external_embeddings;  // LearnerKind::kExternal

  std::vector<Similarity> metrics{Similarity::kDot, Similarity::kCosine};
  std::vector<std::pair<double, double>> weight_ratios{
      {1, 4}, {2, 3}, {1, 1}, {3, 2}, {4, 1}};

  int n_max = 20;          // recommendation list length
  int tuning_cutoff = 10;  // grid search optimizes NDCG at this rank
  std::uint64_t fold_seed = 42;
  std::uint64_t train_seed = 7;  // per-fold embedding seed = train_seed + fold

  void validate() const;
};

/// Evaluation of one grid cell: a recommender configuration scored on every
/// fold at every cutoff 1..n_max. This is the unit both tuning modes select
/// over; `error` marks a cell whose training failed.
struct EvalReport {
  RecommenderKind recommender = RecommenderKind::kUserItem;
  HyperPoint hyper;
  Similarity metric = Similarity::kDot;
  double weight_user_item = 1.0;
  double weight_item_item = 0.0;

  std::vector<std::vector<CurvePoint>> per_fold;  // [fold][n-1]
  std::vector<CurvePoint> mean;                   // [n-1]
  std::string error;

  bool failed() const { return !error.empty(); }
  double mean_ndcg_at(int n) const { return mean.at(static_cast<std::size_t>(n) - 1).ndcg; }
  double mean_hr_at(int n) const { return mean.at(static_cast<std::size_t>(n) - 1).hr; }
};

struct FoldStats {
  std::size_t train_interactions = 0;
  std::size_t test_interactions = 0;
  std::size_t dropped_cold_start = 0;
};

/// Indices into GridSearchResult::cells for the three reported recommenders.
struct ModeSelection {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::size_t user_item = kNone;
  std::size_t item_item = kNone;
  std::size_t weighted = kNone;
};

struct GridSearchResult {
  std::vector<EvalReport> cells;
  std::vector<FoldStats> fold_stats;

  /// reuse: embeddings tuned once on user-item NDCG@cutoff, then the
  /// ensemble grid runs on those frozen embeddings and item-item reuses them
  /// unchanged. fine_tune: every recommender picks its own argmax.
  ModeSelection reuse;
  ModeSelection fine_tune;

  /// Relative NDCG@cutoff gain of fine_tune over reuse, per recommender.
  double item_item_improvement = 0.0;
  double weighted_improvement = 0.0;

  const ModeSelection& selection(TuningMode mode) const {
    return mode == TuningMode::kReuse ? reuse : fine_tune;
  }
};

/// Checkpoint store for resumable runs. One group = one training unit (all
/// epoch marks of one hyperparameter combination) and every cell derived
/// from it.
class GridCache {
 public:
  virtual ~GridCache() = default;
  virtual std::optional<std::vector<EvalReport>> load(
      const std::string& group_key) = 0;
  virtual void store(const std::string& group_key,
                     const std::vector<EvalReport>& cells) = 0;
};

/// Runs the full protocol: seeded five-fold split, per-fold embedding
/// training over the hyper grid, top-n_max recommendation for the three
/// recommenders over the metric and weight grids, and HR/NDCG curves per
/// cell. Cell evaluation is independent of execution order; a training
/// failure marks the affected cells instead of aborting the search.
GridSearchResult grid_search(const InteractionMatrix& m,
                             const GridOptions& opt,
                             GridCache* cache = nullptr,
                             std::ostream* log = nullptr);

}  // namespace wsrec
