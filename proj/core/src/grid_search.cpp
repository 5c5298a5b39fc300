#include "wsrec/grid_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "wsrec/embedding_io.hpp"
#include "wsrec/errors.hpp"

namespace wsrec {

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kAls:
      return "als";
    case LearnerKind::kBpr:
      return "bpr";
    case LearnerKind::kExternal:
      return "external";
  }
  return "?";
}

std::string to_string(TuningMode mode) {
  return mode == TuningMode::kReuse ? "reuse" : "fine_tune";
}

std::string to_string(RecommenderKind kind) {
  switch (kind) {
    case RecommenderKind::kUserItem:
      return "user_item";
    case RecommenderKind::kItemItem:
      return "item_item";
    case RecommenderKind::kWeighted:
      return "weighted";
  }
  return "?";
}

LearnerKind learner_from_string(std::string_view name) {
  if (name == "als") return LearnerKind::kAls;
  if (name == "bpr") return LearnerKind::kBpr;
  if (name == "external") return LearnerKind::kExternal;
  throw UsageError("unknown learner: " + std::string(name));
}

TuningMode mode_from_string(std::string_view name) {
  if (name == "reuse") return TuningMode::kReuse;
  if (name == "fine_tune") return TuningMode::kFineTune;
  throw UsageError("unknown tuning mode: " + std::string(name));
}

std::string HyperPoint::label() const {
  std::ostringstream out;
  out << to_string(learner);
  if (learner == LearnerKind::kExternal) {
    return out.str();
  }
  out << " epochs=" << epochs << " dim=" << dim << " reg=" << regularization;
  if (learner == LearnerKind::kBpr) {
    out << " lr=" << learning_rate;
  }
  return out.str();
}

void GridOptions::validate() const {
  if (n_max < 1) {
    throw UsageError("n_max must be at least 1");
  }
  if (tuning_cutoff < 1 || tuning_cutoff > n_max) {
    throw UsageError("tuning cutoff must lie in [1, n_max]");
  }
  if (metrics.empty()) {
    throw UsageError("at least one similarity metric is required");
  }
  if (weight_ratios.empty()) {
    throw UsageError("at least one weight ratio is required");
  }
  for (const auto& [wr, ws] : weight_ratios) {
    WeightConfig{wr, ws, Similarity::kDot}.validate();
  }
  if (learner == LearnerKind::kExternal && external_embeddings.empty()) {
    throw UsageError("external learner needs an embeddings path");
  }
  if (learner == LearnerKind::kAls &&
      (als.epochs.empty() || als.regularization.empty() || als.dims.empty())) {
    throw UsageError("ALS grid must not be empty");
  }
  if (learner == LearnerKind::kBpr &&
      (bpr.epochs.empty() || bpr.learning_rates.empty() ||
       bpr.regularization.empty() || bpr.dims.empty())) {
    throw UsageError("BPR grid must not be empty");
  }
}

namespace {

/// One training unit: everything sharing init and per-epoch state, i.e. a
/// hyperparameter combination minus the epoch axis.
struct TrainGroup {
  HyperPoint base;  // epochs unset
  std::vector<int> epoch_marks;

  std::string key() const {
    std::ostringstream out;
    out << to_string(base.learner) << "_dim" << base.dim << "_reg"
        << base.regularization;
    if (base.learner == LearnerKind::kBpr) {
      out << "_lr" << base.learning_rate;
    }
    return out.str();
  }
};

std::vector<TrainGroup> enumerate_groups(const GridOptions& opt) {
  std::vector<TrainGroup> groups;
  switch (opt.learner) {
    case LearnerKind::kAls:
      for (const int dim : opt.als.dims) {
        for (const double reg : opt.als.regularization) {
          TrainGroup g;
          g.base = {LearnerKind::kAls, 0, dim, reg, 0.0};
          g.epoch_marks = opt.als.epochs;
          groups.push_back(std::move(g));
        }
      }
      break;
    case LearnerKind::kBpr:
      for (const int dim : opt.bpr.dims) {
        for (const double reg : opt.bpr.regularization) {
          for (const double lr : opt.bpr.learning_rates) {
            TrainGroup g;
            g.base = {LearnerKind::kBpr, 0, dim, reg, lr};
            g.epoch_marks = opt.bpr.epochs;
            groups.push_back(std::move(g));
          }
        }
      }
      break;
    case LearnerKind::kExternal: {
      TrainGroup g;
      g.base = {LearnerKind::kExternal, 0, 0, 0.0, 0.0};
      g.epoch_marks = {0};
      groups.push_back(std::move(g));
      break;
    }
  }
  return groups;
}

/// Cell skeletons for one epoch mark of a group, in reporting order.
std::vector<EvalReport> make_cells(const HyperPoint& hyper,
                                   const GridOptions& opt) {
  std::vector<EvalReport> cells;
  EvalReport ui;
  ui.recommender = RecommenderKind::kUserItem;
  ui.hyper = hyper;
  ui.metric = Similarity::kDot;
  ui.weight_user_item = 1.0;
  ui.weight_item_item = 0.0;
  cells.push_back(ui);

  EvalReport ii;
  ii.recommender = RecommenderKind::kItemItem;
  ii.hyper = hyper;
  ii.metric = Similarity::kDot;
  ii.weight_user_item = 0.0;
  ii.weight_item_item = 1.0;
  cells.push_back(ii);

  for (const Similarity metric : opt.metrics) {
    for (const auto& [wr, ws] : opt.weight_ratios) {
      EvalReport w;
      w.recommender = RecommenderKind::kWeighted;
      w.hyper = hyper;
      w.metric = metric;
      w.weight_user_item = wr;
      w.weight_item_item = ws;
      cells.push_back(w);
    }
  }
  return cells;
}

/// Evaluates every cell of one epoch mark on one fold: builds the top-n_max
/// lists per cell over the evaluable users and appends the metric curve.
void evaluate_mark_on_fold(
    const EmbeddingPair& embeddings, const Fold& fold,
    const std::vector<std::vector<std::uint32_t>>& test_by_user,
    const std::vector<std::size_t>& evaluable_users, const GridOptions& opt,
    std::vector<EvalReport>& cells) {
  const std::size_t user_count = evaluable_users.size();
  std::vector<std::vector<RecommendationList>> cell_lists(cells.size());
  for (auto& lists : cell_lists) {
    lists.resize(user_count);
  }

  const bool need_cosine =
      std::find(opt.metrics.begin(), opt.metrics.end(), Similarity::kCosine) !=
      opt.metrics.end();

  // The dot pass always runs: the user-item and item-item baseline cells use
  // dot similarity (the learners' native score) even when the ensemble grid
  // does not include it.
  for (int metric_pass = 0; metric_pass < 2; ++metric_pass) {
    const Similarity metric =
        metric_pass == 0 ? Similarity::kDot : Similarity::kCosine;
    if (metric == Similarity::kCosine && !need_cosine) {
      continue;
    }

    const detail::Scorer scorer(embeddings, fold.train, metric);
    Eigen::MatrixXd r;
    Eigen::MatrixXd s;
    for (std::size_t begin = 0; begin < user_count;
         begin += detail::kScoreChunk) {
      const std::size_t end =
          std::min(begin + detail::kScoreChunk, user_count);
      scorer.score_chunk(
          std::span<const std::size_t>(evaluable_users)
              .subspan(begin, end - begin),
          r, s);
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t u = evaluable_users[k];
        const auto consumed = fold.train.items_of(u);
        const Eigen::Index col = static_cast<Eigen::Index>(k - begin);
        for (std::size_t c = 0; c < cells.size(); ++c) {
          if (cells[c].metric != metric) {
            continue;
          }
          const Eigen::VectorXd z =
              detail::blend(r, s, col, cells[c].weight_user_item,
                            cells[c].weight_item_item);
          cell_lists[c][k] = detail::select_top_n(u, z, consumed, opt.n_max);
        }
      }
    }
  }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    cells[c].per_fold.push_back(
        metric_curve(cell_lists[c], test_by_user, opt.n_max));
  }
}

void finalize_cells(std::vector<EvalReport>& cells, int fold_count,
                    int n_max) {
  for (auto& cell : cells) {
    if (cell.failed()) {
      cell.per_fold.clear();
      cell.mean.clear();
      continue;
    }
    cell.mean.assign(static_cast<std::size_t>(n_max), CurvePoint{});
    for (const auto& fold_curve : cell.per_fold) {
      for (std::size_t n = 0; n < fold_curve.size(); ++n) {
        cell.mean[n].hr += fold_curve[n].hr;
        cell.mean[n].ndcg += fold_curve[n].ndcg;
      }
    }
    for (auto& point : cell.mean) {
      point.hr /= fold_count;
      point.ndcg /= fold_count;
    }
  }
}

}  // namespace

GridSearchResult grid_search(const InteractionMatrix& m,
                             const GridOptions& opt, GridCache* cache,
                             std::ostream* log) {
  opt.validate();

  const FoldSplit split = split_folds(m, opt.fold_seed);

  GridSearchResult result;
  result.fold_stats.reserve(split.folds.size());
  std::vector<std::vector<std::vector<std::uint32_t>>> test_by_user;
  std::vector<std::vector<std::size_t>> evaluable_users;
  for (const Fold& fold : split.folds) {
    FoldStats stats;
    stats.train_interactions = fold.train.interaction_count();
    stats.test_interactions = fold.test.size();
    stats.dropped_cold_start = fold.dropped_cold_start;
    result.fold_stats.push_back(stats);

    test_by_user.push_back(test_items_by_user(fold));
    std::vector<std::size_t> users;
    for (std::size_t u = 0; u < fold.train.user_count(); ++u) {
      if (!test_by_user.back()[u].empty()) {
        users.push_back(u);
      }
    }
    evaluable_users.push_back(std::move(users));
  }

  const auto groups = enumerate_groups(opt);
  for (const auto& group : groups) {
    if (cache != nullptr) {
      if (auto cached = cache->load(group.key())) {
        if (log != nullptr) {
          *log << "group " << group.key() << ": restored from checkpoint"
               << std::endl;
        }
        result.cells.insert(result.cells.end(), cached->begin(),
                            cached->end());
        continue;
      }
    }

    // Cells for every epoch mark of this group, in mark order.
    std::vector<int> marks = group.epoch_marks;
    std::vector<std::vector<EvalReport>> mark_cells;
    for (const int epochs : marks) {
      HyperPoint hyper = group.base;
      hyper.epochs = epochs;
      mark_cells.push_back(make_cells(hyper, opt));
    }

    try {
      for (std::size_t f = 0; f < split.folds.size(); ++f) {
        const Fold& fold = split.folds[f];
        const std::uint64_t seed = opt.train_seed + f;

        std::vector<EmbeddingPair> snapshots;
        switch (opt.learner) {
          case LearnerKind::kAls: {
            AlsConfig cfg;
            cfg.epochs = *std::max_element(marks.begin(), marks.end());
            cfg.regularization = group.base.regularization;
            cfg.dim = group.base.dim;
            cfg.confidence_scale = opt.als.confidence_scale;
            cfg.seed = seed;
            snapshots = train_als_snapshots(fold.train, cfg, marks);
            break;
          }
          case LearnerKind::kBpr: {
            BprConfig cfg;
            cfg.epochs = *std::max_element(marks.begin(), marks.end());
            cfg.learning_rate = group.base.learning_rate;
            cfg.regularization = group.base.regularization;
            cfg.dim = group.base.dim;
            cfg.seed = seed;
            snapshots = train_bpr_snapshots(fold.train, cfg, marks);
            break;
          }
          case LearnerKind::kExternal: {
            snapshots.push_back(import_embeddings(opt.external_embeddings,
                                                  fold.train.user_map(),
                                                  fold.train.item_map()));
            break;
          }
        }

        for (std::size_t k = 0; k < marks.size(); ++k) {
          evaluate_mark_on_fold(snapshots[k], fold, test_by_user[f],
                                evaluable_users[f], opt, mark_cells[k]);
        }
      }
    } catch (const std::exception& e) {
      for (auto& cells : mark_cells) {
        for (auto& cell : cells) {
          cell.error = e.what();
        }
      }
      if (log != nullptr) {
        *log << "group " << group.key() << ": failed: " << e.what()
             << std::endl;
      }
    }

    std::vector<EvalReport> group_cells;
    for (auto& cells : mark_cells) {
      finalize_cells(cells, static_cast<int>(split.folds.size()), opt.n_max);
      group_cells.insert(group_cells.end(),
                         std::make_move_iterator(cells.begin()),
                         std::make_move_iterator(cells.end()));
    }
    if (cache != nullptr && !group_cells.empty() &&
        !group_cells.front().failed()) {
      cache->store(group.key(), group_cells);  // failed groups retry on resume
    }
    if (log != nullptr && !group_cells.empty() && !group_cells.front().failed()) {
      *log << "group " << group.key() << ": done" << std::endl;
    }
    result.cells.insert(result.cells.end(),
                        std::make_move_iterator(group_cells.begin()),
                        std::make_move_iterator(group_cells.end()));
  }

  // Argmax selections. Ties go to the earliest cell in enumeration order.
  const int cutoff = opt.tuning_cutoff;
  auto best = [&](auto&& want) {
    std::size_t index = ModeSelection::kNone;
    double score = -1.0;
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
      const EvalReport& cell = result.cells[c];
      if (cell.failed() || !want(cell)) {
        continue;
      }
      const double s = cell.mean_ndcg_at(cutoff);
      if (s > score) {
        score = s;
        index = c;
      }
    }
    return index;
  };

  const std::size_t best_ui = best([](const EvalReport& c) {
    return c.recommender == RecommenderKind::kUserItem;
  });
  if (best_ui == ModeSelection::kNone) {
    throw TrainingError("every grid cell failed; nothing to select");
  }
  const HyperPoint reuse_hyper = result.cells[best_ui].hyper;

  result.reuse.user_item = best_ui;
  result.reuse.item_item = best([&](const EvalReport& c) {
    return c.recommender == RecommenderKind::kItemItem &&
           c.hyper == reuse_hyper;
  });
  result.reuse.weighted = best([&](const EvalReport& c) {
    return c.recommender == RecommenderKind::kWeighted &&
           c.hyper == reuse_hyper;
  });

  result.fine_tune.user_item = best_ui;
  result.fine_tune.item_item = best([](const EvalReport& c) {
    return c.recommender == RecommenderKind::kItemItem;
  });
  result.fine_tune.weighted = best([](const EvalReport& c) {
    return c.recommender == RecommenderKind::kWeighted;
  });

  auto improvement = [&](std::size_t reuse_cell, std::size_t tuned_cell) {
    if (reuse_cell == ModeSelection::kNone ||
        tuned_cell == ModeSelection::kNone) {
      return 0.0;
    }
    const double base = result.cells[reuse_cell].mean_ndcg_at(cutoff);
    const double tuned = result.cells[tuned_cell].mean_ndcg_at(cutoff);
    return base == 0.0 ? 0.0 : (tuned - base) / base;
  };
  result.item_item_improvement =
      improvement(result.reuse.item_item, result.fine_tune.item_item);
  result.weighted_improvement =
      improvement(result.reuse.weighted, result.fine_tune.weighted);

  return result;
}

}  // namespace wsrec
