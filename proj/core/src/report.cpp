#include "wsrec/report.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wsrec/errors.hpp"

namespace wsrec {

namespace {

using nlohmann::json;

json hyper_to_json(const HyperPoint& h) {
  return json{{"learner", to_string(h.learner)},
              {"epochs", h.epochs},
              {"dim", h.dim},
              {"regularization", h.regularization},
              {"learning_rate", h.learning_rate}};
}

HyperPoint hyper_from_json(const json& j) {
  HyperPoint h;
  h.learner = learner_from_string(j.at("learner").get<std::string>());
  h.epochs = j.at("epochs").get<int>();
  h.dim = j.at("dim").get<int>();
  h.regularization = j.at("regularization").get<double>();
  h.learning_rate = j.at("learning_rate").get<double>();
  return h;
}

json curve_to_json(const std::vector<CurvePoint>& curve) {
  json arr = json::array();
  for (const auto& point : curve) {
    arr.push_back(json{{"hr", point.hr}, {"ndcg", point.ndcg}});
  }
  return arr;
}

std::vector<CurvePoint> curve_from_json(const json& arr) {
  std::vector<CurvePoint> curve;
  curve.reserve(arr.size());
  for (const auto& point : arr) {
    curve.push_back(
        {point.at("hr").get<double>(), point.at("ndcg").get<double>()});
  }
  return curve;
}

RecommenderKind recommender_from_string(const std::string& name) {
  if (name == "user_item") return RecommenderKind::kUserItem;
  if (name == "item_item") return RecommenderKind::kItemItem;
  if (name == "weighted") return RecommenderKind::kWeighted;
  throw DataError("unknown recommender kind: " + name);
}

json cell_to_json(const EvalReport& cell) {
  json j{{"recommender", to_string(cell.recommender)},
         {"hyper", hyper_to_json(cell.hyper)},
         {"metric", to_string(cell.metric)},
         {"weight_user_item", cell.weight_user_item},
         {"weight_item_item", cell.weight_item_item}};
  if (cell.failed()) {
    j["error"] = cell.error;
  } else {
    json folds = json::array();
    for (const auto& curve : cell.per_fold) {
      folds.push_back(curve_to_json(curve));
    }
    j["per_fold"] = std::move(folds);
    j["mean"] = curve_to_json(cell.mean);
  }
  return j;
}

EvalReport cell_from_json(const json& j) {
  EvalReport cell;
  cell.recommender =
      recommender_from_string(j.at("recommender").get<std::string>());
  cell.hyper = hyper_from_json(j.at("hyper"));
  cell.metric = similarity_from_string(j.at("metric").get<std::string>());
  cell.weight_user_item = j.at("weight_user_item").get<double>();
  cell.weight_item_item = j.at("weight_item_item").get<double>();
  if (j.contains("error")) {
    cell.error = j.at("error").get<std::string>();
    return cell;
  }
  for (const auto& curve : j.at("per_fold")) {
    cell.per_fold.push_back(curve_from_json(curve));
  }
  cell.mean = curve_from_json(j.at("mean"));
  return cell;
}

}  // namespace

std::string serialize_cells(const std::vector<EvalReport>& cells) {
  json arr = json::array();
  for (const auto& cell : cells) {
    arr.push_back(cell_to_json(cell));
  }
  return arr.dump(1);
}

std::vector<EvalReport> deserialize_cells(const std::string& json_text) {
  const json arr = json::parse(json_text);
  std::vector<EvalReport> cells;
  cells.reserve(arr.size());
  for (const auto& j : arr) {
    cells.push_back(cell_from_json(j));
  }
  return cells;
}

void write_results_table_csv(const std::filesystem::path& path,
                             const std::string& dataset,
                             const GridSearchResult& result, TuningMode mode,
                             int cutoff) {
  const auto& sel = result.selection(mode);
  const auto cell_at = [&](std::size_t index) -> const EvalReport* {
    return index == ModeSelection::kNone ? nullptr : &result.cells[index];
  };
  const EvalReport* ui = cell_at(sel.user_item);
  const EvalReport* ii = cell_at(sel.item_item);
  const EvalReport* w = cell_at(sel.weighted);

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write results table: " + path.string());
  }
  out << "dataset,user_item_hr" << cutoff << ",item_item_hr" << cutoff
      << ",weighted_hr" << cutoff << ",user_item_ndcg" << cutoff
      << ",item_item_ndcg" << cutoff << ",weighted_ndcg" << cutoff << '\n';
  auto hr = [&](const EvalReport* cell) {
    return cell == nullptr ? 0.0 : cell->mean_hr_at(cutoff);
  };
  auto nd = [&](const EvalReport* cell) {
    return cell == nullptr ? 0.0 : cell->mean_ndcg_at(cutoff);
  };
  out << dataset << ',' << hr(ui) << ',' << hr(ii) << ',' << hr(w) << ','
      << nd(ui) << ',' << nd(ii) << ',' << nd(w) << '\n';
}

void write_curves_csv(const std::filesystem::path& path,
                      const std::string& dataset, const std::string& learner,
                      const GridSearchResult& result, TuningMode mode) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write curves file: " + path.string());
  }
  out << "dataset,learner,recommender,n,ndcg,hr\n";
  const auto& sel = result.selection(mode);
  const std::size_t cells[] = {sel.user_item, sel.item_item, sel.weighted};
  for (const std::size_t index : cells) {
    if (index == ModeSelection::kNone) {
      continue;
    }
    const EvalReport& cell = result.cells[index];
    for (std::size_t n = 0; n < cell.mean.size(); ++n) {
      out << dataset << ',' << learner << ',' << to_string(cell.recommender)
          << ',' << (n + 1) << ',' << cell.mean[n].ndcg << ','
          << cell.mean[n].hr << '\n';
    }
  }
}

ScoreTable read_score_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open score table: " + path.string());
  }
  ScoreTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("score table is empty: " + path.string());
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  std::stringstream header(line);
  std::string field;
  bool first = true;
  while (std::getline(header, field, ',')) {
    if (first) {
      first = false;  // corner label
      continue;
    }
    table.models.push_back(field);
  }
  if (table.models.size() < 2) {
    throw DataError("score table needs at least two model columns");
  }

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::stringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) {
      throw DataError("malformed score table row: " + line);
    }
    table.datasets.push_back(cell);
    std::vector<double> scores;
    while (std::getline(row, cell, ',')) {
      try {
        scores.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw DataError("non-numeric score table cell: " + cell);
      }
    }
    if (scores.size() != table.models.size()) {
      throw DataError("score table row has " + std::to_string(scores.size()) +
                      " cells, expected " +
                      std::to_string(table.models.size()) + ": " + line);
    }
    table.scores.push_back(std::move(scores));
  }
  if (table.datasets.size() < 2) {
    throw DataError("score table needs at least two dataset rows");
  }
  return table;
}

}  // namespace wsrec
