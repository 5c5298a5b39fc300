#include "wsrec/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "wsrec/errors.hpp"

namespace wsrec {

namespace {

std::vector<std::string_view> split(std::string_view line,
                                    std::string_view delimiter) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(delimiter, pos);
    if (next == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + delimiter.size();
  }
  return fields;
}

std::optional<double> parse_double(std::string_view s) {
  double value = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t value = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    return std::nullopt;
  }
  return value;
}

int max_mapped_column(const ColumnMapping& c) {
  return std::max({c.user, c.item, c.rating, c.type, c.timestamp});
}

}  // namespace

void DatasetSpec::validate() const {
  if (delimiter.empty()) {
    throw UsageError("dataset spec '" + name + "': empty delimiter");
  }
  if (columns.user < 0 || columns.item < 0) {
    throw UsageError("dataset spec '" + name +
                     "': user and item columns are required");
  }
  if (feedback == FeedbackKind::kExplicit && columns.rating < 0) {
    throw UsageError("dataset spec '" + name +
                     "': explicit feedback needs a rating column");
  }
  if (feedback == FeedbackKind::kMultiLevel) {
    if (columns.type < 0) {
      throw UsageError("dataset spec '" + name +
                       "': multi-level feedback needs a type column");
    }
    if (selected_level.empty()) {
      throw UsageError("dataset spec '" + name +
                       "': multi-level feedback needs a selected level");
    }
  }
}

ParseResult parse_dataset(const DatasetSpec& spec) {
  spec.validate();
  std::ifstream in(spec.path);
  if (!in) {
    throw DataError("cannot open dataset file: " + spec.path.string());
  }

  ParseResult result;
  const int last_column = max_mapped_column(spec.columns);
  std::string line;
  bool first = true;
  std::size_t data_rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (first && spec.has_header) {
      first = false;
      continue;
    }
    first = false;
    if (line.empty()) {
      continue;
    }
    ++data_rows;

    const auto fields = split(line, spec.delimiter);
    if (static_cast<int>(fields.size()) <= last_column) {
      ++result.rejected_rows;
      continue;
    }

    RawRecord record;
    record.user_id = std::string(fields[spec.columns.user]);
    record.item_id = std::string(fields[spec.columns.item]);
    if (record.user_id.empty() || record.item_id.empty()) {
      ++result.rejected_rows;
      continue;
    }
    if (spec.columns.rating >= 0) {
      const auto rating = parse_double(fields[spec.columns.rating]);
      if (!rating) {
        ++result.rejected_rows;
        continue;
      }
      record.rating = rating;
    }
    if (spec.columns.type >= 0) {
      record.interaction_type = std::string(fields[spec.columns.type]);
    }
    if (spec.columns.timestamp >= 0) {
      // Parsed for completeness; the random fold split never reads it.
      record.timestamp = parse_int(fields[spec.columns.timestamp]);
    }
    result.records.push_back(std::move(record));
  }

  if (data_rows == 0) {
    throw DataError("dataset file is empty: " + spec.path.string());
  }
  if (result.records.empty()) {
    throw DataError("no parseable rows in: " + spec.path.string());
  }
  return result;
}

double intermediary_rating(const std::vector<double>& ratings) {
  if (ratings.empty()) {
    throw DataError("intermediary rating is undefined for an empty list");
  }
  const auto [lo, hi] = std::minmax_element(ratings.begin(), ratings.end());
  return *lo + (*hi - *lo) / 2.0;
}

std::vector<InteractionRecord> preprocess(
    const std::vector<RawRecord>& records, const DatasetSpec& spec) {
  spec.validate();

  // Threshold over every parsed rating, before any filtering.
  std::optional<double> threshold;
  if (spec.feedback == FeedbackKind::kExplicit) {
    std::vector<double> all_ratings;
    all_ratings.reserve(records.size());
    for (const auto& r : records) {
      if (r.rating) {
        all_ratings.push_back(*r.rating);
      }
    }
    threshold = intermediary_rating(all_ratings);
  }

  // Group ratings per pair. A record without a rating is kept as its own
  // "rating" state so a rated/unrated mix still counts as inconsistent.
  struct PairState {
    std::vector<double> ratings;
    bool unrated = false;
  };
  std::map<InteractionRecord, PairState> pairs;
  for (const auto& r : records) {
    if (spec.feedback == FeedbackKind::kMultiLevel &&
        r.interaction_type != spec.selected_level) {
      continue;
    }
    auto& state = pairs[{r.user_id, r.item_id}];
    if (r.rating) {
      state.ratings.push_back(*r.rating);
    } else {
      state.unrated = true;
    }
  }

  std::vector<InteractionRecord> out;
  out.reserve(pairs.size());
  for (const auto& [pair, state] : pairs) {
    std::vector<double> distinct = state.ratings;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    const std::size_t states = distinct.size() + (state.unrated ? 1 : 0);
    if (states > 1) {
      continue;  // inconsistent pair: excluded entirely
    }
    if (threshold && (distinct.empty() || distinct.front() <= *threshold)) {
      continue;  // not strictly above the intermediary rating
    }
    out.push_back(pair);
  }

  if (out.empty()) {
    throw DataError("preprocessing left no interactions for dataset '" +
                    spec.name + "'");
  }
  return out;  // std::map iteration: sorted by (user_id, item_id)
}

const std::vector<DatasetSpec>& builtin_dataset_specs() {
  static const std::vector<DatasetSpec> specs = [] {
    std::vector<DatasetSpec> v;

    DatasetSpec anime;
    anime.name = "anime";
    anime.columns = {.user = 0, .item = 1, .rating = 2};
    anime.delimiter = ",";
    anime.has_header = true;
    anime.feedback = FeedbackKind::kExplicit;
    v.push_back(anime);

    DatasetSpec bestbuy;
    bestbuy.name = "bestbuy";
    bestbuy.columns = {.user = 0, .item = 1, .timestamp = 3};
    bestbuy.delimiter = ",";
    bestbuy.has_header = true;
    bestbuy.feedback = FeedbackKind::kImplicit;
    v.push_back(bestbuy);

    DatasetSpec ciaodvd;
    ciaodvd.name = "ciaodvd";
    ciaodvd.columns = {.user = 0, .item = 1, .rating = 4};
    ciaodvd.delimiter = ",";
    ciaodvd.has_header = false;
    ciaodvd.feedback = FeedbackKind::kExplicit;
    v.push_back(ciaodvd);

    DatasetSpec delicious;
    delicious.name = "delicious";
    delicious.columns = {.user = 0, .item = 1};
    delicious.delimiter = "\t";
    delicious.has_header = true;
    delicious.feedback = FeedbackKind::kImplicit;
    v.push_back(delicious);

    DatasetSpec filmtrust;
    filmtrust.name = "filmtrust";
    filmtrust.columns = {.user = 0, .item = 1, .rating = 2};
    filmtrust.delimiter = " ";
    filmtrust.has_header = false;
    filmtrust.feedback = FeedbackKind::kExplicit;
    v.push_back(filmtrust);

    DatasetSpec jester;
    jester.name = "jester";
    jester.columns = {.user = 0, .item = 1, .rating = 2};
    jester.delimiter = ",";
    jester.has_header = false;
    jester.feedback = FeedbackKind::kExplicit;
    v.push_back(jester);

    DatasetSpec lastfm;
    lastfm.name = "lastfm";
    lastfm.columns = {.user = 0, .item = 1};
    lastfm.delimiter = "\t";
    lastfm.has_header = true;
    lastfm.feedback = FeedbackKind::kImplicit;
    v.push_back(lastfm);

    DatasetSpec movielens;
    movielens.name = "movielens-1m";
    movielens.columns = {.user = 0, .item = 1, .rating = 2, .timestamp = 3};
    movielens.delimiter = "::";
    movielens.has_header = false;
    movielens.feedback = FeedbackKind::kExplicit;
    v.push_back(movielens);

    DatasetSpec retailrocket;
    retailrocket.name = "retailrocket";
    retailrocket.columns = {.user = 1, .item = 3, .type = 2, .timestamp = 0};
    retailrocket.delimiter = ",";
    retailrocket.has_header = true;
    retailrocket.feedback = FeedbackKind::kMultiLevel;
    retailrocket.selected_level = "transaction";
    v.push_back(retailrocket);

    return v;
  }();
  return specs;
}

std::optional<DatasetSpec> find_builtin_spec(std::string_view name) {
  for (const auto& spec : builtin_dataset_specs()) {
    if (spec.name == name) {
      return spec;
    }
  }
  return std::nullopt;
}

void write_canonical(std::ostream& out, const InteractionMatrix& m) {
  for (std::size_t u = 0; u < m.user_count(); ++u) {
    const auto& user_id = m.user_map().id(u);
    for (const std::uint32_t i : m.items_of(u)) {
      out << user_id << '\t' << m.item_map().id(i) << '\n';
    }
  }
}

void write_canonical(const std::filesystem::path& path,
                     const InteractionMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write canonical file: " + path.string());
  }
  write_canonical(out, m);
  if (!out.flush()) {
    throw DataError("failed writing canonical file: " + path.string());
  }
}

InteractionMatrix read_canonical(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open interactions file: " + path.string());
  }
  std::vector<InteractionRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw DataError("malformed interactions line: " + line);
    }
    records.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  if (records.empty()) {
    throw DataError("interactions file is empty: " + path.string());
  }
  return InteractionMatrix::from_records(records);
}

}  // namespace wsrec
