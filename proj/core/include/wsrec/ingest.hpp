#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wsrec/interaction_matrix.hpp"

namespace wsrec {

enum class FeedbackKind { kExplicit, kImplicit, kMultiLevel };

/// One parsed data row before preprocessing.
struct RawRecord {
  std::string user_id;
  std::string item_id;
  std::optional<double> rating;
  std::optional<std::string> interaction_type;
  std::optional<std::int64_t> timestamp;
};

/// Zero-based field positions inside a delimited row; -1 means absent.
struct ColumnMapping {
  int user = 0;
  int item = 1;
  int rating = -1;
  int type = -1;
  int timestamp = -1;
};

/// How to read one raw dataset file.
struct DatasetSpec {
  std::string name;
  std::filesystem::path path;
  ColumnMapping columns;
  std::string delimiter = ",";
  bool has_header = false;
  FeedbackKind feedback = FeedbackKind::kImplicit;
  std::string selected_level;  // required when feedback == kMultiLevel

  /// Throws UsageError on inconsistent settings (e.g. multi-level without a
  /// selected level, explicit feedback without a rating column).
  void validate() const;
};

struct ParseResult {
  std::vector<RawRecord> records;
  std::size_t rejected_rows = 0;  // rows that failed type coercion
};

/// Reads and type-coerces the file described by `spec`. Unparseable rows are
/// counted in `rejected_rows`, not silently dropped. Throws DataError when
/// the file is missing, a mapped column never materializes, or no row parses.
ParseResult parse_dataset(const DatasetSpec& spec);

/// min(R) + (max(R) - min(R)) / 2 over the given ratings.
/// Throws DataError on an empty list.
double intermediary_rating(const std::vector<double>& ratings);

/// Applies the preprocessing pipeline, in order:
///   1. keep only `selected_level` rows for multi-level feedback;
///   2. drop every occurrence of a (user, item) pair observed with two or
///      more distinct ratings;
///   3. collapse exact duplicates to one occurrence;
///   4. for explicit feedback, keep only ratings strictly greater than the
///      intermediary rating of all parsed ratings (computed pre-filtering).
/// The result is sorted by (user_id, item_id) so it does not depend on input
/// row order. Throws DataError when nothing survives.
std::vector<InteractionRecord> preprocess(const std::vector<RawRecord>& records,
                                          const DatasetSpec& spec);

/// Built-in column mappings for the nine dataset sources this project is
/// usually run against. Paths are left empty for the caller to fill in.
const std::vector<DatasetSpec>& builtin_dataset_specs();
std::optional<DatasetSpec> find_builtin_spec(std::string_view name);

/// Canonical interactions file: one "user_id<TAB>item_id" line per
/// interaction, UTF-8, in matrix row order (user first appearance, then item
/// index).
void write_canonical(std::ostream& out, const InteractionMatrix& m);
void write_canonical(const std::filesystem::path& path,
                     const InteractionMatrix& m);
InteractionMatrix read_canonical(const std::filesystem::path& path);

}  // namespace wsrec
