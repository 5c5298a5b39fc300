#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "wsrec/errors.hpp"
#include "wsrec/ingest.hpp"

namespace wsrec {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("wsrec_ingest_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  fs::path file(const std::string& name, const std::string& content) const {
    const fs::path p = path_ / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

RawRecord rec(std::string user, std::string item, double rating) {
  RawRecord r;
  r.user_id = std::move(user);
  r.item_id = std::move(item);
  r.rating = rating;
  return r;
}

DatasetSpec explicit_spec() {
  DatasetSpec spec;
  spec.name = "test";
  spec.columns = {.user = 0, .item = 1, .rating = 2};
  spec.feedback = FeedbackKind::kExplicit;
  return spec;
}

TEST(ParseDataset, HeaderAndRows) {
  TempDir dir;
  DatasetSpec spec = explicit_spec();
  spec.has_header = true;
  spec.path = dir.file("d.csv", "u,i,r\nu1,i1,5\nu2,i2,3\n");
  const auto result = parse_dataset(spec);
  ASSERT_EQ(result.records.size(), 2u);
  EXPECT_EQ(result.rejected_rows, 0u);
  EXPECT_EQ(result.records[0].user_id, "u1");
  EXPECT_EQ(result.records[0].item_id, "i1");
  EXPECT_DOUBLE_EQ(*result.records[0].rating, 5.0);
}

TEST(ParseDataset, CountsRejectedRows) {
  TempDir dir;
  std::ostringstream content;
  for (int k = 0; k < 9; ++k) {
    content << "u" << k << ",i" << k << "," << (k % 5) + 1 << "\n";
  }
  content << "u9,i9,not_a_number\n";
  DatasetSpec spec = explicit_spec();
  spec.path = dir.file("d.csv", content.str());
  const auto result = parse_dataset(spec);
  EXPECT_EQ(result.records.size(), 9u);
  EXPECT_EQ(result.rejected_rows, 1u);
}

TEST(ParseDataset, MissingFileAndEmptyFile) {
  TempDir dir;
  DatasetSpec spec = explicit_spec();
  spec.path = dir.path() / "nope.csv";
  EXPECT_THROW(parse_dataset(spec), DataError);

  spec.path = dir.file("empty.csv", "");
  EXPECT_THROW(parse_dataset(spec), DataError);
}

TEST(ParseDataset, ZeroParseableRows) {
  TempDir dir;
  DatasetSpec spec = explicit_spec();
  spec.path = dir.file("bad.csv", "u1;i1;5\nu2;i2;4\n");  // wrong delimiter
  EXPECT_THROW(parse_dataset(spec), DataError);
}

TEST(ParseDataset, MultiCharacterDelimiter) {
  TempDir dir;
  DatasetSpec spec = explicit_spec();
  spec.delimiter = "::";
  spec.path = dir.file("ml.dat", "1::10::5::978300760\n1::20::3::978302109\n");
  spec.columns.timestamp = 3;
  const auto result = parse_dataset(spec);
  ASSERT_EQ(result.records.size(), 2u);
  EXPECT_EQ(result.records[0].item_id, "10");
  EXPECT_EQ(*result.records[0].timestamp, 978300760);
}

TEST(ParseDataset, MultiLevelSpecNeedsLevel) {
  DatasetSpec spec;
  spec.name = "bad";
  spec.feedback = FeedbackKind::kMultiLevel;
  spec.columns = {.user = 0, .item = 1, .type = 2};
  EXPECT_THROW(spec.validate(), UsageError);
  spec.selected_level = "buy";
  EXPECT_NO_THROW(spec.validate());
}

TEST(IntermediaryRating, KnownRanges) {
  EXPECT_DOUBLE_EQ(intermediary_rating({1, 2, 5, 3}), 3.0);
  EXPECT_DOUBLE_EQ(intermediary_rating({0.5, 4.0, 2.0}), 2.25);
  EXPECT_DOUBLE_EQ(intermediary_rating({4, 4, 4}), 4.0);
  EXPECT_THROW(intermediary_rating({}), DataError);
}

TEST(Preprocess, CollapsesDuplicatesAboveThreshold) {
  // Ratings span [1, 5] so the threshold is 3; the duplicated 5 survives
  // once and the low-rated pair is dropped.
  const auto pairs = preprocess(
      {rec("u", "i", 5), rec("u", "i", 5), rec("v", "j", 1)}, explicit_spec());
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0], (InteractionRecord{"u", "i"}));
}

TEST(Preprocess, ExcludesInconsistentPairs) {
  EXPECT_THROW(preprocess({rec("u", "i", 5), rec("u", "i", 2)},
                          explicit_spec()),
               DataError);  // nothing survives

  const auto pairs =
      preprocess({rec("u", "i", 5), rec("u", "i", 2), rec("v", "j", 5),
                  rec("w", "k", 1)},
                 explicit_spec());
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0], (InteractionRecord{"v", "j"}));
}

TEST(Preprocess, StrictInequalityAtThreshold) {
  // A single rating makes the intermediary rating equal to it; "higher than"
  // is strict, so nothing survives.
  EXPECT_THROW(preprocess({rec("u", "i", 3)}, explicit_spec()), DataError);
  EXPECT_THROW(preprocess({rec("u", "i", 4), rec("v", "j", 4)},
                          explicit_spec()),
               DataError);
}

TEST(Preprocess, ThresholdUsesAllParsedRatings) {
  // The excluded inconsistent pair still anchors the rating range: the
  // threshold is 1 + (5-1)/2 = 3, so the 2.5 fails even though the surviving
  // ratings span [2.5, 4].
  const auto pairs = preprocess(
      {rec("a", "x", 5), rec("a", "x", 1), rec("b", "y", 4), rec("c", "z", 2.5)},
      explicit_spec());
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0], (InteractionRecord{"b", "y"}));
}

TEST(Preprocess, MultiLevelKeepsSelectedLevelOnly) {
  DatasetSpec spec;
  spec.name = "events";
  spec.columns = {.user = 0, .item = 1, .type = 2};
  spec.feedback = FeedbackKind::kMultiLevel;
  spec.selected_level = "buy";

  auto event = [](std::string u, std::string i, std::string type) {
    RawRecord r;
    r.user_id = std::move(u);
    r.item_id = std::move(i);
    r.interaction_type = std::move(type);
    return r;
  };
  const auto pairs = preprocess({event("u", "a", "view"), event("u", "b", "buy"),
                                 event("v", "a", "buy"), event("v", "a", "buy"),
                                 event("v", "b", "view")},
                                spec);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0], (InteractionRecord{"u", "b"}));
  EXPECT_EQ(pairs[1], (InteractionRecord{"v", "a"}));
}

TEST(Preprocess, OutputIndependentOfInputOrder) {
  std::mt19937_64 gen(23);
  std::vector<RawRecord> records;
  for (int k = 0; k < 200; ++k) {
    records.push_back(rec("u" + std::to_string(gen() % 25),
                          "i" + std::to_string(gen() % 25),
                          static_cast<double>(1 + gen() % 5)));
  }
  const auto spec = explicit_spec();
  const auto baseline = preprocess(records, spec);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(records.begin(), records.end(), gen);
    EXPECT_EQ(preprocess(records, spec), baseline);
  }
}

TEST(Preprocess, NoDuplicatesAndAllSurvivorsAboveThreshold) {
  std::mt19937_64 gen(29);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<RawRecord> records;
    std::vector<double> ratings;
    for (int k = 0; k < 150; ++k) {
      const double rating = static_cast<double>(1 + gen() % 9) / 2.0;
      ratings.push_back(rating);
      records.push_back(rec("u" + std::to_string(gen() % 12),
                            "i" + std::to_string(gen() % 12), rating));
    }
    const double threshold = intermediary_rating(ratings);
    std::vector<InteractionRecord> pairs;
    try {
      pairs = preprocess(records, explicit_spec());
    } catch (const DataError&) {
      continue;  // everything filtered out: acceptable outcome
    }
    std::set<InteractionRecord> unique(pairs.begin(), pairs.end());
    EXPECT_EQ(unique.size(), pairs.size());

    // Survivors must trace back to a consistent rating above the threshold.
    for (const auto& [user, item] : pairs) {
      std::set<double> seen;
      for (const auto& r : records) {
        if (r.user_id == user && r.item_id == item) {
          seen.insert(*r.rating);
        }
      }
      ASSERT_EQ(seen.size(), 1u);
      EXPECT_GT(*seen.begin(), threshold);
    }
  }
}

TEST(Canonical, WriteReadRoundTrip) {
  TempDir dir;
  const auto m = InteractionMatrix::from_records(
      {{"u1", "i1"}, {"u1", "i2"}, {"u2", "i1"}});
  const auto path = dir.path() / "c.tsv";
  write_canonical(path, m);

  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  EXPECT_EQ(content.str(), "u1\ti1\nu1\ti2\nu2\ti1\n");

  const auto back = read_canonical(path);
  EXPECT_EQ(back.to_records(), m.to_records());
}

TEST(Canonical, RejectsMalformedLines) {
  TempDir dir;
  EXPECT_THROW(read_canonical(dir.file("bad.tsv", "useritem\n")), DataError);
  EXPECT_THROW(read_canonical(dir.file("empty.tsv", "\n\n")), DataError);
}

TEST(BuiltinSpecs, CoverTheNineSources) {
  EXPECT_EQ(builtin_dataset_specs().size(), 9u);
  const auto filmtrust = find_builtin_spec("filmtrust");
  ASSERT_TRUE(filmtrust.has_value());
  EXPECT_EQ(filmtrust->delimiter, " ");
  EXPECT_EQ(filmtrust->feedback, FeedbackKind::kExplicit);
  const auto retail = find_builtin_spec("retailrocket");
  ASSERT_TRUE(retail.has_value());
  EXPECT_EQ(retail->feedback, FeedbackKind::kMultiLevel);
  EXPECT_EQ(retail->selected_level, "transaction");
  EXPECT_FALSE(find_builtin_spec("unknown").has_value());
}

}  // namespace
}  // namespace wsrec
