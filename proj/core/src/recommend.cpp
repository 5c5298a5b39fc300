#include "wsrec/recommend.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "wsrec/errors.hpp"

namespace wsrec {

std::string to_string(Similarity metric) {
  return metric == Similarity::kDot ? "dot" : "cosine";
}

Similarity similarity_from_string(std::string_view name) {
  if (name == "dot") {
    return Similarity::kDot;
  }
  if (name == "cosine") {
    return Similarity::kCosine;
  }
  throw UsageError("unknown similarity metric: " + std::string(name));
}

void WeightConfig::validate() const {
  if (user_item < 0.0 || item_item < 0.0 || user_item + item_item <= 0.0) {
    throw UsageError(
        "weights must be non-negative with a positive sum");
  }
}

namespace {

double cosine(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  const double norms = a.norm() * b.norm();
  return norms == 0.0 ? 0.0 : a.dot(b) / norms;
}

/// Row-normalizes a copy of `m`; zero rows stay zero.
DenseMatrix normalized_rows(const DenseMatrix& m) {
  DenseMatrix out = m;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double norm = out.row(r).norm();
    if (norm != 0.0) {
      out.row(r) /= norm;
    }
  }
  return out;
}

}  // namespace

double user_item_score(const EmbeddingPair& e, std::size_t user,
                       std::uint32_t item, Similarity metric) {
  const Eigen::RowVectorXd p = e.users.row(static_cast<Eigen::Index>(user));
  const Eigen::RowVectorXd q = e.items.row(item);
  return metric == Similarity::kDot ? p.dot(q) : cosine(p, q);
}

double item_item_score(const EmbeddingPair& e,
                       std::span<const std::uint32_t> history,
                       std::uint32_t item, Similarity metric) {
  if (history.empty()) {
    return 0.0;
  }
  const Eigen::RowVectorXd q = e.items.row(item);
  double sum = 0.0;
  for (const std::uint32_t j : history) {
    const Eigen::RowVectorXd qj = e.items.row(j);
    sum += metric == Similarity::kDot ? q.dot(qj) : cosine(q, qj);
  }
  return sum / static_cast<double>(history.size());
}

double weighted_score(double user_item, double item_item,
                      const WeightConfig& w) {
  w.validate();
  return (w.user_item * user_item + w.item_item * item_item) /
         (w.user_item + w.item_item);
}

namespace detail {

Scorer::Scorer(const EmbeddingPair& e, const InteractionMatrix& m,
               Similarity metric) {
  if (static_cast<std::size_t>(e.users.rows()) != m.user_count() ||
      static_cast<std::size_t>(e.items.rows()) != m.item_count()) {
    throw DataError(
        "embedding row counts do not match the interaction matrix id maps");
  }
  if (metric == Similarity::kCosine) {
    users_ = normalized_rows(e.users);
    items_ = normalized_rows(e.items);
  } else {
    users_ = e.users;
    items_ = e.items;
  }

  centroids_.setZero(users_.rows(), items_.cols());
  for (std::size_t u = 0; u < m.user_count(); ++u) {
    const auto history = m.items_of(u);
    if (history.empty()) {
      continue;  // empty history scores 0 everywhere
    }
    auto row = centroids_.row(static_cast<Eigen::Index>(u));
    for (const std::uint32_t j : history) {
      row += items_.row(j);
    }
    row /= static_cast<double>(history.size());
  }
}

void Scorer::score_chunk(std::span<const std::size_t> users,
                         Eigen::MatrixXd& user_item,
                         Eigen::MatrixXd& item_item) const {
  const Eigen::Index d = items_.cols();
  const Eigen::Index chunk = static_cast<Eigen::Index>(users.size());
  DenseMatrix p(chunk, d);
  DenseMatrix c(chunk, d);
  for (Eigen::Index k = 0; k < chunk; ++k) {
    const Eigen::Index u =
        static_cast<Eigen::Index>(users[static_cast<std::size_t>(k)]);
    p.row(k) = users_.row(u);
    c.row(k) = centroids_.row(u);
  }
  user_item.noalias() = items_ * p.transpose();
  item_item.noalias() = items_ * c.transpose();
}

RecommendationList select_top_n(std::size_t user, const Eigen::VectorXd& z,
                                std::span<const std::uint32_t> consumed,
                                int n) {
  RecommendationList list;
  list.user = user;

  std::vector<std::uint32_t> candidates;
  candidates.reserve(static_cast<std::size_t>(z.size()) - consumed.size());
  for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(z.size()); ++i) {
    if (!std::binary_search(consumed.begin(), consumed.end(), i)) {
      candidates.push_back(i);
    }
  }

  const std::size_t take =
      std::min<std::size_t>(static_cast<std::size_t>(n), candidates.size());
  const auto better = [&z](std::uint32_t a, std::uint32_t b) {
    if (z[a] != z[b]) {
      return z[a] > z[b];
    }
    return a < b;
  };
  std::partial_sort(candidates.begin(),
                    candidates.begin() + static_cast<std::ptrdiff_t>(take),
                    candidates.end(), better);
  candidates.resize(take);

  list.items = std::move(candidates);
  list.scores.reserve(take);
  for (const std::uint32_t i : list.items) {
    list.scores.push_back(z[i]);
  }
  return list;
}

}  // namespace detail

std::vector<RecommendationList> top_n(const EmbeddingPair& e,
                                      const InteractionMatrix& m,
                                      const WeightConfig& w, int n,
                                      std::span<const std::size_t> users) {
  w.validate();
  if (n < 1) {
    throw UsageError("top_n needs n >= 1");
  }

  std::vector<std::size_t> all_users;
  if (users.empty()) {
    all_users.resize(m.user_count());
    std::iota(all_users.begin(), all_users.end(), 0);
    users = all_users;
  }

  const detail::Scorer scorer(e, m, w.metric);

  std::vector<RecommendationList> lists(users.size());
  const std::int64_t chunk_count = static_cast<std::int64_t>(
      (users.size() + detail::kScoreChunk - 1) / detail::kScoreChunk);
#pragma omp parallel
  {
    Eigen::MatrixXd r;
    Eigen::MatrixXd s;
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t chunk = 0; chunk < chunk_count; ++chunk) {
      const std::size_t begin =
          static_cast<std::size_t>(chunk) * detail::kScoreChunk;
      const std::size_t end =
          std::min(begin + detail::kScoreChunk, users.size());
      scorer.score_chunk(users.subspan(begin, end - begin), r, s);
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t u = users[k];
        const Eigen::VectorXd z =
            detail::blend(r, s, static_cast<Eigen::Index>(k - begin),
                          w.user_item, w.item_item);
        lists[k] = detail::select_top_n(u, z, m.items_of(u), n);
      }
    }
  }
  return lists;
}

void write_recommendations(std::ostream& out,
                           const std::vector<RecommendationList>& lists,
                           const InteractionMatrix& m) {
  char buffer[32];
  for (const auto& list : lists) {
    out << m.user_map().id(list.user) << '\t';
    for (std::size_t k = 0; k < list.items.size(); ++k) {
      if (k > 0) {
        out << ',';
      }
      std::snprintf(buffer, sizeof(buffer), "%.6f", list.scores[k]);
      out << m.item_map().id(list.items[k]) << ':' << buffer;
    }
    out << '\n';
  }
}

}  // namespace wsrec
