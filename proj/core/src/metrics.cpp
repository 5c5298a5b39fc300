#include "wsrec/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "wsrec/errors.hpp"

namespace wsrec {

std::vector<CurvePoint> metric_curve(
    const std::vector<RecommendationList>& recs,
    const std::vector<std::vector<std::uint32_t>>& test_items_per_user,
    int n_max, bool cap_idcg_at_n) {
  if (n_max < 1) {
    throw UsageError("metric cutoff must be at least 1");
  }
  const std::size_t cutoffs = static_cast<std::size_t>(n_max);

  // discount_prefix[n] = sum_{t=1..n} 1/log2(t+1)
  std::vector<double> discount_prefix(cutoffs + 1, 0.0);
  for (std::size_t t = 1; t <= cutoffs; ++t) {
    discount_prefix[t] =
        discount_prefix[t - 1] + 1.0 / std::log2(static_cast<double>(t) + 1.0);
  }
  auto discount_sum = [&](std::size_t n) {
    if (n <= cutoffs) {
      return discount_prefix[n];
    }
    double sum = discount_prefix[cutoffs];
    for (std::size_t t = cutoffs + 1; t <= n; ++t) {
      sum += 1.0 / std::log2(static_cast<double>(t) + 1.0);
    }
    return sum;
  };

  std::size_t evaluable_users = 0;
  std::vector<double> hit_users(cutoffs + 1, 0.0);
  std::vector<double> dcg(cutoffs + 1, 0.0);
  std::vector<double> idcg(cutoffs + 1, 0.0);

  for (const auto& rec : recs) {
    if (rec.user >= test_items_per_user.size()) {
      throw DataError("recommendation for a user outside the test grouping");
    }
    const auto& test = test_items_per_user[rec.user];
    if (test.empty()) {
      continue;
    }
    ++evaluable_users;

    const std::size_t list_len =
        std::min(rec.items.size(), cutoffs);
    double dcg_prefix = 0.0;
    bool hit_seen = false;
    for (std::size_t pos = 0; pos < cutoffs; ++pos) {
      if (pos < list_len &&
          std::binary_search(test.begin(), test.end(), rec.items[pos])) {
        dcg_prefix += 1.0 / std::log2(static_cast<double>(pos) + 2.0);
        hit_seen = true;
      }
      const std::size_t n = pos + 1;
      dcg[n] += dcg_prefix;
      hit_users[n] += hit_seen ? 1.0 : 0.0;
      idcg[n] += cap_idcg_at_n ? discount_prefix[std::min(test.size(), n)]
                               : discount_sum(test.size());
    }
  }

  if (evaluable_users == 0) {
    throw DataError("no evaluable users (every test list is empty)");
  }

  std::vector<CurvePoint> curve(cutoffs);
  for (std::size_t n = 1; n <= cutoffs; ++n) {
    curve[n - 1].hr = hit_users[n] / static_cast<double>(evaluable_users);
    curve[n - 1].ndcg = idcg[n] == 0.0 ? 0.0 : dcg[n] / idcg[n];
  }
  return curve;
}

double hit_rate(
    const std::vector<RecommendationList>& recs,
    const std::vector<std::vector<std::uint32_t>>& test_items_per_user,
    int n, HitCounting counting) {
  if (counting == HitCounting::kUsersWithHit) {
    return metric_curve(recs, test_items_per_user, n).back().hr;
  }

  std::size_t evaluable_users = 0;
  double hits = 0.0;
  for (const auto& rec : recs) {
    const auto& test = test_items_per_user.at(rec.user);
    if (test.empty()) {
      continue;
    }
    ++evaluable_users;
    const std::size_t len =
        std::min<std::size_t>(rec.items.size(), static_cast<std::size_t>(n));
    for (std::size_t pos = 0; pos < len; ++pos) {
      if (std::binary_search(test.begin(), test.end(), rec.items[pos])) {
        hits += 1.0;
      }
    }
  }
  if (evaluable_users == 0) {
    throw DataError("no evaluable users (every test list is empty)");
  }
  return hits / static_cast<double>(evaluable_users);
}

double ndcg(const std::vector<RecommendationList>& recs,
            const std::vector<std::vector<std::uint32_t>>& test_items_per_user,
            int n, bool cap_idcg_at_n) {
  return metric_curve(recs, test_items_per_user, n, cap_idcg_at_n).back().ndcg;
}

}  // namespace wsrec
