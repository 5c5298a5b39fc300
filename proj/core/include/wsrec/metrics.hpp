#pragma once

#include <cstdint>
#include <vector>

#include "wsrec/recommend.hpp"

namespace wsrec {

/// HR and NDCG at one cutoff.
struct CurvePoint {
  double hr = 0.0;
  double ndcg = 0.0;
};

/// HR@n and NDCG@n for every n in 1..n_max in one pass. Users with an empty
/// test list are not evaluable and are ignored; throws DataError when no
/// user is evaluable.
///
/// HR@n is the fraction of evaluable users with at least one test item in
/// their top-n. NDCG@n divides the summed discounted gain of hits by the
/// summed ideal gain; with `cap_idcg_at_n` the per-user ideal covers
/// min(|test_u|, n) positions, otherwise all |test_u| positions.
std::vector<CurvePoint> metric_curve(
    const std::vector<RecommendationList>& recs,
    const std::vector<std::vector<std::uint32_t>>& test_items_per_user,
    int n_max, bool cap_idcg_at_n = true);

/// How the HR numerator counts hits. The per-user indicator (default) keeps
/// HR within [0,1]; the total-items reading counts every recommended test
/// item and can exceed 1 for users with several hits.
enum class HitCounting { kUsersWithHit, kTotalHitItems };

double hit_rate(const std::vector<RecommendationList>& recs,
                const std::vector<std::vector<std::uint32_t>>& test_items_per_user,
                int n, HitCounting counting = HitCounting::kUsersWithHit);

double ndcg(const std::vector<RecommendationList>& recs,
            const std::vector<std::vector<std::uint32_t>>& test_items_per_user,
            int n, bool cap_idcg_at_n = true);

}  // namespace wsrec
