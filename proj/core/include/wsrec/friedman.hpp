#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace wsrec {

struct StatTestResult {
  double friedman_statistic = 0.0;  // X^2_r
  int model_count = 0;              // k
  int dataset_count = 0;            // n
  std::vector<double> average_ranks;  // rank 1 = best; sums to k(k+1)/2
  double nemenyi_cd = 0.0;
  double alpha = 0.10;
};

/// Friedman rank test over an n-datasets x k-models score matrix (higher
/// score = better, rank 1 = best, ties get average ranks), with the Nemenyi
/// critical difference at `alpha` (0.05 or 0.10). Throws DataError for
/// missing cells or n or k below 2.
StatTestResult friedman_test(const std::vector<std::vector<double>>& scores,
                             double alpha = 0.10);

/// Nemenyi critical difference q_alpha * sqrt(k(k+1) / (6n)) for k in 2..20.
double nemenyi_critical_difference(int k, int n, double alpha);

/// Model index pairs whose average-rank gap exceeds the critical difference.
std::vector<std::pair<int, int>> significant_pairs(const StatTestResult& r);

}  // namespace wsrec
