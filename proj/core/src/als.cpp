#include "wsrec/als.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "wsrec/errors.hpp"
#include "wsrec/rng.hpp"

namespace wsrec {

namespace {

DenseMatrix seeded_init(std::mt19937_64& gen, Eigen::Index rows,
                        Eigen::Index cols) {
  DenseMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = uniform_range(gen, -0.01, 0.01);
    }
  }
  return m;
}

// Solves the ridge system of one side. For every row u of X:
//   (G + alpha * sum_{i in row} Y_i Y_i^T) x_u = (1 + alpha) * sum Y_i
// where G = Y^T Y + lambda I. rows(u) lists the indices into Y.
void solve_side(DenseMatrix& X, const DenseMatrix& Y,
                const std::function<std::span<const std::uint32_t>(std::size_t)>&
                    rows,
                double alpha, double lambda) {
  const Eigen::Index d = Y.cols();
  Eigen::MatrixXd gram = Y.transpose() * Y;
  gram.diagonal().array() += lambda;

  const std::int64_t n = X.rows();
#pragma omp parallel
  {
    Eigen::MatrixXd a(d, d);
    Eigen::VectorXd b(d);
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t u = 0; u < n; ++u) {
      a = gram;
      b.setZero();
      for (const std::uint32_t i : rows(static_cast<std::size_t>(u))) {
        const auto y = Y.row(i);
        a.selfadjointView<Eigen::Lower>().rankUpdate(y.transpose(), alpha);
        b += (1.0 + alpha) * y.transpose();
      }
      X.row(u) = a.selfadjointView<Eigen::Lower>().llt().solve(b).transpose();
    }
  }
}

std::string als_tag(const AlsConfig& cfg, int epochs) {
  std::ostringstream tag;
  tag << "als epochs=" << epochs << " reg=" << cfg.regularization
      << " dim=" << cfg.dim << " conf=" << cfg.confidence_scale
      << " seed=" << cfg.seed;
  return tag.str();
}

}  // namespace

std::vector<EmbeddingPair> train_als_snapshots(
    const InteractionMatrix& m, const AlsConfig& cfg,
    std::span<const int> epoch_marks) {
  if (m.user_count() == 0 || m.item_count() == 0) {
    throw DataError("ALS needs at least one user and one item");
  }
  if (cfg.dim < 1 || cfg.epochs < 0 || cfg.regularization <= 0.0) {
    throw UsageError("invalid ALS config");
  }

  std::vector<int> marks(epoch_marks.begin(), epoch_marks.end());
  const int max_epochs =
      marks.empty() ? 0 : *std::max_element(marks.begin(), marks.end());

  std::mt19937_64 gen(cfg.seed);
  EmbeddingPair e;
  e.users = seeded_init(gen, static_cast<Eigen::Index>(m.user_count()),
                        cfg.dim);
  e.items = seeded_init(gen, static_cast<Eigen::Index>(m.item_count()),
                        cfg.dim);

  // Item-major rows for the item pass.
  std::vector<std::vector<std::uint32_t>> item_rows(m.item_count());
  for (std::size_t u = 0; u < m.user_count(); ++u) {
    for (const std::uint32_t i : m.items_of(u)) {
      item_rows[i].push_back(static_cast<std::uint32_t>(u));
    }
  }

  std::vector<EmbeddingPair> snapshots(marks.size());
  auto snapshot_epoch = [&](int epoch) {
    for (std::size_t k = 0; k < marks.size(); ++k) {
      if (marks[k] == epoch) {
        snapshots[k] = e;
        snapshots[k].source_tag = als_tag(cfg, epoch);
      }
    }
  };

  snapshot_epoch(0);
  for (int epoch = 1; epoch <= max_epochs; ++epoch) {
    solve_side(e.users, e.items,
               [&](std::size_t u) { return m.items_of(u); },
               cfg.confidence_scale, cfg.regularization);
    solve_side(e.items, e.users,
               [&](std::size_t i) {
                 return std::span<const std::uint32_t>(item_rows[i]);
               },
               cfg.confidence_scale, cfg.regularization);
    if (!e.is_finite()) {
      throw TrainingError("ALS diverged at epoch " + std::to_string(epoch));
    }
    snapshot_epoch(epoch);
  }
  return snapshots;
}

EmbeddingPair train_als(const InteractionMatrix& m, const AlsConfig& cfg) {
  const int marks[] = {cfg.epochs};
  auto snapshots = train_als_snapshots(m, cfg, marks);
  return std::move(snapshots.front());
}

double als_loss(const InteractionMatrix& m, const EmbeddingPair& e,
                const AlsConfig& cfg) {
  // Split the dense sum: unit-confidence error over all cells via the Gram
  // identity sum_{u,i} (p_u . q_i)^2 = tr((P^T P)(Q^T Q)), then correct the
  // observed cells to confidence (1 + alpha) against preference 1.
  const Eigen::MatrixXd pg = e.users.transpose() * e.users;
  const Eigen::MatrixXd qg = e.items.transpose() * e.items;
  double loss = (pg.cwiseProduct(qg)).sum();

  const double c = 1.0 + cfg.confidence_scale;
  for (std::size_t u = 0; u < m.user_count(); ++u) {
    const auto p = e.users.row(static_cast<Eigen::Index>(u));
    for (const std::uint32_t i : m.items_of(u)) {
      const double pred = p.dot(e.items.row(i));
      loss += c * (1.0 - pred) * (1.0 - pred) - pred * pred;
    }
  }
  loss += cfg.regularization *
          (e.users.squaredNorm() + e.items.squaredNorm());
  return loss;
}

}  // namespace wsrec
