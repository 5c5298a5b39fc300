#include <benchmark/benchmark.h>

#include <random>

#include "wsrec/interaction_matrix.hpp"
#include "wsrec/recommend.hpp"

namespace {

wsrec::InteractionMatrix make_matrix(std::size_t users, std::size_t items,
                                     std::size_t per_user) {
  std::mt19937_64 gen(7);
  std::vector<wsrec::InteractionRecord> records;
  for (std::size_t u = 0; u < users; ++u) {
    std::vector<std::uint32_t> pool(items);
    for (std::size_t i = 0; i < items; ++i) {
      pool[i] = static_cast<std::uint32_t>(i);
    }
    for (std::size_t i = items; i > 1; --i) {
      std::swap(pool[i - 1], pool[gen() % i]);
    }
    for (std::size_t k = 0; k < per_user && k < items - 1; ++k) {
      records.emplace_back("u" + std::to_string(u),
                           "i" + std::to_string(pool[k]));
    }
  }
  return wsrec::InteractionMatrix::from_records(records);
}

wsrec::EmbeddingPair make_embeddings(const wsrec::InteractionMatrix& m,
                                     int dim) {
  std::mt19937_64 gen(9);
  wsrec::EmbeddingPair e;
  e.users.resize(static_cast<Eigen::Index>(m.user_count()), dim);
  e.items.resize(static_cast<Eigen::Index>(m.item_count()), dim);
  auto fill = [&gen](wsrec::DenseMatrix& mat) {
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
      for (Eigen::Index c = 0; c < mat.cols(); ++c) {
        mat(r, c) = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
      }
    }
  };
  fill(e.users);
  fill(e.items);
  return e;
}

void BM_TopN(benchmark::State& state) {
  const auto users = static_cast<std::size_t>(state.range(0));
  const auto items = static_cast<std::size_t>(state.range(1));
  const int dim = static_cast<int>(state.range(2));
  const auto m = make_matrix(users, items, 20);
  const auto e = make_embeddings(m, dim);
  const wsrec::WeightConfig w{3, 2, wsrec::Similarity::kDot};
  for (auto _ : state) {
    benchmark::DoNotOptimize(wsrec::top_n(e, m, w, 20));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(users * items));
}
BENCHMARK(BM_TopN)
    ->Args({500, 1000, 32})
    ->Args({500, 1000, 128})
    ->Args({1500, 1900, 64})
    ->Unit(benchmark::kMillisecond);

void BM_TopNCosine(benchmark::State& state) {
  const auto m = make_matrix(500, 1000, 20);
  const auto e = make_embeddings(m, static_cast<int>(state.range(0)));
  const wsrec::WeightConfig w{1, 1, wsrec::Similarity::kCosine};
  for (auto _ : state) {
    benchmark::DoNotOptimize(wsrec::top_n(e, m, w, 20));
  }
}
BENCHMARK(BM_TopNCosine)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

// The per-pair definition of the item-item score, for comparison with the
// centroid path exercised by BM_TopN.
void BM_ItemItemPerPair(benchmark::State& state) {
  const auto m = make_matrix(200, 500, 20);
  const auto e = make_embeddings(m, 64);
  for (auto _ : state) {
    double sum = 0.0;
    for (std::size_t u = 0; u < m.user_count(); ++u) {
      const auto history = m.items_of(u);
      for (std::uint32_t i = 0; i < 100; ++i) {
        sum += wsrec::item_item_score(e, history, i, wsrec::Similarity::kDot);
      }
    }
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_ItemItemPerPair)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
