#include <benchmark/benchmark.h>

#include <random>

#include "wsrec/als.hpp"
#include "wsrec/bpr.hpp"
#include "wsrec/interaction_matrix.hpp"

namespace {

wsrec::InteractionMatrix make_matrix(std::size_t users, std::size_t items,
                                     std::size_t per_user) {
  std::mt19937_64 gen(13);
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

void BM_AlsEpoch(benchmark::State& state) {
  const auto m = make_matrix(1500, 1900, 19);
  wsrec::AlsConfig cfg;
  cfg.dim = static_cast<int>(state.range(0));
  cfg.epochs = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wsrec::train_als(m, cfg));
  }
}
BENCHMARK(BM_AlsEpoch)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_BprEpoch(benchmark::State& state) {
  const auto m = make_matrix(1500, 1900, 19);
  wsrec::BprConfig cfg;
  cfg.dim = static_cast<int>(state.range(0));
  cfg.epochs = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wsrec::train_bpr(m, cfg));
  }
}
BENCHMARK(BM_BprEpoch)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
