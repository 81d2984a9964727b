// Serial reference against the OpenMP kernel for each parallel hot spot.

#include <benchmark/benchmark.h>

#include "caus/builtins.hpp"
#include "caus/function.hpp"
#include "caus/lp.hpp"
#include "caus/topology.hpp"

using namespace caus;

namespace {

const std::vector<std::string> kFive{"A", "B", "C", "D", "E"};

void BM_orders_serial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(enumerate_orders_serial(kFive, 5).size());
}
void BM_orders_parallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(enumerate_orders(kFive, 5).size());
}

void BM_separable_serial(benchmark::State& st) {
    auto s = builtin_space("switch3");
    for (auto _ : st) benchmark::DoNotOptimize(count_separable_serial(s, Outputs(3, 2)));
}
void BM_separable_parallel(benchmark::State& st) {
    auto s = builtin_space("switch3");
    for (auto _ : st) benchmark::DoNotOptimize(count_separable(s, Outputs(3, 2)));
}

void BM_covers_serial(benchmark::State& st) {
    auto s = builtin_space("total2");
    for (auto _ : st) benchmark::DoNotOptimize(enumerate_covers_serial(*s).size());
}
void BM_covers_parallel(benchmark::State& st) {
    auto s = builtin_space("total2");
    for (auto _ : st) benchmark::DoNotOptimize(enumerate_covers(*s).size());
}

// a cheap on-the-fly column source, big enough for pricing to dominate
class Columns : public ColumnSource {
public:
    Columns(std::size_t n, int m) : n_(n), m_(m) {}
    std::size_t size() const override { return n_; }
    void column(std::size_t j, std::vector<LPEntry>& out) const override {
        out.clear();
        int a = static_cast<int>(j % m_), b = static_cast<int>((j * 7 + j / m_) % m_);
        out.push_back({a, 1});
        if (b != a) out.push_back({b, 1});
    }
    int cost(std::size_t j) const override { return 1 + static_cast<int>(j % 3); }

private:
    std::size_t n_;
    int m_;
};

void pricing(benchmark::State& st, Pricing p) {
    Columns c(1 << 22, 64);
    std::vector<double> y(64);
    for (int r = 0; r < 64; ++r) y[r] = 0.05 * (r % 7);
    for (auto _ : st) benchmark::DoNotOptimize(price_columns(c, y, 1e-9, 256, Keep::best, p).items.size());
}
void BM_pricing_serial(benchmark::State& st) { pricing(st, Pricing::serial); }
void BM_pricing_parallel(benchmark::State& st) { pricing(st, Pricing::parallel); }

}  // namespace

BENCHMARK(BM_orders_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_orders_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_separable_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_separable_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_covers_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_covers_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pricing_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pricing_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
