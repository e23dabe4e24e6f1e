#include "qp/jacobi.hpp"
#include "qp/mutation.hpp"
#include "qp/trees.hpp"

#include <benchmark/benchmark.h>

using namespace qp;

namespace {

QuiverPtr loops(int k) {
    std::vector<std::tuple<std::string, std::string, std::string>> arr;
    for (int i = 0; i < k; ++i) arr.push_back({std::string(1, char('x' + i)), "1", "1"});
    return Quiver::make({"1"}, std::move(arr));
}

TruncSeries<Rat> dense_series(const QuiverPtr& q, int N) {
    std::vector<std::tuple<int, PathKey, Rat>> acc;
    for (int d = 1; d <= N; ++d)
        for (PathKey k = 0; k < q->pow_arrows(d); ++k) acc.emplace_back(d, k, Rat(std::int64_t(1 + (k % 5))));
    return TruncSeries<Rat>::from_accum(q, N, std::move(acc));
}

void BM_series_multiply_dense(benchmark::State& state) {
    const int k = int(state.range(0)), N = int(state.range(1));
    auto q = loops(k);
    auto f = dense_series(q, N);
    for (auto _ : state) {
        auto r = f * f;
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_series_multiply_dense)->Args({2, 10})->Args({2, 12})->Args({3, 8});

void BM_endo_invert(benchmark::State& state) {
    const int N = int(state.range(0));
    auto q = loops(2);
    auto img0 = TruncSeries<Rat>::monomial(q, N, std::vector<int>{0}, Rat(1)) -
                TruncSeries<Rat>::monomial(q, N, std::vector<int>{0, 1}, Rat(1));
    auto img1 = TruncSeries<Rat>::monomial(q, N, std::vector<int>{1}, Rat(1)) +
                TruncSeries<Rat>::monomial(q, N, std::vector<int>{1, 1, 0}, Rat(2));
    auto h = Endomorphism<Rat>::from_images(q, N, {img0, img1});
    for (auto _ : state) {
        auto g = h.invert();
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_endo_invert)->Arg(6)->Arg(8)->Arg(10);

void BM_invert_by_trees(benchmark::State& state) {
    const int N = int(state.range(0));
    auto q = loops(1);
    auto h = Endomorphism<Rat>::from_images(
        q, N,
        {TruncSeries<Rat>::monomial(q, N, std::vector<int>{0}, Rat(1)) -
         TruncSeries<Rat>::monomial(q, N, std::vector<int>{0, 0}, Rat(1))});
    for (auto _ : state) {
        auto g = invert_by_trees(h);
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_invert_by_trees)->Arg(6)->Arg(8);

void BM_jacobi_truncation(benchmark::State& state) {
    const int N = int(state.range(0));
    auto q = Quiver::make({"1", "2", "3"}, {{"a", "1", "2"}, {"b", "2", "3"}, {"c", "3", "1"}});
    auto phi = cyclic_class(TruncSeries<Rat>::monomial(q, N, std::vector<int>{0, 1, 2}, Rat(1)));
    for (auto _ : state) {
        auto jt = jacobi_truncation(q, phi, N);
        benchmark::DoNotOptimize(jt.quotient_dims());
    }
}
BENCHMARK(BM_jacobi_truncation)->Arg(6)->Arg(8)->Arg(10);

void BM_split_trivial(benchmark::State& state) {
    const int N = int(state.range(0));
    auto q = Quiver::make({"1"}, {{"y", "1", "1"}, {"z", "1", "1"}});
    std::vector<std::tuple<int, PathKey, Rat>> acc;
    acc.emplace_back(2, encode_path(*q, std::vector<int>{0, 1}), Rat(1));
    for (int d = 3; d <= N; ++d)
        for (PathKey k = 0; k < q->pow_arrows(d); ++k) acc.emplace_back(d, k, Rat(-1));
    QPPair<Rat> qp{q, CyclicPotential<Rat>::from_accum(q, N, std::move(acc))};
    for (auto _ : state) {
        auto rep = split_trivial(qp);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_split_trivial)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
