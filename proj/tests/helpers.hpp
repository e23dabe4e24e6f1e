#pragma once

#include "qp/endo.hpp"
#include "qp/series.hpp"

#include <cstdint>
#include <random>

// shared fixtures and a tiny deterministic RNG for property tests

namespace qptest {

using namespace qp;

inline QuiverPtr one_loop() {
    return Quiver::make({"1"}, {{"t", "1", "1"}});
}

inline QuiverPtr loops(int k) {
    std::vector<std::tuple<std::string, std::string, std::string>> arr;
    for (int i = 0; i < k; ++i) arr.push_back({std::string(1, char('x' + i)), "1", "1"});
    return Quiver::make({"1"}, std::move(arr));
}

/// nodes 1,2,3 with a:1->2, b:2->3, c:3->1
inline QuiverPtr three_cycle() {
    return Quiver::make({"1", "2", "3"}, {{"a", "1", "2"}, {"b", "2", "3"}, {"c", "3", "1"}});
}

inline QuiverPtr a2() {
    return Quiver::make({"1", "2"}, {{"a", "1", "2"}});
}

inline TruncSeries<Rat> mono(const QuiverPtr& q, int N, std::initializer_list<int> arrows,
                             Rat c = Rat(1)) {
    std::vector<int> v(arrows);
    return TruncSeries<Rat>::monomial(q, N, v, c);
}

/// random sparse series with ord >= min_ord, small integer coefficients
inline TruncSeries<Rat> random_series(std::mt19937_64& rng, const QuiverPtr& q, int N, int min_ord,
                                      int terms_per_degree = 2) {
    std::vector<std::tuple<int, PathKey, Rat>> acc;
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> arrow(0, q->arrow_count() - 1);
    for (int d = min_ord; d <= N; ++d) {
        for (int t = 0; t < terms_per_degree; ++t) {
            std::vector<int> w;
            int node = -1;
            bool ok = true;
            for (int i = 0; i < d; ++i) {
                // random composable extension
                std::vector<int> cand;
                for (int a = 0; a < q->arrow_count(); ++a)
                    if (node < 0 || q->src(a) == node) cand.push_back(a);
                if (cand.empty()) { ok = false; break; }
                int a = cand[size_t(arrow(rng)) % cand.size()];
                w.push_back(a);
                node = q->tgt(a);
            }
            if (!ok) continue;
            acc.emplace_back(d, encode_path(*q, w), Rat(coeff(rng)));
        }
    }
    return TruncSeries<Rat>::from_accum(q, N, std::move(acc));
}

/// random unitriangular endomorphism h(a) = a - (random ord>=2 part in the block)
inline Endomorphism<Rat> random_unitriangular(std::mt19937_64& rng, const QuiverPtr& q, int N,
                                              int terms_per_degree = 1) {
    std::vector<TruncSeries<Rat>> imgs;
    for (int a = 0; a < q->arrow_count(); ++a) {
        int arr[1] = {a};
        auto img = TruncSeries<Rat>::monomial(q, N, arr, Rat(1));
        auto noise = random_series(rng, q, N, 2, terms_per_degree);
        // keep only the (src,tgt) block of this arrow
        std::vector<std::tuple<int, PathKey, Rat>> acc;
        noise.for_each([&](int d, PathKey k, const Rat& c) {
            if (path_src(*q, d, k) == q->src(a) && path_tgt(*q, d, k) == q->tgt(a))
                acc.emplace_back(d, k, c);
        });
        img += TruncSeries<Rat>::from_accum(q, N, std::move(acc));
        imgs.push_back(std::move(img));
    }
    return Endomorphism<Rat>::from_images(q, N, std::move(imgs));
}

} // namespace qptest
