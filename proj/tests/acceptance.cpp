// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion carries a wall-clock budget that is enforced.

#include "qp/flow.hpp"
#include "qp/jacobi.hpp"
#include "qp/json_io.hpp"
#include "qp/mutation.hpp"
#include "qp/repmod.hpp"
#include "qp/torus.hpp"
#include "qp/trees.hpp"

#include <chrono>
#include <cstdio>
#include <random>

using namespace qp;

namespace {

int failures = 0;

struct Criterion {
    const char* name;
    double budget_seconds;
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

void finish(Criterion& c, double seconds) {
    if (seconds > c.budget_seconds) {
        c.ok = false;
        c.detail += (c.detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("%s criterion %s (%.2fs, budget %.0fs)%s%s\n", c.ok ? "PASS" : "FAIL", c.name,
                seconds, c.budget_seconds, c.detail.empty() ? "" : " -- ", c.detail.c_str());
    if (!c.ok) ++failures;
}

template <class F>
void run(Criterion c, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail += std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    finish(c, secs);
}

QuiverPtr three_cycle() {
    return Quiver::make({"1", "2", "3"}, {{"a", "1", "2"}, {"b", "2", "3"}, {"c", "3", "1"}});
}
QuiverPtr one_loop() { return Quiver::make({"1"}, {{"t", "1", "1"}}); }

CyclicPotential<Rat> cycle_power(const QuiverPtr& q, int N, int power) {
    std::vector<int> w;
    for (int i = 0; i < power; ++i) { w.push_back(0); w.push_back(1); w.push_back(2); }
    return cyclic_class(TruncSeries<Rat>::monomial(q, N, w, Rat(1)));
}

CyclicPotential<Rat> loop_power(const QuiverPtr& q, int N, int p) {
    std::vector<int> w(size_t(p), 0);
    return cyclic_class(TruncSeries<Rat>::monomial(q, N, w, Rat(1)));
}

// --- 1. mutation golden tests -------------------------------------------------

void criterion_mutation(Criterion& c) {
    const int N = 6;
    {
        auto res = mutate(QPPair<Rat>{three_cycle(), cycle_power(three_cycle(), N, 1)}, 1);
        const Quiver& rq = *res.split.reduced.quiver;
        c.require(rq.arrow_count() == 2 && rq.arrow(0).id == "a*" && rq.arrow(1).id == "b*",
                  "mutated abc quiver");
        c.require(rq.src(0) == 1 && rq.tgt(0) == 0 && rq.src(1) == 2 && rq.tgt(1) == 1,
                  "mutated abc arrows acyclic");
        c.require(res.split.reduced.potential.is_zero(), "mutated abc potential zero");
        c.require(!res.two_cycles_in_reduced, "no surviving 2-cycle for abc");
    }
    {
        auto res = mutate(QPPair<Rat>{three_cycle(), cycle_power(three_cycle(), N, 2)}, 1);
        const auto& red = res.split.reduced;
        const Quiver& rq = *red.quiver;
        c.require(rq.arrow_count() == 4, "mutated (abc)^2 has 4 arrows");
        c.require(res.two_cycles_in_reduced, "2-cycle survives for (abc)^2");
        const int e = rq.arrow_index("[a|b]"), cc = rq.arrow_index("c");
        const int as = rq.arrow_index("a*"), bs = rq.arrow_index("b*");
        auto expect =
            cyclic_class(TruncSeries<Rat>::monomial(red.quiver, N, std::vector<int>{e, cc, e, cc}, Rat(1))) +
            cyclic_class(TruncSeries<Rat>::monomial(red.quiver, N, std::vector<int>{e, bs, as}, Rat(1)));
        c.require(red.potential == expect, "mutated (abc)^2 potential is ecec + e b* a*");
    }
}

// --- 2. separation constants ---------------------------------------------------

void criterion_separation(Criterion& c) {
    const int N = 12;
    auto q = Quiver::make({"1"}, {{"y", "1", "1"}, {"z", "1", "1"}});
    std::vector<std::tuple<int, PathKey, Rat>> acc;
    acc.emplace_back(2, encode_path(*q, std::vector<int>{0, 1}), Rat(1));
    for (int d = 3; d <= N; ++d)
        for (PathKey k = 0; k < q->pow_arrows(d); ++k) acc.emplace_back(d, k, Rat(-1));
    QPPair<Rat> qp{q, CyclicPotential<Rat>::from_accum(q, N, std::move(acc))};

    auto rep = split_trivial(qp);
    c.require(rep.removed_pairs.size() == 1, "one removed pair");
    c.require(rep.reduced.potential.is_zero(), "reduced potential zero");

    // N_m from H(y) = y + sum N_m (y+z)^m, complete for m < N
    std::vector<Rat> Nm(size_t(N), Rat(0));
    const auto& hy = rep.reducer.image(0);
    const auto& hz = rep.reducer.image(1);
    bool symmetric = true;
    for (int m = 2; m < N; ++m) {
        std::vector<int> w(size_t(m), 0);
        Nm[size_t(m)] = hy.coeff(m, encode_path(*q, w));
        for (PathKey k = 0; k < q->pow_arrows(m); ++k)
            if (hy.coeff(m, k) != Nm[size_t(m)] || hz.coeff(m, k) != Nm[size_t(m)]) symmetric = false;
    }
    c.require(symmetric, "reducer has the (y+z)^m form");
    c.require(Nm[2] == Rat(1), "N_2 = 1");
    c.require(Nm[3] == Rat(6), "N_3 = 6");
    c.require(Nm[4] == Rat(45), "N_4 = 45");

    // 10 G^3 + (15t - 1) G^2 + (7t^2 - t) G + t^3 = 0 through degree 12
    std::vector<Rat> G(size_t(N) + 1, Rat(0));
    for (int m = 2; m < N; ++m) G[size_t(m)] = Nm[size_t(m)];
    auto pmul = [&](const std::vector<Rat>& a, const std::vector<Rat>& b) {
        std::vector<Rat> r(size_t(N) + 1, Rat(0));
        for (size_t i = 0; i <= size_t(N); ++i)
            for (size_t j = 0; i + j <= size_t(N); ++j) r[i + j] += a[i] * b[j];
        return r;
    };
    auto G2 = pmul(G, G);
    auto G3 = pmul(G2, G);
    bool cubic = true;
    for (int d = 0; d <= N; ++d) {
        Rat res = Rat(10) * G3[size_t(d)];
        res += Rat(15) * (d >= 1 ? G2[size_t(d - 1)] : Rat(0)) - G2[size_t(d)];
        res += Rat(7) * (d >= 2 ? G[size_t(d - 2)] : Rat(0)) - (d >= 1 ? G[size_t(d - 1)] : Rat(0));
        if (d == 3) res += Rat(1);
        if (!res.is_zero()) cubic = false;
    }
    c.require(cubic, "generating series satisfies the cubic through degree 12");
}

// --- 3. inversion cross-validation ----------------------------------------------

void criterion_inversion(Criterion& c) {
    const int N = 8;
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> coeff(-3, 3), degree(2, 4);
    int done = 0;
    for (int k = 1; k <= 3 && c.ok; ++k) {
        std::vector<std::tuple<std::string, std::string, std::string>> arr;
        for (int i = 0; i < k; ++i) arr.push_back({std::string(1, char('x' + i)), "1", "1"});
        auto q = Quiver::make({"1"}, std::move(arr));
        std::uniform_int_distribution<int> arrow(0, k - 1);
        const int runs = k == 3 ? 18 : 16;
        for (int it = 0; it < runs; ++it) {
            std::vector<TruncSeries<Rat>> imgs;
            for (int a = 0; a < k; ++a) {
                int ar[1] = {a};
                auto img = TruncSeries<Rat>::monomial(q, N, ar, Rat(1));
                std::vector<std::tuple<int, PathKey, Rat>> acc;
                for (int t = 0; t < 3; ++t) {
                    const int d = degree(rng);
                    std::vector<int> w;
                    for (int i = 0; i < d; ++i) w.push_back(arrow(rng));
                    acc.emplace_back(d, encode_path(*q, w), Rat(coeff(rng)));
                }
                img += TruncSeries<Rat>::from_accum(q, N, std::move(acc));
                imgs.push_back(std::move(img));
            }
            auto h = Endomorphism<Rat>::from_images(q, N, std::move(imgs));
            auto g = h.invert();
            c.require(invert_by_trees(h) == g, "tree inverse equals order-by-order inverse");
            c.require(h.compose(g) == Endomorphism<Rat>::identity(q, N),
                      "compose(h, invert(h)) is the identity");
            c.require(g.compose(h) == Endomorphism<Rat>::identity(q, N),
                      "compose(invert(h), h) is the identity");
            ++done;
            if (!c.ok) break;
        }
    }
    c.require(done >= 50, "50 random endomorphisms validated");

    auto q = one_loop();
    auto h = Endomorphism<Rat>::from_images(
        q, 5,
        {TruncSeries<Rat>::monomial(q, 5, std::vector<int>{0}, Rat(1)) -
         TruncSeries<Rat>::monomial(q, 5, std::vector<int>{0, 0}, Rat(1))});
    auto g = h.invert();
    const std::int64_t catalan[] = {1, 1, 2, 5, 14};
    for (int d = 1; d <= 5; ++d) {
        std::vector<int> w(size_t(d), 0);
        c.require(g.image(0).coeff(d, encode_path(*q, w)) == Rat(catalan[d - 1]),
                  "Catalan coefficient at degree " + std::to_string(d));
    }
}

// --- 4. jacobi certificates -----------------------------------------------------

void criterion_jacobi(Criterion& c) {
    auto q = one_loop();
    const int N = 8;
    for (int n = 1; n <= 6; ++n) {
        auto jt = jacobi_truncation(q, loop_power(q, N, n + 1), N);
        c.require(jt.certify_m_power(n), "certify(n) for t^" + std::to_string(n + 1));
        if (n >= 2)
            c.require(!jt.certify_m_power(n - 1), "certify(n-1) fails for t^" + std::to_string(n + 1));
        auto cert = jt.determinacy_bound();
        c.require(cert.r && *cert.r == n && *cert.determinacy_bound == n + 1,
                  "determinacy bound n+1 for t^" + std::to_string(n + 1));
    }
    {
        // independent path-rewriting oracle for the monomial ideal of (3-cycle, abc)
        auto q3 = three_cycle();
        const int M = 6;
        auto jt = jacobi_truncation(q3, cycle_power(q3, M, 1), M);
        auto paths = enumerate_paths(*q3, M);
        std::vector<int> digits;
        for (int d = 0; d <= M; ++d) {
            std::int64_t alive = 0;
            for (PathKey k : paths[size_t(d)]) {
                if (d > 0) decode_path(*q3, d, k, digits); else digits.clear();
                bool dead = false;
                const int forb[3][2] = {{1, 2}, {2, 0}, {0, 1}};
                for (size_t i = 0; i + 1 < digits.size() && !dead; ++i)
                    for (const auto& f : forb)
                        if (digits[i] == f[0] && digits[i + 1] == f[1]) dead = true;
                if (!dead) ++alive;
            }
            c.require(jt.quotient_dim(d) == alive,
                      "3-cycle quotient dimension at degree " + std::to_string(d));
        }
    }
    {
        // commutative oracle: multiples of 3t^2 + 4t^3 in k[t]/t^{N+1}
        auto phi = loop_power(q, N, 3) + loop_power(q, N, 4);
        auto jt = jacobi_truncation(q, phi, N);
        std::vector<std::vector<Rat>> rows;
        for (int s = 0; s <= N; ++s) {
            std::vector<Rat> r(size_t(N) + 1, Rat(0));
            if (s + 2 <= N) r[size_t(s + 2)] = Rat(3);
            if (s + 3 <= N) r[size_t(s + 3)] = Rat(4);
            if (s + 2 <= N) rows.push_back(std::move(r));
        }
        std::vector<int> leads;
        std::vector<std::vector<Rat>> ech;
        for (auto r : rows) {
            for (size_t i = 0; i < ech.size(); ++i) {
                const int l = leads[i];
                if (!r[size_t(l)].is_zero()) {
                    Rat f = r[size_t(l)] / ech[i][size_t(l)];
                    for (int cc = 0; cc <= N; ++cc) r[size_t(cc)] -= f * ech[i][size_t(cc)];
                }
            }
            int l = -1;
            for (int cc = 0; cc <= N; ++cc)
                if (!r[size_t(cc)].is_zero()) { l = cc; break; }
            if (l >= 0) { ech.push_back(std::move(r)); leads.push_back(l); }
        }
        std::vector<std::int64_t> dims(size_t(N) + 1, 1);
        for (int l : leads) dims[size_t(l)] -= 1;
        for (int d = 0; d <= N; ++d)
            c.require(jt.quotient_dim(d) == dims[size_t(d)],
                      "t^3+t^4 quotient dimension at degree " + std::to_string(d));
    }
}

// --- 5. Moser conservation -------------------------------------------------------

DerivationFamily tangent_family(const QuiverPtr& q, int N, const CyclicPotential<Rat>& theta0,
                                const CyclicPotential<Rat>& theta1) {
    // xi_s from tangent_solve at N+1 sampled times, interpolated exactly in s
    const int samples = N + 1;
    std::vector<std::vector<TruncSeries<Rat>>> xi_at;
    std::vector<Rat> svals;
    for (int i = 0; i < samples; ++i) {
        Rat s(i, samples - 1);
        svals.push_back(s);
        auto sol = tangent_solve(theta0 + s * theta1, theta1);
        if (!sol.xi) throw math_error("tangent solve failed in the pipeline");
        xi_at.push_back(std::move(*sol.xi));
    }
    DerivationFamily xi(q, N);
    for (int a = 0; a < q->arrow_count(); ++a) {
        // collect the support across samples
        std::vector<std::pair<int, PathKey>> support;
        for (const auto& at : xi_at)
            at[size_t(a)].for_each([&](int d, PathKey k, const Rat&) {
                if (std::find(support.begin(), support.end(), std::pair{d, k}) == support.end())
                    support.push_back({d, k});
            });
        for (auto [d, k] : support) {
            std::vector<Rat> poly(size_t(samples), Rat(0));
            for (int i = 0; i < samples; ++i) {
                std::vector<Rat> basis = {Rat(1)};
                Rat denom(1);
                for (int j = 0; j < samples; ++j) {
                    if (j == i) continue;
                    std::vector<Rat> nb(basis.size() + 1, Rat(0));
                    for (size_t cc = 0; cc < basis.size(); ++cc) {
                        nb[cc] -= svals[size_t(j)] * basis[cc];
                        nb[cc + 1] += basis[cc];
                    }
                    basis = std::move(nb);
                    denom *= svals[size_t(i)] - svals[size_t(j)];
                }
                const Rat v = xi_at[size_t(i)][size_t(a)].coeff(d, k) / denom;
                for (size_t cc = 0; cc < basis.size(); ++cc) poly[cc] += v * basis[cc];
            }
            std::vector<CD> cd;
            for (const auto& r : poly) cd.push_back(CD(r.to_double(), 0.0));
            xi.add_term(a, d, k, TimePoly(std::move(cd)));
        }
    }
    return xi;
}

void criterion_moser(Criterion& c) {
    auto q = one_loop();
    const int N = 8;
    auto theta0 = loop_power(q, N, 3);
    auto theta1 = loop_power(q, N, 4);
    auto xi = tangent_family(q, N, theta0, theta1);
    auto t0 = series_cast<CD>(theta0);
    auto t1 = series_cast<CD>(theta1);
    const std::vector<double> grid = {0.0, 0.5, 1.0};
    auto rep = conservation_check(t0, t1, xi, grid, 1000);
    c.require(rep.max_deviation < 1e-6,
              "conservation within 1e-6 at 1000 steps (got " + std::to_string(rep.max_deviation) + ")");
    auto d250 = conservation_check(t0, t1, xi, grid, 250).max_deviation;
    auto d500 = conservation_check(t0, t1, xi, grid, 500).max_deviation;
    const double ratio = d250 / d500;
    c.require(ratio > 8.0 && ratio < 32.0,
              "order-4 convergence within a factor of 2 (ratio " + std::to_string(ratio) + ")");
}

// --- 6. Chern-Simons gradients ----------------------------------------------------

void criterion_cs(Criterion& c) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto build = [&](const QuiverPtr& q, const DimVector& dim) {
        std::vector<int> offset(size_t(q->node_count()) + 1, 0);
        for (int i = 0; i < q->node_count(); ++i) offset[size_t(i) + 1] = offset[size_t(i)] + int(dim[i]);
        std::vector<Mat<CD>> mats;
        for (int a = 0; a < q->arrow_count(); ++a) {
            Mat<CD> m(int(dim[q->tgt(a)]), int(dim[q->src(a)]));
            for (int i = 0; i < m.rows; ++i)
                for (int j = 0; j < m.cols; ++j)
                    if (offset[size_t(q->tgt(a))] + i > offset[size_t(q->src(a))] + j)
                        m.at(i, j) = CD(u(rng), u(rng));
            mats.push_back(std::move(m));
        }
        return MatrixRep<CD>::make(q, dim, std::move(mats));
    };
    int done = 0;
    auto q3 = three_cycle();
    auto phi3 = cyclic_class(series_cast<CD>(cycle_power(q3, 6, 1).representative()));
    auto ql = one_loop();
    auto phil = cyclic_class(series_cast<CD>(loop_power(ql, 6, 3).representative()));
    const DimVector dims3[] = {DimVector({2, 2, 2}), DimVector({1, 2, 2}), DimVector({2, 2, 1}),
                               DimVector({1, 1, 1})};
    for (int it = 0; it < 10; ++it) {
        auto rep3 = build(q3, dims3[it % 4]);
        c.require(rep3.nilpotent(), "random representation is nilpotent");
        auto r = critical_point_check(phi3, rep3, 1e-5, 1e-6);
        c.require(r.max_gradient_discrepancy < 1e-6, "gradient match within 1e-6 (3-cycle)");
        auto big = critical_point_check(phi3, rep3, 1e-3, 1e-6);
        auto half = critical_point_check(phi3, rep3, 5e-4, 1e-6);
        if (half.max_gradient_discrepancy > 1e-12) {
            const double ratio = big.max_gradient_discrepancy / half.max_gradient_discrepancy;
            c.require(ratio > 2.0 && ratio < 8.0, "O(h^2) decay under halving (3-cycle)");
        }
        ++done;
    }
    for (int it = 0; it < 10; ++it) {
        auto repl = build(ql, DimVector({2 + it % 3}));
        auto r = critical_point_check(phil, repl, 1e-5, 1e-6);
        c.require(r.max_gradient_discrepancy < 1e-6, "gradient match within 1e-6 (one loop)");
        auto big = critical_point_check(phil, repl, 1e-3, 1e-6);
        auto half = critical_point_check(phil, repl, 5e-4, 1e-6);
        if (half.max_gradient_discrepancy > 1e-12) {
            const double ratio = big.max_gradient_discrepancy / half.max_gradient_discrepancy;
            c.require(ratio > 2.0 && ratio < 8.0, "O(h^2) decay under halving (one loop)");
        }
        ++done;
    }
    c.require(done == 20, "20 representations checked");
}

// --- 7. F-series -------------------------------------------------------------------

void criterion_fseries(Criterion& c) {
    auto q = one_loop();
    const std::int64_t primes_arr[] = {2, 3, 5, 7};
    std::span<const std::int64_t> primes(primes_arr);
    for (int n = 1; n <= 4; ++n) {
        Mat<Rat> m(n, n);
        for (int i = 0; i + 1 < n; ++i) m.at(i, i + 1) = Rat(1);
        auto fs = fseries(MatrixRep<Rat>::make(q, DimVector({n}), {m}), primes);
        c.require(fs.rejected.empty(), "all counts polynomial for Z[t]/t^" + std::to_string(n));
        bool all = int(fs.entries.size()) == n + 1;
        for (int d = 0; d <= n; ++d) all = all && fs.at(DimVector({d})) == 1;
        c.require(all, "F-series of Z[t]/t^" + std::to_string(n) + " is 1 + y + ... + y^" +
                           std::to_string(n));
    }
    auto fs = fseries(MatrixRep<Rat>::make(q, DimVector({2}), {Mat<Rat>(2, 2)}), primes);
    c.require(fs.at(DimVector({0})) == 1 && fs.at(DimVector({1})) == 2 && fs.at(DimVector({2})) == 1,
              "semisimple dim-2 module gives 1 + 2y + y^2");
}

// --- 8. torus suite -------------------------------------------------------------------

void criterion_torus(Criterion& c) {
    std::mt19937_64 rng(31337);
    // Poisson axioms on 100 random bounded elements, random loop-free quivers
    int checked = 0;
    while (checked < 100) {
        const int n = 2 + int(rng() % 3); // 2..4 nodes
        std::vector<std::string> nodes;
        for (int i = 1; i <= n; ++i) nodes.push_back(std::to_string(i));
        std::vector<std::tuple<std::string, std::string, std::string>> arr;
        int id = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const int cnt = int(rng() % 3);
                for (int t = 0; t < cnt; ++t)
                    arr.push_back({"a" + std::to_string(id++), nodes[size_t(i)], nodes[size_t(j)]});
            }
        auto q = Quiver::make(nodes, std::move(arr));
        auto ctx = TorusContext::make(q, 48); // bound exceeds any triple product
        auto rand_elt = [&]() {
            TorusElement e(ctx);
            std::uniform_int_distribution<int> ex(-2, 2), co(-3, 3);
            for (int t = 0; t < 3; ++t) {
                std::vector<std::int32_t> x(static_cast<size_t>(n), 0);
                std::vector<std::int32_t> y(static_cast<size_t>(n), 0);
                for (auto& v : x) v = std::int32_t(ex(rng));
                for (auto& v : y) v = std::int32_t(ex(rng));
                e.add_term(ExpKey{std::move(x), std::move(y)}, Rat(co(rng)));
            }
            return e;
        };
        for (int it = 0; it < 5 && checked < 100; ++it, ++checked) {
            auto u = rand_elt(), v = rand_elt(), w = rand_elt();
            c.require((poisson(u, v) + poisson(v, u)).is_zero(), "antisymmetry");
            c.require(poisson(u, v * w) == poisson(u, v) * w + v * poisson(u, w), "Leibniz");
            auto jac = poisson(u, poisson(v, w)) + poisson(v, poisson(w, u)) +
                       poisson(w, poisson(u, v));
            c.require(jac.is_zero(), "Jacobi identity");
            if (!c.ok) return;
        }
    }

    // FZ specialization reproduces the exchange relation on random quivers
    for (int qi = 0; qi < 8; ++qi) {
        const int n = 3;
        std::vector<std::string> nodes = {"1", "2", "3"};
        std::vector<std::tuple<std::string, std::string, std::string>> arr;
        int id = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const int cnt = int(rng() % 3);
                const bool fwd = rng() % 2 == 0;
                for (int t = 0; t < cnt; ++t)
                    arr.push_back({"a" + std::to_string(id++), nodes[size_t(fwd ? i : j)],
                                   nodes[size_t(fwd ? j : i)]});
            }
        auto q = Quiver::make(nodes, std::move(arr));
        auto ctx = TorusContext::make(q, 10);
        const auto& e = ctx->euler;
        for (int k = 0; k < n; ++k) {
            std::vector<std::int32_t> w(size_t(n), 0);
            w[size_t(k)] = -1;
            for (int j = 0; j < n; ++j) w[size_t(j)] += std::int32_t(e.chi(j, k));
            auto xk = TorusElement::monomial(ctx, w, std::vector<std::int32_t>(size_t(n), 0), Rat(1));
            auto mutated = xk * (TorusElement::one(ctx) - TorusElement::y_gen(ctx, k));
            auto lhs = fz_specialize(mutated) * TorusElement::x_gen(ctx, k);
            std::vector<std::int32_t> win(size_t(n), 0), wout(size_t(n), 0);
            for (int j = 0; j < n; ++j) {
                win[size_t(j)] = std::int32_t(e.chi(j, k));
                wout[size_t(j)] = std::int32_t(e.chi(k, j));
            }
            auto zero = std::vector<std::int32_t>(size_t(n), 0);
            auto rhs = TorusElement::monomial(ctx, win, zero, Rat(1)) +
                       TorusElement::monomial(ctx, wout, zero, Rat(1));
            c.require(lhs == rhs, "FZ exchange relation");
        }
    }

    // A2 exchange iteration is 5-periodic
    {
        auto q = Quiver::make({"1", "2"}, {{"a", "1", "2"}});
        auto ctx = TorusContext::make(q, 8);
        std::vector<TorusElement> cluster = {TorusElement::x_gen(ctx, 0), TorusElement::x_gen(ctx, 1)};
        const auto x1 = cluster[0], x2 = cluster[1];
        auto cur = cluster;
        for (int step = 0; step < 5; ++step) cur = cluster_exchange(cur, step % 2);
        c.require(cur[0] == x2 && cur[1] == x1, "A2 exchange returns after period 5");
    }

    // flop weights C(n,d) assemble to (1+y)^n
    {
        auto q = Quiver::make({"1"}, {});
        auto ctx = TorusContext::make(q, 10);
        for (int n = 1; n <= 5; ++n) {
            FSeries f;
            f.nodes = 1;
            std::int64_t binom = 1;
            for (int d = 0; d <= n; ++d) {
                f.entries[DimVector({d})] = {binom, FProvenance::UserWeight};
                binom = binom * (n - d) / (d + 1);
            }
            auto r = cc_character(ctx, {0}, f, ClassMap::y_identity(1));
            auto onep = TorusElement::one(ctx) + TorusElement::y_gen(ctx, 0);
            c.require(r == onep.pow(n), "binomial weights give (1+y)^" + std::to_string(n));
        }
    }
}

} // namespace

int main() {
    std::printf("acceptance suite\n================\n");
    run({"1 (mutation golden tests)", 1.0}, criterion_mutation);
    run({"2 (separation constants)", 10.0}, criterion_separation);
    run({"3 (inversion cross-validation)", 30.0}, criterion_inversion);
    run({"4 (jacobi certificates)", 5.0}, criterion_jacobi);
    run({"5 (Moser conservation)", 10.0}, criterion_moser);
    run({"6 (Chern-Simons gradients)", 5.0}, criterion_cs);
    run({"7 (F-series)", 30.0}, criterion_fseries);
    run({"8 (torus suite)", 10.0}, criterion_torus);
    if (failures == 0) {
        std::printf("ALL CRITERIA PASSED\n");
        return 0;
    }
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
}
