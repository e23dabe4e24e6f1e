#include <doctest.h>

#include "helpers.hpp"
#include "qp/repmod.hpp"

using namespace qp;
using namespace qptest;

namespace {

Mat<CD> cmat(int r, int c, std::initializer_list<double> entries) {
    Mat<CD> m(r, c);
    auto it = entries.begin();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.at(i, j) = CD(*it++, 0.0);
    return m;
}

MatrixRep<CD> random_nilpotent(std::mt19937_64& rng, const QuiverPtr& q, const DimVector& dim) {
    // entries only from lower to strictly higher global basis position, which
    // forces nilpotency of the total operator
    std::uniform_real_distribution<double> u(-1.0, 1.0);
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
}

} // namespace

TEST_CASE("cs_evaluate") {
    SUBCASE("scalar 3-cycle trace is the product") {
        auto q = three_cycle();
        auto phi = cyclic_class(series_cast<CD>(mono(q, 4, {0, 1, 2})));
        std::vector<Mat<CD>> mats = {cmat(1, 1, {2.0}), cmat(1, 1, {3.0}), cmat(1, 1, {5.0})};
        auto rep = MatrixRep<CD>::make(q, DimVector({1, 1, 1}), std::move(mats));
        CHECK(std::abs(cs_evaluate(phi, rep) - CD(30.0, 0.0)) < 1e-14);
        CHECK(rep.nilpotent() == false);
    }
    SUBCASE("zero representation evaluates to zero") {
        auto q = one_loop();
        auto phi = cyclic_class(series_cast<CD>(mono(q, 4, {0, 0, 0})));
        auto rep = MatrixRep<CD>::make(q, DimVector({2}), {Mat<CD>(2, 2)});
        CHECK(std::abs(cs_evaluate(phi, rep)) == 0.0);
        CHECK(rep.nilpotent());
    }
    SUBCASE("nilpotent Jordan block kills t^3") {
        auto q = one_loop();
        auto phi = cyclic_class(series_cast<CD>(mono(q, 4, {0, 0, 0})));
        auto rep = MatrixRep<CD>::make(q, DimVector({2}), {cmat(2, 2, {0, 1, 0, 0})});
        CHECK(rep.nilpotent());
        CHECK(std::abs(cs_evaluate(phi, rep)) < 1e-15);
    }
    SUBCASE("invariance under simultaneous base change") {
        std::mt19937_64 rng(3);
        auto q = three_cycle();
        auto phi = cyclic_class(series_cast<CD>(mono(q, 6, {0, 1, 2}) + mono(q, 6, {0, 1, 2, 0, 1, 2}, Rat(2))));
        for (int it = 0; it < 5; ++it) {
            auto rep = random_nilpotent(rng, q, DimVector({2, 2, 2}));
            std::uniform_real_distribution<double> u(-0.5, 0.5);
            std::vector<Mat<CD>> g, ginv;
            for (int i = 0; i < 3; ++i) {
                Mat<CD> gi = Mat<CD>::identity(2);
                gi.at(0, 1) = CD(u(rng), u(rng));
                Mat<CD> gv = Mat<CD>::identity(2);
                gv.at(0, 1) = -gi.at(0, 1);
                g.push_back(gi);
                ginv.push_back(gv);
            }
            MatrixRep<CD> conj = rep;
            for (int a = 0; a < 3; ++a)
                conj.mats[size_t(a)] = g[size_t(q->tgt(a))] * rep.mats[size_t(a)] * ginv[size_t(q->src(a))];
            CHECK(std::abs(cs_evaluate(phi, rep) - cs_evaluate(phi, conj)) < 1e-12);
        }
    }
}

TEST_CASE("critical point check") {
    auto ql = one_loop();
    SUBCASE("t^3 at the 2x2 Jordan block is critical with matching gradients") {
        auto phi = cyclic_class(series_cast<CD>(mono(ql, 4, {0, 0, 0})));
        auto rep = MatrixRep<CD>::make(ql, DimVector({2}), {cmat(2, 2, {0, 1, 0, 0})});
        auto r = critical_point_check(phi, rep, 1e-5, 1e-6);
        CHECK(r.max_gradient_discrepancy < 1e-6);
        CHECK(r.algebraic_gradient_vanishes); // D_t(t^3) = 3t^2 and A^2 = 0
    }
    SUBCASE("random non-critical points still match gradients, O(h^2) decay") {
        std::mt19937_64 rng(9);
        auto q = three_cycle();
        auto phi = cyclic_class(series_cast<CD>(mono(q, 4, {0, 1, 2})));
        auto rep = random_nilpotent(rng, q, DimVector({2, 2, 1}));
        auto r1 = critical_point_check(phi, rep, 1e-3, 1e-6);
        auto r2 = critical_point_check(phi, rep, 5e-4, 1e-6);
        CHECK(r1.max_gradient_discrepancy < 1e-5);
        CHECK(!r1.algebraic_gradient_vanishes);
        if (r2.max_gradient_discrepancy > 1e-12)
            CHECK(r1.max_gradient_discrepancy / r2.max_gradient_discrepancy > 2.0);
    }
}

TEST_CASE("subspace enumeration counts Gaussian binomials") {
    CHECK(enumerate_subspaces(2, 1, 2).bases.size() == 3);  // lines in F_2^2
    CHECK(enumerate_subspaces(2, 1, 3).bases.size() == 4);  // q + 1
    CHECK(enumerate_subspaces(4, 2, 2).bases.size() == 35); // [4 choose 2]_2
    CHECK(enumerate_subspaces(3, 0, 5).bases.size() == 1);
    CHECK(enumerate_subspaces(3, 3, 5).bases.size() == 1);
    CHECK(gaussian_binomial_estimate(4, 2, 2) == doctest::Approx(35.0));
}

TEST_CASE("count_submodules") {
    auto q = one_loop();
    SUBCASE("F_2[t]/t^2 has exactly one line submodule") {
        Mat<std::int64_t> m(2, 2);
        m.at(0, 1) = 1;
        auto rep = MatrixRep<std::int64_t>::make(q, DimVector({2}), {m});
        CHECK(count_submodules(rep, 2, DimVector({1})) == 1); // only span(t)
        CHECK(count_submodules(rep, 2, DimVector({0})) == 1);
        CHECK(count_submodules(rep, 2, DimVector({2})) == 1);
    }
    SUBCASE("semisimple dim-2 module has q+1 lines") {
        auto rep = MatrixRep<std::int64_t>::make(q, DimVector({2}), {Mat<std::int64_t>(2, 2)});
        CHECK(count_submodules(rep, 2, DimVector({1})) == 3);
        CHECK(count_submodules(rep, 5, DimVector({1})) == 6);
        CHECK(count_submodules(rep, 7, DimVector({1})) == 8);
    }
    SUBCASE("partition check: per-dimension counts sum to the global count") {
        auto q3 = three_cycle();
        // dims (2,1,2): a is 1x2, b is 2x1, c is 2x2
        Mat<std::int64_t> ma(1, 2), mb(2, 1), mc(2, 2);
        ma.at(0, 0) = 1;
        mb.at(0, 0) = 1;
        mc.at(1, 0) = 1;
        auto rep = MatrixRep<std::int64_t>::make(q3, DimVector({2, 1, 2}), {ma, mb, mc});
        for (std::int64_t p : {2, 3}) {
            std::uint64_t total = 0;
            DimVector v = DimVector::zeros(3);
            while (true) {
                total += count_submodules(rep, p, v);
                int i = 0;
                while (i < 3 && ++v[i] > rep.dim[i]) v[i++] = 0;
                if (i == 3) break;
            }
            CHECK(total == count_all_stable_tuples(rep, p));
        }
    }
    SUBCASE("budget guard") {
        auto rep = MatrixRep<std::int64_t>::make(q, DimVector({6}), {Mat<std::int64_t>(6, 6)});
        CHECK_THROWS_AS(count_submodules(rep, 101, DimVector({3}), 1e4), math_error);
    }
}

TEST_CASE("fseries") {
    auto q = one_loop();
    const std::int64_t primes_arr[] = {2, 3, 5, 7};
    std::span<const std::int64_t> primes(primes_arr);
    SUBCASE("Z[t]/t^n gives 1 + y + ... + y^n") {
        for (int n = 1; n <= 4; ++n) {
            Mat<Rat> m(n, n);
            for (int i = 0; i + 1 < n; ++i) m.at(i, i + 1) = Rat(1);
            auto rep = MatrixRep<Rat>::make(q, DimVector({n}), {m});
            auto fs = fseries(rep, primes);
            CHECK(fs.rejected.empty());
            for (int d = 0; d <= n; ++d) CHECK(fs.at(DimVector({d})) == 1);
        }
    }
    SUBCASE("zero module") {
        auto rep = MatrixRep<Rat>::make(q, DimVector({0}), {Mat<Rat>(0, 0)});
        auto fs = fseries(rep, primes);
        CHECK(fs.at(DimVector({0})) == 1);
        CHECK(fs.entries.size() == 1);
    }
    SUBCASE("node-semisimple dim-2 module gives 1 + 2y + y^2") {
        auto rep = MatrixRep<Rat>::make(q, DimVector({2}), {Mat<Rat>(2, 2)});
        auto fs = fseries(rep, primes);
        CHECK(fs.at(DimVector({0})) == 1);
        CHECK(fs.at(DimVector({1})) == 2); // chi(P^1)
        CHECK(fs.at(DimVector({2})) == 1);
    }
    SUBCASE("holdout: the fitted polynomial matches an untested prime") {
        Mat<Rat> m(3, 3);
        m.at(0, 1) = Rat(1);
        m.at(1, 2) = Rat(1);
        auto rep = MatrixRep<Rat>::make(q, DimVector({3}), {m});
        auto fs = fseries(rep, primes);
        MatrixRep<std::int64_t> rp;
        rp.quiver = rep.quiver;
        rp.dim = rep.dim;
        Mat<std::int64_t> mi(3, 3);
        mi.at(0, 1) = 1;
        mi.at(1, 2) = 1;
        rp.mats.push_back(mi);
        for (int d = 0; d <= 3; ++d)
            CHECK(count_submodules(rp, 11, DimVector({d})) == std::uint64_t(fs.at(DimVector({d}))));
    }
}

TEST_CASE("jacobi_module") {
    auto q = one_loop();
    SUBCASE("t^3 gives the 2-dimensional Jordan module") {
        auto phi = cyclic_class(mono(q, 6, {0, 0, 0}));
        auto jt = jacobi_truncation(q, phi, 6);
        auto rep = jacobi_module(jt, 0);
        CHECK(rep.dim == DimVector({2}));
        CHECK(rep.mats[0].at(0, 0) == Rat(0));
        CHECK(rep.mats[0].at(0, 1) == Rat(0));
        CHECK(rep.mats[0].at(1, 0) == Rat(1)); // e -> t
        CHECK(rep.mats[0].at(1, 1) == Rat(0)); // t -> t^2 = 0 in the quotient
        const std::int64_t primes_arr[] = {2, 3, 5, 7};
        auto fs = fseries(rep, std::span<const std::int64_t>(primes_arr));
        for (int d = 0; d <= 2; ++d) CHECK(fs.at(DimVector({d})) == 1);
    }
    SUBCASE("3-cycle abc: P_1 from the path-rewriting oracle") {
        auto q3 = three_cycle();
        auto phi = cyclic_class(mono(q3, 6, {0, 1, 2}));
        auto jt = jacobi_truncation(q3, phi, 6);
        auto rep = jacobi_module(jt, 0);
        // paths from node 1 avoiding {ab, bc, ca}: e_1 and a
        CHECK(rep.dim == DimVector({1, 1, 0}));
        CHECK(rep.mats[0].at(0, 0) == Rat(1)); // e_1 -> a
        CHECK(rep.nilpotent());
    }
    SUBCASE("certificate r = 1 gives the one-dimensional module") {
        auto phi = cyclic_class(mono(q, 4, {0, 0}));
        auto jt = jacobi_truncation(q, phi, 4);
        CHECK(jt.certify_m_power(1));
        auto rep = jacobi_module(jt, 0);
        CHECK(rep.dim == DimVector({1}));
        CHECK(rep.mats[0].at(0, 0) == Rat(0));
    }
    SUBCASE("no certificate, no module") {
        auto jt = jacobi_truncation(q, CyclicPotential<Rat>(q, 4), 4);
        CHECK_THROWS_AS(jacobi_module(jt, 0), math_error);
    }
}
