#include "qp/repmod.hpp"

#include "qp/parallel.hpp"

#include <cmath>

namespace qp {

namespace {

std::int64_t mod_pos(std::int64_t x, std::int64_t p) {
    x %= p;
    return x < 0 ? x + p : x;
}

std::int64_t mod_inv(std::int64_t a, std::int64_t p) {
    std::int64_t t = 0, nt = 1, r = p, nr = mod_pos(a, p);
    while (nr != 0) {
        const std::int64_t qq = r / nr;
        std::tie(t, nt) = std::pair{nt, t - qq * nt};
        std::tie(r, nr) = std::pair{nr, r - qq * nr};
    }
    if (r != 1) throw math_error("element not invertible mod p");
    return mod_pos(t, p);
}

/// reduce v against rref rows (leading-1 pivots); returns true if v lies in
/// the row space
bool in_rowspace(const std::vector<std::vector<std::int64_t>>& rows, const std::vector<int>& pivots,
                 std::vector<std::int64_t> v, std::int64_t p) {
    for (size_t r = 0; r < rows.size(); ++r) {
        const std::int64_t c = v[size_t(pivots[r])];
        if (c == 0) continue;
        for (size_t j = 0; j < v.size(); ++j) v[j] = mod_pos(v[j] - c * rows[r][j], p);
    }
    for (auto x : v)
        if (x != 0) return false;
    return true;
}

} // namespace

CriticalPointReport critical_point_check(const CyclicPotential<CD>& phi, const MatrixRep<CD>& rep,
                                         double h, double tol) {
    if (!same_quiver(phi.quiver(), rep.quiver)) throw input_error("quiver mismatch");
    const Quiver& q = *rep.quiver;
    CriticalPointReport out;
    out.step = h;
    out.tolerance = tol;

    for (int a = 0; a < q.arrow_count(); ++a) {
        auto da = cyclic_derivative(phi, a);
        auto grad = evaluate_series(da, rep, q.tgt(a), q.src(a));
        // d(trace)/d(A_a)_{ij} equals the (j,i) entry of the evaluated derivative
        for (int i = 0; i < rep.mats[size_t(a)].rows; ++i) {
            for (int j = 0; j < rep.mats[size_t(a)].cols; ++j) {
                MatrixRep<CD> plus = rep, minus = rep;
                plus.mats[size_t(a)].at(i, j) += CD(h, 0.0);
                minus.mats[size_t(a)].at(i, j) -= CD(h, 0.0);
                const CD fd = (cs_evaluate(phi, plus) - cs_evaluate(phi, minus)) / CD(2.0 * h, 0.0);
                const CD alg = grad.at(j, i);
                out.max_gradient_discrepancy = std::max(out.max_gradient_discrepancy, std::abs(fd - alg));
                out.gradient_norm = std::max(out.gradient_norm, std::abs(alg));
            }
        }
    }
    out.algebraic_gradient_vanishes = out.gradient_norm <= tol;
    return out;
}

SubspaceList enumerate_subspaces(int n, int w, std::int64_t p) {
    SubspaceList out;
    out.n = n;
    out.w = w;
    out.p = p;
    if (w < 0 || w > n) return out;
    if (w == 0) {
        out.bases.push_back({});
        return out;
    }
    // choose pivot columns, then odometer over the free entries of the RREF
    std::vector<int> piv(static_cast<size_t>(w), 0);
    for (int i = 0; i < w; ++i) piv[size_t(i)] = i;
    auto next_combo = [&]() {
        int i = w - 1;
        while (i >= 0 && piv[size_t(i)] == n - w + i) --i;
        if (i < 0) return false;
        ++piv[size_t(i)];
        for (int j = i + 1; j < w; ++j) piv[size_t(j)] = piv[size_t(j - 1)] + 1;
        return true;
    };
    do {
        std::vector<std::pair<int, int>> free_pos; // (row, col)
        std::vector<bool> is_piv(size_t(n), false);
        for (int r = 0; r < w; ++r) is_piv[size_t(piv[size_t(r)])] = true;
        for (int r = 0; r < w; ++r)
            for (int c = piv[size_t(r)] + 1; c < n; ++c)
                if (!is_piv[size_t(c)]) free_pos.push_back({r, c});
        std::vector<std::int64_t> vals(free_pos.size(), 0);
        while (true) {
            std::vector<std::vector<std::int64_t>> rows(size_t(w), std::vector<std::int64_t>(size_t(n), 0));
            for (int r = 0; r < w; ++r) rows[size_t(r)][size_t(piv[size_t(r)])] = 1;
            for (size_t f = 0; f < free_pos.size(); ++f)
                rows[size_t(free_pos[f].first)][size_t(free_pos[f].second)] = vals[f];
            out.bases.push_back(std::move(rows));
            // odometer
            size_t f = 0;
            while (f < vals.size() && ++vals[f] == p) vals[f++] = 0;
            if (f == vals.size() && !vals.empty()) break;
            if (vals.empty()) break;
        }
    } while (next_combo());
    return out;
}

double gaussian_binomial_estimate(int n, int w, std::int64_t p) {
    if (w < 0 || w > n) return 0.0;
    double r = 1.0;
    for (int i = 0; i < w; ++i)
        r *= (std::pow(double(p), n - i) - 1.0) / (std::pow(double(p), i + 1) - 1.0);
    return r;
}

namespace {

struct NodeSubspaces {
    SubspaceList list;
    std::vector<std::vector<int>> pivots; // per subspace
};

NodeSubspaces node_subspaces(int n, int w, std::int64_t p) {
    NodeSubspaces s;
    s.list = enumerate_subspaces(n, w, p);
    for (const auto& rows : s.list.bases) {
        std::vector<int> piv;
        for (const auto& row : rows) {
            int c = 0;
            while (c < int(row.size()) && row[size_t(c)] == 0) ++c;
            piv.push_back(c);
        }
        s.pivots.push_back(std::move(piv));
    }
    return s;
}

std::uint64_t count_stable_tuples(const MatrixRep<std::int64_t>& rep, std::int64_t p,
                                  const std::vector<NodeSubspaces>& per_node) {
    const Quiver& q = *rep.quiver;
    const int n = q.node_count();
    std::vector<size_t> idx(size_t(n), 0);
    std::uint64_t count = 0;
    while (true) {
        bool ok = true;
        for (int a = 0; a < q.arrow_count() && ok; ++a) {
            const auto& W_src = per_node[size_t(q.src(a))].list.bases[idx[size_t(q.src(a))]];
            const auto& W_tgt = per_node[size_t(q.tgt(a))].list.bases[idx[size_t(q.tgt(a))]];
            const auto& piv_tgt = per_node[size_t(q.tgt(a))].pivots[idx[size_t(q.tgt(a))]];
            const auto& m = rep.mats[size_t(a)];
            for (const auto& b : W_src) {
                std::vector<std::int64_t> img(size_t(m.rows), 0);
                for (int i = 0; i < m.rows; ++i) {
                    std::int64_t acc = 0;
                    for (int j = 0; j < m.cols; ++j) acc += mod_pos(m.at(i, j), p) * b[size_t(j)];
                    img[size_t(i)] = mod_pos(acc, p);
                }
                if (!in_rowspace(W_tgt, piv_tgt, std::move(img), p)) { ok = false; break; }
            }
        }
        if (ok) ++count;
        int node = 0;
        while (node < n && ++idx[size_t(node)] == per_node[size_t(node)].list.bases.size())
            idx[size_t(node++)] = 0;
        if (node == n) break;
    }
    return count;
}

} // namespace

std::uint64_t count_submodules(const MatrixRep<std::int64_t>& rep, std::int64_t p,
                               const DimVector& quotient_dim, double budget) {
    const Quiver& q = *rep.quiver;
    if (quotient_dim.size() != q.node_count()) throw input_error("dimension vector length mismatch");
    double expected = 1.0;
    std::vector<NodeSubspaces> per_node;
    for (int i = 0; i < q.node_count(); ++i) {
        const int w = int(rep.dim[i] - quotient_dim[i]);
        if (w < 0 || w > int(rep.dim[i])) return 0;
        expected *= gaussian_binomial_estimate(int(rep.dim[i]), w, p);
        if (expected > budget)
            throw math_error("count_submodules: subspace enumeration exceeds the budget");
        per_node.push_back(node_subspaces(int(rep.dim[i]), w, p));
    }
    return count_stable_tuples(rep, p, per_node);
}

std::uint64_t count_all_stable_tuples(const MatrixRep<std::int64_t>& rep, std::int64_t p, double budget) {
    const Quiver& q = *rep.quiver;
    double expected = 1.0;
    std::vector<NodeSubspaces> per_node;
    for (int i = 0; i < q.node_count(); ++i) {
        NodeSubspaces all;
        all.list.n = int(rep.dim[i]);
        all.list.p = p;
        for (int w = 0; w <= int(rep.dim[i]); ++w) {
            auto part = node_subspaces(int(rep.dim[i]), w, p);
            for (size_t s = 0; s < part.list.bases.size(); ++s) {
                all.list.bases.push_back(std::move(part.list.bases[s]));
                all.pivots.push_back(std::move(part.pivots[s]));
            }
        }
        expected *= double(all.list.bases.size());
        if (expected > budget) throw math_error("stable-tuple enumeration exceeds the budget");
        per_node.push_back(std::move(all));
    }
    return count_stable_tuples(rep, p, per_node);
}

FSeries fseries(const MatrixRep<Rat>& rep, std::span<const std::int64_t> primes, double budget) {
    if (primes.size() < 3)
        throw input_error("fseries needs at least three primes (two validate the fit)");
    const Quiver& q = *rep.quiver;
    FSeries out;
    out.nodes = q.node_count();

    // enumerate dimension vectors v <= dim componentwise
    std::vector<DimVector> all_v;
    DimVector v = DimVector::zeros(q.node_count());
    while (true) {
        all_v.push_back(v);
        int i = 0;
        while (i < q.node_count() && ++v[i] > rep.dim[i]) v[i++] = 0;
        if (i == q.node_count()) break;
    }

    // reductions mod p, shared across dimension vectors
    std::vector<MatrixRep<std::int64_t>> reduced;
    for (auto p : primes) {
        MatrixRep<std::int64_t> rp;
        rp.quiver = rep.quiver;
        rp.dim = rep.dim;
        for (const auto& m : rep.mats) {
            Mat<std::int64_t> mi(m.rows, m.cols);
            for (size_t i = 0; i < m.a.size(); ++i) {
                const Rat& r = m.a[i];
                if (r.den() % p == 0)
                    throw math_error("fseries: denominator not invertible mod " + std::to_string(p));
                mi.a[i] = mod_pos(mod_pos(r.num(), p) * mod_inv(r.den(), p), p);
            }
            rp.mats.push_back(std::move(mi));
        }
        reduced.push_back(std::move(rp));
    }

    // counting parallelizes over (dimension vector, prime) cells
    std::vector<std::vector<Rat>> all_counts(all_v.size(),
                                             std::vector<Rat>(primes.size(), Rat(0)));
    parallel_for(all_v.size() * primes.size(), [&](std::size_t cell) {
        const std::size_t vi = cell / primes.size();
        const std::size_t pi = cell % primes.size();
        all_counts[vi][pi] = Rat(
            std::int64_t(count_submodules(reduced[pi], primes[pi], all_v[vi], budget)));
    });

    for (size_t vi = 0; vi < all_v.size(); ++vi) {
        const auto& vq = all_v[vi];
        const auto& counts = all_counts[vi];
        // minimal-degree interpolating polynomial through (p_i, count_i)
        const int m = int(primes.size());
        std::vector<Rat> poly(size_t(m), Rat(0));
        for (int i = 0; i < m; ++i) {
            std::vector<Rat> basis = {Rat(1)};
            Rat denom(1);
            for (int j = 0; j < m; ++j) {
                if (j == i) continue;
                std::vector<Rat> nb(basis.size() + 1, Rat(0));
                for (size_t c = 0; c < basis.size(); ++c) {
                    nb[c] -= Rat(primes[size_t(j)]) * basis[c];
                    nb[c + 1] += basis[c];
                }
                basis = std::move(nb);
                denom *= Rat(primes[size_t(i)]) - Rat(primes[size_t(j)]);
            }
            for (size_t c = 0; c < basis.size(); ++c) poly[c] += counts[size_t(i)] / denom * basis[c];
        }
        int deg = -1;
        for (int c = m - 1; c >= 0; --c)
            if (!poly[size_t(c)].is_zero()) { deg = c; break; }
        // two extra primes beyond deg+1 points must confirm the polynomial
        if (deg + 1 > m - 2) {
            out.rejected.push_back(vq);
            continue;
        }
        Rat chi(0);
        for (int c = 0; c <= deg; ++c) chi += poly[size_t(c)];
        if (!chi.is_integer()) {
            out.rejected.push_back(vq);
            continue;
        }
        out.entries[vq] = {chi.num(), FProvenance::FiniteFieldCount};
    }
    return out;
}

MatrixRep<Rat> jacobi_module(const JacobiTruncation<Rat>& jt, int node) {
    const Quiver& q = *jt.quiver();
    if (node < 0 || node >= q.node_count()) throw input_error("unknown node");
    auto cert = jt.determinacy_bound();
    if (!cert.r.has_value())
        throw math_error("jacobi_module: no finiteness certificate at this truncation");

    // quotient basis of paths starting at `node`, grouped by target
    std::vector<std::vector<std::pair<int, PathKey>>> basis(size_t(q.node_count()));
    std::map<std::pair<int, std::pair<int, PathKey>>, int> index; // (tgt, coord) -> position
    DimVector dim = DimVector::zeros(q.node_count());
    for (int j = 0; j < q.node_count(); ++j) {
        for (auto coord : jt.quotient_basis(node, j)) {
            index[{j, coord}] = int(basis[size_t(j)].size());
            basis[size_t(j)].push_back(coord);
        }
        dim[j] = std::int64_t(basis[size_t(j)].size());
    }

    std::vector<Mat<Rat>> mats;
    for (int a = 0; a < q.arrow_count(); ++a) {
        Mat<Rat> m(int(dim[q.tgt(a)]), int(dim[q.src(a)]));
        for (int col = 0; col < int(dim[q.src(a)]); ++col) {
            auto [d, key] = basis[size_t(q.src(a))][size_t(col)];
            if (d + 1 > jt.trunc())
                throw math_error("jacobi_module: quotient basis reaches the truncation boundary");
            // append the arrow and reduce modulo the ideal
            const PathKey nk = d == 0 ? PathKey(a) : concat_keys(q, key, 1, PathKey(a));
            typename JacobiTruncation<Rat>::Echelon::Row row = {{{d + 1, nk}, Rat(1)}};
            auto rem = jt.reduce(node, q.tgt(a), std::move(row));
            for (const auto& [coord, c] : rem) {
                auto it = index.find({q.tgt(a), coord});
                if (it == index.end())
                    throw math_error("jacobi_module: reduction left a non-basis coordinate");
                m.at(it->second, col) = c;
            }
        }
        mats.push_back(std::move(m));
    }
    return MatrixRep<Rat>::make(jt.quiver(), std::move(dim), std::move(mats));
}

} // namespace qp
