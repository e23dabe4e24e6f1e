#pragma once

#include "qp/endo.hpp"
#include "qp/series.hpp"

#include <map>
#include <optional>

namespace qp {

namespace detail {

/// Sparse row echelon over coordinates (degree, path key), ordered by degree
/// first. Leading coordinates are normalized to 1; insertion keeps the basis
/// fully reduced, so reduce() yields canonical remainders.
template <class C>
class RowEchelon {
public:
    using Coord = std::pair<int, PathKey>;
    using Row = std::vector<std::pair<Coord, C>>; // sorted by coord

    /// Reduce `r` against the basis in place; returns the fully reduced row.
    Row reduce(Row r) const {
        Row out;
        while (!r.empty()) {
            auto lead = r.front().first;
            auto it = rows_.find(lead);
            if (it == rows_.end()) {
                out.push_back(r.front());
                r.erase(r.begin());
                continue;
            }
            const C f = r.front().second;
            r = axpy_(r, it->second, -f);
        }
        return out;
    }

    /// Insert a row (after reduction); returns the pivot coordinate if the
    /// row was independent.
    std::optional<Coord> insert(Row r) {
        r = reduce(std::move(r));
        if (r.empty()) return std::nullopt;
        const C inv = coeff_traits<C>::one() / r.front().second;
        for (auto& [c, v] : r) v = v * inv;
        const Coord lead = r.front().first;
        // back-substitute into existing rows to stay fully reduced
        for (auto& [l, row] : rows_) {
            auto pos = std::lower_bound(row.begin(), row.end(), lead,
                                        [](const auto& e, const Coord& c) { return e.first < c; });
            if (pos != row.end() && pos->first == lead) {
                const C f = pos->second;
                row = axpy_(row, r, -f);
            }
        }
        rows_.emplace(lead, std::move(r));
        return lead;
    }

    bool has_pivot(const Coord& c) const { return rows_.count(c) != 0; }
    std::size_t rank() const { return rows_.size(); }
    const std::map<Coord, Row>& rows() const { return rows_; }

    int pivots_at_degree(int d) const {
        int n = 0;
        for (auto it = rows_.lower_bound({d, 0}); it != rows_.end() && it->first.first == d; ++it) ++n;
        return n;
    }

private:
    static Row axpy_(const Row& a, const Row& b, C f) {
        Row out;
        out.reserve(a.size() + b.size());
        size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
                out.push_back(a[i++]);
            } else if (i == a.size() || b[j].first < a[i].first) {
                C v = b[j].second * f;
                if (!coeff_traits<C>::is_zero(v)) out.push_back({b[j].first, v});
                ++j;
            } else {
                C v = a[i].second + b[j].second * f;
                if (!coeff_traits<C>::is_zero(v)) out.push_back({a[i].first, v});
                ++i;
                ++j;
            }
        }
        return out;
    }

    std::map<Coord, Row> rows_; // pivot coord -> reduced row
};

} // namespace detail

struct FinitenessCertificate {
    std::optional<int> r;                 // least degree with m^r contained in the ideal
    std::optional<int> determinacy_bound; // r + 1 when r is present
    std::int64_t total_quotient_dim = 0;  // summed over degrees <= truncation
    bool dimension_exact = false;         // true when a certificate pins the total
};

/// Graded truncation of the two-sided ideal generated by the cyclic
/// derivatives of a potential: row-reduced bases per (source,target) block
/// and the per-degree quotient dimensions of the Jacobi algebra.
///
/// All linear algebra is exact row reduction, blocked by source and target
/// node; the term order is degree-ascending, so the pivot count at degree d
/// measures the leading space of the ideal and q_d = #paths_d - pivots_d is
/// the degree-d dimension of the associated graded quotient.
template <class C>
class JacobiTruncation {
public:
    static_assert(coeff_traits<C>::is_exact, "Jacobi truncations require exact coefficients");
    using Echelon = detail::RowEchelon<C>;

    JacobiTruncation(QuiverPtr q, CyclicPotential<C> phi, int trunc);

    const QuiverPtr& quiver() const { return q_; }
    const CyclicPotential<C>& potential() const { return phi_; }
    int trunc() const { return trunc_; }

    const std::vector<TruncSeries<C>>& generators() const { return gens_; }
    const Echelon& block(int s, int t) const { return blocks_[size_t(s) * size_t(n_) + size_t(t)]; }

    std::int64_t path_count(int d) const { return path_count_[size_t(d)]; }
    std::int64_t quotient_dim(int d) const { return quotient_dim_[size_t(d)]; }
    const std::vector<std::int64_t>& quotient_dims() const { return quotient_dim_; }

    /// True iff every length-r path lies in the degree-r leading space of the
    /// ideal. Through the Nakayama bootstrap for the closed ideal, a true
    /// answer certifies the untruncated inclusion m^r in J.
    bool certify_m_power(int r) const {
        if (r < 0 || r > trunc_) throw input_error("certify_m_power: degree out of range");
        return quotient_dim_[size_t(r)] == 0 && r >= 1;
    }

    FinitenessCertificate determinacy_bound() const {
        FinitenessCertificate c;
        for (int r = 1; r <= trunc_; ++r)
            if (certify_m_power(r)) {
                c.r = r;
                c.determinacy_bound = r + 1;
                break;
            }
        for (int d = 0; d <= trunc_; ++d) c.total_quotient_dim += quotient_dim_[size_t(d)];
        c.dimension_exact = c.r.has_value();
        return c;
    }

    /// Canonical remainder of a block vector modulo the ideal truncation.
    typename Echelon::Row reduce(int s, int t, typename Echelon::Row row) const {
        return blocks_[size_t(s) * size_t(n_) + size_t(t)].reduce(std::move(row));
    }

    /// Non-pivot coordinates of one block (the quotient basis), degree order.
    std::vector<typename Echelon::Coord> quotient_basis(int s, int t) const;

private:
    QuiverPtr q_;
    CyclicPotential<C> phi_;
    int trunc_ = 0;
    int n_ = 0;
    std::vector<TruncSeries<C>> gens_;
    std::vector<Echelon> blocks_;
    std::vector<std::int64_t> path_count_;
    std::vector<std::int64_t> quotient_dim_;
    std::vector<std::vector<PathKey>> paths_; // all composable paths per degree
};

template <class C>
JacobiTruncation<C> jacobi_truncation(QuiverPtr q, const CyclicPotential<C>& phi, int trunc) {
    return JacobiTruncation<C>(std::move(q), phi.trunc() == trunc ? phi : phi.extended(trunc).jet(trunc), trunc);
}

struct QuasiHomogeneityReport {
    bool holds_at_truncation = false;
    // True when a finiteness certificate makes the truncated answer exact.
    // A negative answer is always reported truncation-level only.
    bool definitive = false;
};

template <class C>
QuasiHomogeneityReport quasi_homogeneous_test(const JacobiTruncation<C>& jt);

struct TangentSolveFailure {
    int failing_degree = -1;
};

template <class C>
struct TangentSolveResult {
    std::optional<std::vector<TruncSeries<C>>> xi; // arrow-indexed when solvable
    TangentSolveFailure failure;                   // set when infeasible at truncation
};

/// Solve pi(sum_a xi(a) * D_a theta) = target for an arrow family xi with
/// ord(xi(a)) >= 1, degree by degree at the shared truncation. Free unknowns
/// are pinned to zero under the deterministic pivoting order.
template <class C>
TangentSolveResult<C> tangent_solve(const CyclicPotential<C>& theta, const CyclicPotential<C>& target);

// implementation ---------------------------------------------------------------

template <class C>
JacobiTruncation<C>::JacobiTruncation(QuiverPtr quiver_in, CyclicPotential<C> phi, int trunc)
    : q_(std::move(quiver_in)), phi_(std::move(phi)), trunc_(trunc), n_(q_->node_count()) {
    if (!same_quiver(q_, phi_.quiver())) throw input_error("potential on a different quiver");
    if (phi_.trunc() != trunc_) throw input_error("potential truncation mismatch");
    const Quiver& q = *q_;
    blocks_.resize(size_t(n_) * size_t(n_));
    paths_ = enumerate_paths(q, trunc_);
    path_count_.assign(size_t(trunc_) + 1, 0);
    for (int d = 0; d <= trunc_; ++d) path_count_[size_t(d)] = std::int64_t(paths_[size_t(d)].size());

    for (int a = 0; a < q.arrow_count(); ++a)
        gens_.push_back(cyclic_derivative(phi_, a).extended(trunc_));

    // spanning elements u * g_a * v over all composable u, v within truncation
    for (int a = 0; a < q.arrow_count(); ++a) {
        const auto& g = gens_[size_t(a)];
        const int og = g.ord();
        if (og > trunc_) continue;
        const int ta = q.tgt(a), sa = q.src(a);
        for (int du = 0; du + og <= trunc_; ++du) {
            for (PathKey ku : paths_[size_t(du)]) {
                if (path_tgt(q, du, ku) != ta) continue;
                for (int dv = 0; du + og + dv <= trunc_; ++dv) {
                    for (PathKey kv : paths_[size_t(dv)]) {
                        if (path_src(q, dv, kv) != sa) continue;
                        typename Echelon::Row row;
                        for (int e = og; e + du + dv <= trunc_; ++e) {
                            for (const auto& [kg, cg] : g.terms(e)) {
                                PathKey kk = du == 0 ? kg : concat_keys(q, ku, e, kg);
                                if (dv > 0) kk = concat_keys(q, kk, dv, kv);
                                row.push_back({{du + e + dv, kk}, cg});
                            }
                        }
                        if (row.empty()) continue;
                        std::sort(row.begin(), row.end(),
                                  [](const auto& x, const auto& y) { return x.first < y.first; });
                        const int bs = du == 0 ? ta : path_src(q, du, ku);
                        const int bt = dv == 0 ? sa : path_tgt(q, dv, kv);
                        blocks_[size_t(bs) * size_t(n_) + size_t(bt)].insert(std::move(row));
                    }
                }
            }
        }
    }

    quotient_dim_.assign(size_t(trunc_) + 1, 0);
    for (int d = 0; d <= trunc_; ++d) {
        std::int64_t pivots = 0;
        for (const auto& b : blocks_) pivots += b.pivots_at_degree(d);
        quotient_dim_[size_t(d)] = path_count_[size_t(d)] - pivots;
    }
}

template <class C>
std::vector<typename JacobiTruncation<C>::Echelon::Coord>
JacobiTruncation<C>::quotient_basis(int s, int t) const {
    std::vector<typename Echelon::Coord> out;
    const auto& blk = blocks_[size_t(s) * size_t(n_) + size_t(t)];
    for (int d = 0; d <= trunc_; ++d) {
        for (PathKey k : paths_[size_t(d)]) {
            if (path_src(*q_, d, k) != s || path_tgt(*q_, d, k) != t) continue;
            if (!blk.has_pivot({d, k})) out.push_back({d, k});
        }
    }
    return out;
}

template <class C>
QuasiHomogeneityReport quasi_homogeneous_test(const JacobiTruncation<C>& jt) {
    const Quiver& q = *jt.quiver();
    const int N = jt.trunc();
    // span of the cyclic projections of the ideal elements u * g_a (left
    // multiples suffice: pi(u g v) = pi(v u g))
    detail::RowEchelon<C> span;
    auto paths = enumerate_paths(q, N);
    for (int a = 0; a < q.arrow_count(); ++a) {
        const auto& g = jt.generators()[size_t(a)];
        const int og = g.ord();
        if (og > N) continue;
        for (int du = 0; du + og <= N; ++du) {
            for (PathKey ku : paths[size_t(du)]) {
                if (path_tgt(q, du, ku) != q.tgt(a)) continue;
                if (du > 0 && path_src(q, du, ku) != q.src(a)) continue; // u g must close up
                if (du == 0 && q.tgt(a) != q.src(a)) continue;           // e_i g closes only for loops
                typename detail::RowEchelon<C>::Row row;
                std::vector<std::tuple<int, PathKey, C>> acc;
                for (int e = og; e + du <= N; ++e)
                    for (const auto& [kg, cg] : g.terms(e)) {
                        PathKey kk = du == 0 ? kg : concat_keys(q, ku, e, kg);
                        acc.emplace_back(du + e, canonical_rotation(q, du + e, kk), cg);
                    }
                std::sort(acc.begin(), acc.end(), [](const auto& u, const auto& v) {
                    return std::pair{std::get<0>(u), std::get<1>(u)} <
                           std::pair{std::get<0>(v), std::get<1>(v)};
                });
                for (auto& [d, k, c] : acc) {
                    if (!row.empty() && row.back().first == std::pair{d, k})
                        row.back().second += c;
                    else
                        row.push_back({{d, k}, c});
                }
                std::erase_if(row, [](const auto& e) { return coeff_traits<C>::is_zero(e.second); });
                if (!row.empty()) span.insert(std::move(row));
            }
        }
    }
    typename detail::RowEchelon<C>::Row phi_row;
    jt.potential().for_each([&](int d, PathKey k, const C& c) { phi_row.push_back({{d, k}, c}); });
    std::sort(phi_row.begin(), phi_row.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    QuasiHomogeneityReport rep;
    rep.holds_at_truncation = span.reduce(std::move(phi_row)).empty();
    rep.definitive = rep.holds_at_truncation && jt.determinacy_bound().r.has_value();
    return rep;
}

template <class C>
TangentSolveResult<C> tangent_solve(const CyclicPotential<C>& theta, const CyclicPotential<C>& target) {
    if (!same_quiver(theta.quiver(), target.quiver()) || theta.trunc() != target.trunc())
        throw input_error("tangent_solve: mismatched quiver or truncation");
    const Quiver& q = *theta.quiver();
    const int N = theta.trunc();

    std::vector<TruncSeries<C>> gens;
    for (int a = 0; a < q.arrow_count(); ++a) gens.push_back(cyclic_derivative(theta, a).extended(N));

    // columns: unknown path coefficients of xi(a); rows: cyclic coordinates
    struct Col {
        int arrow;
        int deg;
        PathKey key;
        std::vector<std::pair<std::pair<int, PathKey>, C>> entries;
    };
    std::vector<Col> cols;
    auto paths = enumerate_paths(q, N);
    for (int a = 0; a < q.arrow_count(); ++a) {
        const auto& g = gens[size_t(a)];
        const int og = g.ord();
        if (og > N) continue;
        for (int du = 1; du + og <= N; ++du) {
            for (PathKey ku : paths[size_t(du)]) {
                if (path_src(q, du, ku) != q.src(a) || path_tgt(q, du, ku) != q.tgt(a)) continue;
                Col col{a, du, ku, {}};
                std::vector<std::tuple<int, PathKey, C>> acc;
                for (int e = og; e + du <= N; ++e)
                    for (const auto& [kg, cg] : g.terms(e))
                        acc.emplace_back(du + e, canonical_rotation(q, du + e, concat_keys(q, ku, e, kg)), cg);
                std::sort(acc.begin(), acc.end(), [](const auto& u, const auto& v) {
                    return std::pair{std::get<0>(u), std::get<1>(u)} <
                           std::pair{std::get<0>(v), std::get<1>(v)};
                });
                for (auto& [d, k, c] : acc) {
                    if (!col.entries.empty() && col.entries.back().first == std::pair{d, k})
                        col.entries.back().second += c;
                    else
                        col.entries.push_back({{d, k}, c});
                }
                std::erase_if(col.entries, [](const auto& e) { return coeff_traits<C>::is_zero(e.second); });
                if (!col.entries.empty()) cols.push_back(std::move(col));
            }
        }
    }

    // dense elimination over the cyclic coordinates that actually occur
    std::map<std::pair<int, PathKey>, int> coord_index;
    auto touch = [&](const std::pair<int, PathKey>& c) {
        coord_index.emplace(c, int(coord_index.size()));
    };
    for (const auto& col : cols)
        for (const auto& [c, v] : col.entries) touch(c);
    target.for_each([&](int d, PathKey k, const C&) { touch({d, k}); });

    const int m = int(coord_index.size());
    const int nc = int(cols.size());
    std::vector<std::vector<C>> A(size_t(m), std::vector<C>(size_t(nc) + 1, C{}));
    for (int j = 0; j < nc; ++j)
        for (const auto& [c, v] : cols[size_t(j)].entries) A[size_t(coord_index[c])][size_t(j)] = v;
    target.for_each([&](int d, PathKey k, const C& c) { A[size_t(coord_index[{d, k}])][size_t(nc)] = c; });

    // order rows by coordinate (degree first) for a deterministic elimination
    std::vector<std::pair<std::pair<int, PathKey>, int>> row_order(coord_index.begin(), coord_index.end());
    std::vector<int> pivot_col_of_row(size_t(m), -1);
    int rank = 0;
    std::vector<int> row_perm;
    for (auto& [c, i] : row_order) row_perm.push_back(i);
    for (int j = 0; j < nc; ++j) {
        int pr = -1;
        for (int ri = rank; ri < m; ++ri)
            if (!coeff_traits<C>::is_zero(A[size_t(row_perm[size_t(ri)])][size_t(j)])) { pr = ri; break; }
        if (pr < 0) continue;
        std::swap(row_perm[size_t(rank)], row_perm[size_t(pr)]);
        const int prow = row_perm[size_t(rank)];
        const C inv = coeff_traits<C>::one() / A[size_t(prow)][size_t(j)];
        for (int cc = 0; cc <= nc; ++cc) A[size_t(prow)][size_t(cc)] = A[size_t(prow)][size_t(cc)] * inv;
        for (int ri = 0; ri < m; ++ri) {
            const int r = row_perm[size_t(ri)];
            if (r == prow) continue;
            const C f = A[size_t(r)][size_t(j)];
            if (coeff_traits<C>::is_zero(f)) continue;
            for (int cc = 0; cc <= nc; ++cc) A[size_t(r)][size_t(cc)] -= f * A[size_t(prow)][size_t(cc)];
        }
        pivot_col_of_row[size_t(prow)] = j;
        ++rank;
    }

    TangentSolveResult<C> res;
    // inconsistent rows: zero coefficients but nonzero rhs
    int fail_deg = -1;
    for (const auto& [coord, i] : coord_index) {
        bool zero = true;
        for (int j = 0; j < nc; ++j)
            if (!coeff_traits<C>::is_zero(A[size_t(i)][size_t(j)])) { zero = false; break; }
        if (zero && !coeff_traits<C>::is_zero(A[size_t(i)][size_t(nc)])) {
            if (fail_deg < 0 || coord.first < fail_deg) fail_deg = coord.first;
        }
    }
    if (fail_deg >= 0) {
        res.failure.failing_degree = fail_deg;
        return res;
    }

    std::vector<TruncSeries<C>> xi(size_t(q.arrow_count()), TruncSeries<C>(theta.quiver(), N));
    for (int i = 0; i < m; ++i) {
        const int j = pivot_col_of_row[size_t(i)];
        if (j < 0) continue;
        const C v = A[size_t(i)][size_t(nc)];
        if (coeff_traits<C>::is_zero(v)) continue;
        const auto& col = cols[size_t(j)];
        xi[size_t(col.arrow)].mutable_terms(col.deg).push_back({col.key, v});
    }
    for (auto& s : xi) s.normalize();
    res.xi = std::move(xi);
    return res;
}

} // namespace qp
