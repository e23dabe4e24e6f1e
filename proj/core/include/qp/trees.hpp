#pragma once

#include "qp/endo.hpp"

#include <cstdint>
#include <unordered_map>

namespace qp {

/// Pool of rooted plane binary trees, interned by structure. Id 0 is the
/// single-vertex tree (a leaf); internal nodes store child ids.
class TreePool {
public:
    TreePool() { nodes_.push_back({-1, -1}); } // leaf

    int leaf() const { return 0; }

    int join(int left, int right) {
        const std::uint64_t key = (std::uint64_t(std::uint32_t(left)) << 32) | std::uint32_t(right);
        auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        nodes_.push_back({left, right});
        const int id = int(nodes_.size()) - 1;
        index_.emplace(key, id);
        return id;
    }

    bool is_leaf(int id) const { return nodes_[size_t(id)].first < 0; }
    int left(int id) const { return nodes_[size_t(id)].first; }
    int right(int id) const { return nodes_[size_t(id)].second; }

    std::int64_t vertex_count(int id) const {
        if (is_leaf(id)) return 1;
        return 1 + vertex_count(left(id)) + vertex_count(right(id));
    }
    std::int64_t leaf_count(int id) const {
        if (is_leaf(id)) return 1;
        return leaf_count(left(id)) + leaf_count(right(id));
    }

    /// T! = |T| * T_L! * T_R!, with leaf! = 1.
    std::int64_t binary_factorial(int id) const {
        if (is_leaf(id)) return 1;
        return vertex_count(id) * binary_factorial(left(id)) * binary_factorial(right(id));
    }

    /// Factorial of the rooted plane tree obtained by deleting all leaves:
    /// |T| times the product over child subtrees, the empty tree counting 1.
    std::int64_t pruned_factorial(int id) const {
        auto pruned = prune_(id);
        return general_factorial_(pruned);
    }

    /// All trees with exactly m leaves (memoized; Catalan(m-1) of them).
    const std::vector<int>& with_leaves(int m) {
        while (int(by_leaves_.size()) <= m) {
            const int mm = int(by_leaves_.size());
            std::vector<int> v;
            if (mm == 1) {
                v.push_back(leaf());
            } else if (mm >= 2) {
                for (int i = 1; i < mm; ++i)
                    for (int L : with_leaves(i))
                        for (int R : by_leaves_[size_t(mm - i)]) v.push_back(join(L, R));
            }
            by_leaves_.push_back(std::move(v));
        }
        return by_leaves_[size_t(m)];
    }

private:
    struct GTree {
        std::vector<GTree> kids;
    };

    std::optional<GTree> prune_(int id) const {
        if (is_leaf(id)) return std::nullopt;
        GTree g;
        if (auto l = prune_(left(id))) g.kids.push_back(std::move(*l));
        if (auto r = prune_(right(id))) g.kids.push_back(std::move(*r));
        return g;
    }
    static std::int64_t gsize_(const GTree& g) {
        std::int64_t s = 1;
        for (const auto& k : g.kids) s += gsize_(k);
        return s;
    }
    static std::int64_t general_factorial_(const std::optional<GTree>& g) {
        if (!g) return 1;
        std::int64_t f = gsize_(*g);
        for (const auto& k : g->kids) f *= general_factorial_(std::optional<GTree>(k));
        return f;
    }

    std::vector<std::pair<int, int>> nodes_;
    std::unordered_map<std::uint64_t, int> index_;
    std::vector<std::vector<int>> by_leaves_;
};

namespace detail {

/// (P delta_z) R: the derivation sending each arrow to the matching component
/// of P, applied to the series R.
template <class C>
TruncSeries<C> derivation_apply(const std::vector<TruncSeries<C>>& P, const TruncSeries<C>& R) {
    const Quiver& q = *R.quiver();
    const int N = R.trunc();
    std::vector<std::tuple<int, PathKey, C>> acc;
    std::vector<int> digits;
    R.for_each([&](int d, PathKey key, const C& c) {
        if (d == 0) return;
        decode_path(q, d, key, digits);
        for (int pos = 0; pos < d; ++pos) {
            const auto& rep = P[size_t(digits[size_t(pos)])];
            if (rep.is_zero()) continue;
            // prefix/suffix keys around the replaced letter
            PathKey pre = 0, suf = 0;
            for (int i = 0; i < pos; ++i) pre = pre * std::uint64_t(q.arrow_count()) + std::uint64_t(digits[size_t(i)]);
            for (int i = pos + 1; i < d; ++i) suf = suf * std::uint64_t(q.arrow_count()) + std::uint64_t(digits[size_t(i)]);
            const int sufd = d - pos - 1;
            rep.for_each([&](int rd, PathKey rk, const C& rc) {
                const int nd = pos + rd + sufd;
                if (nd > N || rd == 0) return;
                PathKey nk = pre;
                nk = nk * q.pow_arrows(rd) + rk;
                nk = nk * q.pow_arrows(sufd) + suf;
                acc.emplace_back(nd, nk, C(c * rc));
            });
        }
    });
    return TruncSeries<C>::from_accum(R.quiver(), N, std::move(acc));
}

} // namespace detail

/// Composition inverse through the decorated-tree expansion. Requires the
/// unitriangular form h(z) = z - M(z) with ord(M) >= 2; enumerates plane
/// binary trees with at most N-1 leaves and sums 1/That! weighted tree values.
/// Exists as an independent oracle next to Endomorphism::invert.
template <class C>
Endomorphism<C> invert_by_trees(const Endomorphism<C>& h) {
    static_assert(coeff_traits<C>::is_exact, "tree inversion uses exact tree-factorial weights");
    const QuiverPtr& qp_ = h.quiver();
    const Quiver& q = *qp_;
    const int N = h.trunc();

    std::vector<TruncSeries<C>> M;
    for (int a = 0; a < q.arrow_count(); ++a) {
        int arr[1] = {a};
        auto m = TruncSeries<C>::monomial(qp_, N, arr, coeff_traits<C>::one()) - h.image(a);
        if (m.ord() < 2) throw math_error("invert_by_trees: linear part is not the identity");
        M.push_back(std::move(m));
    }

    TreePool pool;
    std::unordered_map<int, std::vector<TruncSeries<C>>> value; // tree id -> N_T components
    value.emplace(pool.leaf(), M);

    auto eval = [&](auto&& self, int id) -> const std::vector<TruncSeries<C>>& {
        auto it = value.find(id);
        if (it != value.end()) return it->second;
        const auto& L = self(self, pool.left(id));
        const auto& R = self(self, pool.right(id));
        std::vector<TruncSeries<C>> out;
        out.reserve(size_t(q.arrow_count()));
        for (int a = 0; a < q.arrow_count(); ++a) out.push_back(detail::derivation_apply(L, R[size_t(a)]));
        return value.emplace(id, std::move(out)).first->second;
    };

    std::vector<TruncSeries<C>> acc;
    for (int a = 0; a < q.arrow_count(); ++a) {
        int arr[1] = {a};
        acc.push_back(TruncSeries<C>::monomial(qp_, N, arr, coeff_traits<C>::one()));
    }
    for (int m = 1; m <= N - 1; ++m) {
        for (int id : pool.with_leaves(m)) {
            const C w = coeff_traits<C>::one() / C(pool.pruned_factorial(id));
            const auto& NT = eval(eval, id);
            for (int a = 0; a < q.arrow_count(); ++a) acc[size_t(a)] += w * NT[size_t(a)];
        }
    }
    return Endomorphism<C>::from_images(qp_, N, std::move(acc));
}

} // namespace qp
