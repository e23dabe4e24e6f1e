#pragma once

#include "qp/paths.hpp"
#include "qp/rational.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace qp {

namespace detail {

template <class C>
using TermVec = std::vector<std::pair<PathKey, C>>; // sorted by key, nonzero coeffs

template <class C>
void sort_combine(TermVec<C>& v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    size_t w = 0;
    for (size_t r = 0; r < v.size();) {
        PathKey k = v[r].first;
        C c = v[r].second;
        for (++r; r < v.size() && v[r].first == k; ++r) c += v[r].second;
        if (!coeff_traits<C>::is_zero(c)) v[w++] = {k, c};
    }
    v.resize(w);
}

template <class C>
void add_into(TermVec<C>& dst, const TermVec<C>& src, const C* scale = nullptr) {
    if (src.empty()) return;
    TermVec<C> out;
    out.reserve(dst.size() + src.size());
    size_t i = 0, j = 0;
    while (i < dst.size() || j < src.size()) {
        if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
            out.push_back(dst[i++]);
        } else if (i == dst.size() || src[j].first < dst[i].first) {
            C c = scale ? C(src[j].second * *scale) : src[j].second;
            if (!coeff_traits<C>::is_zero(c)) out.push_back({src[j].first, c});
            ++j;
        } else {
            C c = dst[i].second + (scale ? C(src[j].second * *scale) : src[j].second);
            if (!coeff_traits<C>::is_zero(c)) out.push_back({dst[i].first, c});
            ++i;
            ++j;
        }
    }
    dst = std::move(out);
}

/// Dense accumulation buffer for path-key indexed sums. Buffers are pooled
/// per thread; acquire through DenseAccumGuard.
template <class C>
class DenseAccum {
public:
    void begin(std::uint64_t size) {
        if (val_.size() < size) {
            val_.resize(size, C{});
            used_.resize(size, 0);
        }
        touched_.clear();
    }
    void add(PathKey k, const C& c) {
        if (!used_[k]) {
            used_[k] = 1;
            val_[k] = c;
            touched_.push_back(k);
        } else {
            val_[k] += c;
        }
    }
    void drain_into(TermVec<C>& dst) {
        std::sort(touched_.begin(), touched_.end());
        dst.reserve(dst.size() + touched_.size());
        for (PathKey k : touched_) {
            if (!coeff_traits<C>::is_zero(val_[k])) dst.push_back({k, val_[k]});
            used_[k] = 0;
            val_[k] = C{};
        }
        touched_.clear();
    }

private:
    std::vector<C> val_;
    std::vector<std::uint8_t> used_;
    std::vector<PathKey> touched_;
};

template <class C>
std::vector<std::unique_ptr<DenseAccum<C>>>& dense_accum_pool() {
    static thread_local std::vector<std::unique_ptr<DenseAccum<C>>> pool;
    return pool;
}

template <class C>
class DenseAccumGuard {
public:
    DenseAccumGuard() {
        auto& pool = dense_accum_pool<C>();
        if (pool.empty()) {
            accum_ = std::make_unique<DenseAccum<C>>();
        } else {
            accum_ = std::move(pool.back());
            pool.pop_back();
        }
    }
    ~DenseAccumGuard() { dense_accum_pool<C>().push_back(std::move(accum_)); }
    DenseAccumGuard(const DenseAccumGuard&) = delete;
    DenseAccumGuard& operator=(const DenseAccumGuard&) = delete;
    DenseAccum<C>& get() { return *accum_; }

private:
    std::unique_ptr<DenseAccum<C>> accum_;
};

constexpr std::uint64_t kDenseLimit = std::uint64_t(1) << 20;

} // namespace detail

template <class C> class CyclicPotential;

/// Noncommutative series on paths, stored to a fixed truncation degree N.
/// Terms of each degree are kept sorted by path key; degree-0 terms are
/// node-indexed multiples of the idempotents e_i. Binary operations require
/// equal quivers and equal truncation degrees.
template <class C>
class TruncSeries {
public:
    TruncSeries() = default;
    TruncSeries(QuiverPtr q, int trunc) : q_(std::move(q)), trunc_(trunc) {
        if (trunc_ < 0) throw input_error("negative truncation degree");
        check_key_capacity(*q_, trunc_);
        deg_.resize(size_t(trunc_) + 1);
    }

    static TruncSeries identity(QuiverPtr q, int trunc) {
        TruncSeries s(std::move(q), trunc);
        for (int i = 0; i < s.q_->node_count(); ++i)
            s.deg_[0].push_back({PathKey(i), coeff_traits<C>::one()});
        return s;
    }

    static TruncSeries node_unit(QuiverPtr q, int trunc, int node) {
        TruncSeries s(std::move(q), trunc);
        s.deg_[0].push_back({PathKey(node), coeff_traits<C>::one()});
        return s;
    }

    static TruncSeries monomial(QuiverPtr q, int trunc, std::span<const int> arrows, C coeff) {
        TruncSeries s(q, trunc);
        if (coeff_traits<C>::is_zero(coeff)) return s;
        const int d = int(arrows.size());
        if (d > trunc) return s;
        for (size_t i = 0; i + 1 < arrows.size(); ++i)
            if (q->tgt(arrows[i]) != q->src(arrows[i + 1]))
                throw input_error("non-composable path in monomial");
        s.deg_[size_t(d)].push_back({encode_path(*q, arrows), coeff});
        return s;
    }

    const QuiverPtr& quiver() const { return q_; }
    int trunc() const { return trunc_; }

    bool is_zero() const {
        for (const auto& v : deg_)
            if (!v.empty()) return false;
        return true;
    }

    /// Minimal degree with a nonzero term; N+1 for the zero series.
    int ord() const {
        for (int d = 0; d <= trunc_; ++d)
            if (!deg_[size_t(d)].empty()) return d;
        return trunc_ + 1;
    }

    const detail::TermVec<C>& terms(int degree) const { return deg_[size_t(degree)]; }

    C coeff(int degree, PathKey key) const {
        const auto& v = deg_[size_t(degree)];
        auto it = std::lower_bound(v.begin(), v.end(), key,
                                   [](const auto& t, PathKey k) { return t.first < k; });
        if (it != v.end() && it->first == key) return it->second;
        return C{};
    }

    void for_each(const std::function<void(int, PathKey, const C&)>& f) const {
        for (int d = 0; d <= trunc_; ++d)
            for (const auto& [k, c] : deg_[size_t(d)]) f(d, k, c);
    }

    std::size_t term_count() const {
        std::size_t n = 0;
        for (const auto& v : deg_) n += v.size();
        return n;
    }

    TruncSeries jet(int r) const {
        if (r < 0 || r > trunc_) throw input_error("jet degree out of range");
        TruncSeries s(q_, r);
        for (int d = 0; d <= r; ++d) s.deg_[size_t(d)] = deg_[size_t(d)];
        return s;
    }

    /// Re-truncate to a (possibly larger) degree; terms beyond the stored
    /// truncation are zero.
    TruncSeries extended(int new_trunc) const {
        TruncSeries s(q_, new_trunc);
        for (int d = 0; d <= std::min(trunc_, new_trunc); ++d) s.deg_[size_t(d)] = deg_[size_t(d)];
        return s;
    }

    friend TruncSeries operator-(const TruncSeries& a) {
        TruncSeries s = a;
        for (auto& v : s.deg_)
            for (auto& [k, c] : v) c = -c;
        return s;
    }

    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
        a.require_compatible(b);
        TruncSeries s = a;
        for (int d = 0; d <= a.trunc_; ++d) detail::add_into(s.deg_[size_t(d)], b.deg_[size_t(d)]);
        return s;
    }
    friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) { return a + (-b); }

    TruncSeries& operator+=(const TruncSeries& o) { return *this = *this + o; }
    TruncSeries& operator-=(const TruncSeries& o) { return *this = *this - o; }

    friend TruncSeries operator*(const C& s, const TruncSeries& a) {
        TruncSeries r = a;
        for (auto& v : r.deg_) {
            size_t w = 0;
            for (auto& [k, c] : v) {
                C nc = s * c;
                if (!coeff_traits<C>::is_zero(nc)) v[w++] = {k, nc};
            }
            v.resize(w);
        }
        return r;
    }

    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) { return multiply(a, b); }

    /// Concatenation-convolution product; degrees beyond the truncation are
    /// dropped, non-composable concatenations contribute zero.
    static TruncSeries multiply(const TruncSeries& a, const TruncSeries& b);

    friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
        return same_quiver(a.q_, b.q_) && a.trunc_ == b.trunc_ && a.deg_ == b.deg_;
    }

    void require_compatible(const TruncSeries& o) const {
        if (!same_quiver(q_, o.q_)) throw input_error("series on different quivers");
        if (trunc_ != o.trunc_) throw input_error("series with different truncation degrees");
    }

    /// Build from an unsorted accumulation (combines duplicates, drops zeros
    /// and non-composable or over-degree paths silently when `strict` is off).
    static TruncSeries from_accum(QuiverPtr q, int trunc,
                                  std::vector<std::tuple<int, PathKey, C>>&& acc) {
        TruncSeries s(std::move(q), trunc);
        for (auto& [d, k, c] : acc) {
            if (d > trunc) continue;
            s.deg_[size_t(d)].push_back({k, c});
        }
        for (auto& v : s.deg_) detail::sort_combine(v);
        return s;
    }

    // mutable access for module-internal builders
    detail::TermVec<C>& mutable_terms(int degree) { return deg_[size_t(degree)]; }
    void normalize() {
        for (auto& v : deg_) detail::sort_combine(v);
    }

    std::string str() const;

private:
    QuiverPtr q_;
    int trunc_ = 0;
    std::vector<detail::TermVec<C>> deg_;
};

// ---- multiplication kernel --------------------------------------------------

template <class C>
TruncSeries<C> TruncSeries<C>::multiply(const TruncSeries& a, const TruncSeries& b) {
    a.require_compatible(b);
    const Quiver& q = *a.q_;
    const int N = a.trunc_;
    TruncSeries out(a.q_, N);

    // degree-0 x degree-0
    for (const auto& [ki, ci] : a.deg_[0])
        for (const auto& [kj, cj] : b.deg_[0])
            if (ki == kj) out.deg_[0].push_back({ki, ci * cj});
    detail::sort_combine(out.deg_[0]);

    detail::DenseAccumGuard<C> guard;
    auto& accum = guard.get();
    std::vector<std::pair<PathKey, C>> emit;
    for (int dout = 1; dout <= N; ++dout) {
        const std::uint64_t space = q.arrow_count() <= 1 ? 1 : q.pow_arrows(dout);
        const bool dense = space <= detail::kDenseLimit;
        if (dense) accum.begin(space);
        emit.clear();
        auto push = [&](PathKey k, C c) {
            if (dense) accum.add(k, c);
            else emit.push_back({k, std::move(c)});
        };
        for (int d1 = 0; d1 <= dout; ++d1) {
            const int d2 = dout - d1;
            const auto& u = a.deg_[size_t(d1)];
            const auto& v = b.deg_[size_t(d2)];
            if (u.empty() || v.empty()) continue;
            if (d1 == 0) {
                for (const auto& [ki, ci] : u)
                    for (const auto& [kv, cv] : v)
                        if (path_src(q, d2, kv) == int(ki)) push(kv, ci * cv);
            } else if (d2 == 0) {
                for (const auto& [ku, cu] : u) {
                    // v is sorted by node key; binary search the matching target
                    const PathKey tk = PathKey(path_tgt(q, d1, ku));
                    auto it = std::lower_bound(v.begin(), v.end(), tk,
                                               [](const auto& t, PathKey k) { return t.first < k; });
                    if (it != v.end() && it->first == tk) push(ku, cu * it->second);
                }
            } else {
                const auto shift = q.pow_arrows(d2);
                for (const auto& [ku, cu] : u) {
                    const int t = path_tgt(q, d1, ku);
                    const PathKey base = ku * shift;
                    for (const auto& [kv, cv] : v) {
                        if (path_src(q, d2, kv) != t) continue;
                        push(base + kv, cu * cv);
                    }
                }
            }
        }
        auto& dst = out.deg_[size_t(dout)];
        if (dense) {
            accum.drain_into(dst);
        } else {
            dst = std::move(emit);
            emit = {};
            detail::sort_combine(dst);
        }
    }
    return out;
}

// ---- cyclic potentials -------------------------------------------------------

/// Series on canonical cyclic words (lexicographically minimal rotations).
template <class C>
class CyclicPotential {
public:
    CyclicPotential() = default;
    CyclicPotential(QuiverPtr q, int trunc) : q_(std::move(q)), trunc_(trunc) {
        if (trunc_ < 0) throw input_error("negative truncation degree");
        check_key_capacity(*q_, trunc_);
        deg_.resize(size_t(trunc_) + 1);
    }

    const QuiverPtr& quiver() const { return q_; }
    int trunc() const { return trunc_; }

    bool is_zero() const {
        for (const auto& v : deg_)
            if (!v.empty()) return false;
        return true;
    }

    int ord() const {
        for (int d = 0; d <= trunc_; ++d)
            if (!deg_[size_t(d)].empty()) return d;
        return trunc_ + 1;
    }

    const detail::TermVec<C>& terms(int degree) const { return deg_[size_t(degree)]; }

    C coeff(int degree, PathKey key) const {
        const auto& v = deg_[size_t(degree)];
        auto it = std::lower_bound(v.begin(), v.end(), key,
                                   [](const auto& t, PathKey k) { return t.first < k; });
        if (it != v.end() && it->first == key) return it->second;
        return C{};
    }

    void for_each(const std::function<void(int, PathKey, const C&)>& f) const {
        for (int d = 0; d <= trunc_; ++d)
            for (const auto& [k, c] : deg_[size_t(d)]) f(d, k, c);
    }

    friend CyclicPotential operator-(const CyclicPotential& a) {
        CyclicPotential s = a;
        for (auto& v : s.deg_)
            for (auto& [k, c] : v) c = -c;
        return s;
    }
    friend CyclicPotential operator+(const CyclicPotential& a, const CyclicPotential& b) {
        if (!same_quiver(a.q_, b.q_) || a.trunc_ != b.trunc_)
            throw input_error("potentials with different quiver or truncation");
        CyclicPotential s = a;
        for (int d = 0; d <= a.trunc_; ++d) detail::add_into(s.deg_[size_t(d)], b.deg_[size_t(d)]);
        return s;
    }
    friend CyclicPotential operator-(const CyclicPotential& a, const CyclicPotential& b) { return a + (-b); }
    friend CyclicPotential operator*(const C& s, const CyclicPotential& a) {
        CyclicPotential r = a;
        for (auto& v : r.deg_) {
            size_t w = 0;
            for (auto& [k, c] : v) {
                C nc = s * c;
                if (!coeff_traits<C>::is_zero(nc)) v[w++] = {k, nc};
            }
            v.resize(w);
        }
        return r;
    }

    friend bool operator==(const CyclicPotential& a, const CyclicPotential& b) {
        return same_quiver(a.q_, b.q_) && a.trunc_ == b.trunc_ && a.deg_ == b.deg_;
    }

    CyclicPotential jet(int r) const {
        if (r < 0 || r > trunc_) throw input_error("jet degree out of range");
        CyclicPotential s(q_, r);
        for (int d = 0; d <= r; ++d) s.deg_[size_t(d)] = deg_[size_t(d)];
        return s;
    }

    CyclicPotential extended(int new_trunc) const {
        CyclicPotential s(q_, new_trunc);
        for (int d = 0; d <= std::min(trunc_, new_trunc); ++d) s.deg_[size_t(d)] = deg_[size_t(d)];
        return s;
    }

    /// The canonical representative: each cyclic word as the linear word given
    /// by its minimal rotation, same coefficients.
    TruncSeries<C> representative() const {
        TruncSeries<C> s(q_, trunc_);
        for (int d = 0; d <= trunc_; ++d) s.mutable_terms(d) = deg_[size_t(d)];
        return s;
    }

    /// The rotation-balanced representative: each cyclic word's coefficient is
    /// spread equally over its distinct rotations. Exact coefficients only.
    TruncSeries<C> uniform_representative() const;

    static CyclicPotential from_accum(QuiverPtr q, int trunc,
                                      std::vector<std::tuple<int, PathKey, C>>&& acc) {
        CyclicPotential p(std::move(q), trunc);
        for (auto& [d, k, c] : acc) {
            if (d > trunc) continue;
            p.deg_[size_t(d)].push_back({canonical_rotation(*p.q_, d, k), c});
        }
        for (auto& v : p.deg_) detail::sort_combine(v);
        return p;
    }

    detail::TermVec<C>& mutable_terms(int degree) { return deg_[size_t(degree)]; }

    std::string str() const;

private:
    QuiverPtr q_;
    int trunc_ = 0;
    std::vector<detail::TermVec<C>> deg_; // canonical closed-word keys
};

/// Projection to the cyclic space: open paths die, closed paths are rotated to
/// canonical form and merged.
template <class C>
CyclicPotential<C> cyclic_class(const TruncSeries<C>& f) {
    const Quiver& q = *f.quiver();
    std::vector<std::tuple<int, PathKey, C>> acc;
    f.for_each([&](int d, PathKey k, const C& c) {
        if (!path_closed(q, d, k)) return;
        acc.emplace_back(d, k, c);
    });
    return CyclicPotential<C>::from_accum(f.quiver(), f.trunc(), std::move(acc));
}

template <class C>
TruncSeries<C> CyclicPotential<C>::uniform_representative() const {
    static_assert(coeff_traits<C>::is_exact, "uniform spread divides by rotation counts");
    TruncSeries<C> s(q_, trunc_);
    std::vector<PathKey> rots;
    for (int d = 0; d <= trunc_; ++d) {
        auto& dst = s.mutable_terms(d);
        for (const auto& [k, c] : deg_[size_t(d)]) {
            if (d == 0) {
                dst.push_back({k, c});
                continue;
            }
            distinct_rotations(*q_, d, k, rots);
            C share = c / C(std::int64_t(rots.size()));
            for (PathKey r : rots) dst.push_back({r, share});
        }
        detail::sort_combine(dst);
    }
    return s;
}

/// Cyclic derivative with respect to one arrow: rotate each occurrence of the
/// arrow to the front of the cyclic word and delete it. Output truncation N-1.
template <class C>
TruncSeries<C> cyclic_derivative(const CyclicPotential<C>& phi, int arrow) {
    const Quiver& q = *phi.quiver();
    if (arrow < 0 || arrow >= q.arrow_count()) throw input_error("unknown arrow");
    const int N = phi.trunc();
    if (N == 0) return TruncSeries<C>(phi.quiver(), 0);
    std::vector<std::tuple<int, PathKey, C>> acc;
    std::vector<int> digits;
    for (int d = 1; d <= N; ++d) {
        for (const auto& [k, c] : phi.terms(d)) {
            decode_path(q, d, k, digits);
            for (int pos = 0; pos < d; ++pos) {
                if (digits[size_t(pos)] != arrow) continue;
                // rotation with `pos` first, then drop that first letter
                PathKey nk = 0;
                for (int i = 1; i < d; ++i)
                    nk = nk * std::uint64_t(q.arrow_count()) +
                         std::uint64_t(digits[size_t((pos + i) % d)]);
                acc.emplace_back(d - 1, nk, c);
            }
        }
    }
    return TruncSeries<C>::from_accum(phi.quiver(), N - 1, std::move(acc));
}

// ---- exponential, logarithm, multiplicative inverse --------------------------

template <class C>
TruncSeries<C> exponential(const TruncSeries<C>& f) {
    if (f.ord() < 1) throw math_error("exponential requires ord >= 1");
    TruncSeries<C> acc = TruncSeries<C>::identity(f.quiver(), f.trunc());
    TruncSeries<C> pw = TruncSeries<C>::identity(f.quiver(), f.trunc());
    C fact = coeff_traits<C>::one();
    for (int d = 1; d <= f.trunc(); ++d) {
        pw = pw * f;
        fact = fact * C(std::int64_t(d));
        if constexpr (coeff_traits<C>::is_exact) {
            acc += (coeff_traits<C>::one() / fact) * pw;
        } else {
            acc += (C(1.0) / fact) * pw;
        }
    }
    return acc;
}

template <class C>
TruncSeries<C> logarithm(const TruncSeries<C>& f) {
    // log(1 + g) with g = f - 1, ord(g) >= 1
    TruncSeries<C> g = f - TruncSeries<C>::identity(f.quiver(), f.trunc());
    if (g.ord() < 1) throw math_error("logarithm requires constant term 1");
    TruncSeries<C> acc(f.quiver(), f.trunc());
    TruncSeries<C> pw = TruncSeries<C>::identity(f.quiver(), f.trunc());
    for (int d = 1; d <= f.trunc(); ++d) {
        pw = pw * g;
        C w = coeff_traits<C>::one() / C(std::int64_t(d));
        if (d % 2 == 0) w = -w;
        acc += w * pw;
    }
    return acc;
}

/// Multiplicative inverse. The degree-0 part must be sum_i c_i e_i with every
/// node coefficient nonzero; missing or zero node coefficients are rejected.
template <class C>
TruncSeries<C> mult_inverse(const TruncSeries<C>& f) {
    const Quiver& q = *f.quiver();
    const int N = f.trunc();
    std::vector<C> c0(size_t(q.node_count()), C{});
    for (const auto& [k, c] : f.terms(0)) c0[size_t(k)] = c;
    for (int i = 0; i < q.node_count(); ++i)
        if (coeff_traits<C>::is_zero(c0[size_t(i)]))
            throw math_error("mult_inverse: zero degree-0 coefficient at node '" + q.node_id(i) + "'");

    // f = c * g with c in the semisimple part and g unital; f^-1 = g^-1 c^-1.
    TruncSeries<C> cinv(f.quiver(), N);
    for (int i = 0; i < q.node_count(); ++i)
        cinv.mutable_terms(0).push_back({PathKey(i), coeff_traits<C>::one() / c0[size_t(i)]});
    TruncSeries<C> g = cinv * f;
    TruncSeries<C> one = TruncSeries<C>::identity(f.quiver(), N);
    TruncSeries<C> h = one - g; // ord >= 1
    TruncSeries<C> acc = one;
    TruncSeries<C> pw = one;
    for (int d = 1; d <= N; ++d) {
        pw = pw * h;
        acc += pw;
    }
    return acc * cinv;
}

// ---- abelianization -----------------------------------------------------------

/// Commutative truncated polynomial in the loops at one node.
template <class C>
struct AbelianComponent {
    int node = 0;
    std::vector<int> loop_arrows;            // arrow indices of the loops at `node`
    std::map<std::vector<int>, C> terms;     // exponent vector over loop_arrows -> coeff
};

/// Per node, the image under the abelianization: loops at the node become
/// commuting variables, every other arrow goes to zero.
template <class C>
std::vector<AbelianComponent<C>> abelianize(const TruncSeries<C>& f) {
    const Quiver& q = *f.quiver();
    std::vector<AbelianComponent<C>> out(size_t(q.node_count()));
    std::vector<int> loop_pos(size_t(q.arrow_count()), -1);
    for (int i = 0; i < q.node_count(); ++i) out[size_t(i)].node = i;
    for (int a = 0; a < q.arrow_count(); ++a)
        if (q.src(a) == q.tgt(a)) {
            loop_pos[size_t(a)] = int(out[size_t(q.src(a))].loop_arrows.size());
            out[size_t(q.src(a))].loop_arrows.push_back(a);
        }
    std::vector<int> digits;
    f.for_each([&](int d, PathKey k, const C& c) {
        if (d == 0) {
            auto& comp = out[size_t(k)];
            std::vector<int> e(comp.loop_arrows.size(), 0);
            auto [it, fresh] = comp.terms.emplace(std::move(e), c);
            if (!fresh) {
                it->second += c;
                if (coeff_traits<C>::is_zero(it->second)) comp.terms.erase(it);
            }
            return;
        }
        decode_path(q, d, k, digits);
        const int node = q.src(digits[0]);
        std::vector<int> e(out[size_t(node)].loop_arrows.size(), 0);
        for (int a : digits) {
            if (loop_pos[size_t(a)] < 0 || q.src(a) != node) return; // a non-loop arrow kills the word
            e[size_t(loop_pos[size_t(a)])] += 1;
        }
        auto& comp = out[size_t(node)];
        auto [it, fresh] = comp.terms.emplace(std::move(e), c);
        if (!fresh) {
            it->second += c;
            if (coeff_traits<C>::is_zero(it->second)) comp.terms.erase(it);
        }
    });
    return out;
}

// ---- growth diagnostics --------------------------------------------------------

struct GrowthReport {
    std::vector<double> l1;              // s_n, n = 0..N
    std::vector<std::string> l1_exact;   // exact strings when the coefficients are exact
    std::vector<double> roots;           // s_n^(1/n), n >= 1 (0 where s_n = 0)
    double c_hat = 0.0;                  // max over n >= 1 of s_n^(1/n)
    bool geometric_up_to_trunc = false;  // s_n <= c_hat^n for all computed n
    bool roots_monotone_increasing = false; // strictly increasing over nonzero entries
};

namespace detail {
template <class C, class Terms>
GrowthReport growth_from(const std::vector<Terms>& per_degree) {
    GrowthReport r;
    const int N = int(per_degree.size()) - 1;
    r.l1.assign(size_t(N) + 1, 0.0);
    r.roots.assign(size_t(N) + 1, 0.0);
    for (int d = 0; d <= N; ++d) {
        if constexpr (coeff_traits<C>::is_exact) {
            typename coeff_traits<C>::abs_type s{};
            for (const auto& [k, c] : per_degree[size_t(d)]) s = s + coeff_traits<C>::abs(c);
            r.l1_exact.push_back(s.str());
            r.l1[size_t(d)] = s.to_double();
        } else {
            double s = 0;
            for (const auto& [k, c] : per_degree[size_t(d)]) s += coeff_traits<C>::abs_double(c);
            r.l1[size_t(d)] = s;
        }
    }
    for (int d = 1; d <= N; ++d) {
        if (r.l1[size_t(d)] > 0) r.roots[size_t(d)] = std::pow(r.l1[size_t(d)], 1.0 / d);
        r.c_hat = std::max(r.c_hat, r.roots[size_t(d)]);
    }
    r.geometric_up_to_trunc = true;
    for (int d = 0; d <= N; ++d) {
        const double bound = d == 0 ? 1.0 : std::pow(r.c_hat, d);
        if (r.l1[size_t(d)] > bound * (1 + 1e-12)) r.geometric_up_to_trunc = false;
    }
    r.roots_monotone_increasing = true;
    double prev = -1.0;
    for (int d = 1; d <= N; ++d) {
        if (r.l1[size_t(d)] == 0) continue;
        if (r.roots[size_t(d)] <= prev) r.roots_monotone_increasing = false;
        prev = r.roots[size_t(d)];
    }
    return r;
}
} // namespace detail

template <class C>
GrowthReport growth_report(const TruncSeries<C>& f) {
    std::vector<detail::TermVec<C>> per(size_t(f.trunc()) + 1);
    for (int d = 0; d <= f.trunc(); ++d) per[size_t(d)] = f.terms(d);
    return detail::growth_from<C>(per);
}

template <class C>
GrowthReport growth_report(const CyclicPotential<C>& f) {
    std::vector<detail::TermVec<C>> per(size_t(f.trunc()) + 1);
    for (int d = 0; d <= f.trunc(); ++d) per[size_t(d)] = f.terms(d);
    return detail::growth_from<C>(per);
}

// ---- printing -------------------------------------------------------------------

namespace detail {
inline std::string coeff_str(const Rat& c) { return c.str(); }
inline std::string coeff_str(const GaussRat& c) { return c.str(); }
inline std::string coeff_str(const CD& c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.12g%+.12gi)", c.real(), c.imag());
    return buf;
}
} // namespace detail

template <class C>
std::string TruncSeries<C>::str() const {
    std::string s;
    for_each([&](int d, PathKey k, const C& c) {
        if (!s.empty()) s += " + ";
        s += detail::coeff_str(c) + "*" + path_str(*q_, d, k);
    });
    return s.empty() ? "0" : s;
}

template <class C>
std::string CyclicPotential<C>::str() const {
    std::string s;
    for_each([&](int d, PathKey k, const C& c) {
        if (!s.empty()) s += " + ";
        s += detail::coeff_str(c) + "*[" + path_str(*q_, d, k) + "]";
    });
    return s.empty() ? "0" : s;
}

/// Change the coefficient field (e.g. exact -> complex floating).
template <class To, class From, template <class> class S>
S<To> series_cast(const S<From>& f) {
    S<To> out(f.quiver(), f.trunc());
    for (int d = 0; d <= f.trunc(); ++d) {
        auto& dst = out.mutable_terms(d);
        for (const auto& [k, c] : f.terms(d)) {
            if constexpr (std::is_same_v<To, CD>) {
                dst.push_back({k, coeff_traits<From>::to_complex(c)});
            } else {
                dst.push_back({k, To(c)});
            }
        }
    }
    return out;
}

} // namespace qp
