#pragma once

#include "qp/series.hpp"

namespace qp {

/// Topological algebra endomorphism of the truncated path algebra, given by
/// arrow images. Every image lies in the (source, target) block of its arrow
/// and has ord >= 1, so the map preserves the arrow ideal.
template <class C>
class Endomorphism {
public:
    Endomorphism() = default;

    static Endomorphism identity(QuiverPtr q, int trunc) {
        Endomorphism h;
        h.q_ = q;
        h.trunc_ = trunc;
        for (int a = 0; a < q->arrow_count(); ++a) {
            int arr[1] = {a};
            h.img_.push_back(TruncSeries<C>::monomial(q, trunc, arr, coeff_traits<C>::one()));
        }
        return h;
    }

    static Endomorphism from_images(QuiverPtr q, int trunc, std::vector<TruncSeries<C>> images) {
        if (int(images.size()) != q->arrow_count())
            throw input_error("endomorphism needs one image per arrow");
        Endomorphism h;
        h.q_ = q;
        h.trunc_ = trunc;
        h.img_ = std::move(images);
        for (int a = 0; a < q->arrow_count(); ++a) h.validate_image_(a);
        return h;
    }

    const QuiverPtr& quiver() const { return q_; }
    int trunc() const { return trunc_; }
    const TruncSeries<C>& image(int arrow) const { return img_[size_t(arrow)]; }
    const std::vector<TruncSeries<C>>& images() const { return img_; }

    bool is_identity() const { return *this == identity(q_, trunc_); }

    friend bool operator==(const Endomorphism& a, const Endomorphism& b) {
        return same_quiver(a.q_, b.q_) && a.trunc_ == b.trunc_ && a.img_ == b.img_;
    }

    /// Substitute the arrow images into every word of f.
    TruncSeries<C> apply(const TruncSeries<C>& f) const;

    /// Potentials are pushed through a representative and re-canonicalized.
    CyclicPotential<C> apply(const CyclicPotential<C>& phi) const {
        return cyclic_class(apply(phi.representative()));
    }

    /// (this o h2)(a) = this->apply(h2(a)).
    Endomorphism compose(const Endomorphism& h2) const {
        if (!same_quiver(q_, h2.q_) || trunc_ != h2.trunc_)
            throw input_error("endomorphism composition mismatch");
        std::vector<TruncSeries<C>> imgs;
        imgs.reserve(img_.size());
        for (int a = 0; a < q_->arrow_count(); ++a) imgs.push_back(apply(h2.image(a)));
        return from_images(q_, trunc_, std::move(imgs));
    }

    Endomorphism jet(int r) const {
        if (r < 0 || r > trunc_) throw input_error("jet degree out of range");
        std::vector<TruncSeries<C>> imgs;
        for (const auto& s : img_) imgs.push_back(s.jet(r));
        return from_images(q_, r, std::move(imgs));
    }

    /// Unique inverse jet, solved order by order after peeling the linear
    /// part. Requires every (source,target) block of the degree-1 coefficient
    /// matrix to be invertible; reports the failing block otherwise.
    Endomorphism invert() const;

    /// Add `delta` to the image of one arrow (used by iterative constructions).
    void add_to_image(int arrow, const TruncSeries<C>& delta) {
        img_[size_t(arrow)] += delta;
        validate_image_(arrow);
    }

private:
    QuiverPtr q_;
    int trunc_ = 0;
    std::vector<TruncSeries<C>> img_;

    void validate_image_(int a) {
        const auto& s = img_[size_t(a)];
        if (!same_quiver(s.quiver(), q_) || s.trunc() != trunc_)
            throw input_error("arrow image on wrong quiver or truncation");
        if (!s.terms(0).empty()) throw input_error("arrow image must have ord >= 1");
        const Quiver& q = *q_;
        s.for_each([&](int d, PathKey k, const C&) {
            if (path_src(q, d, k) != q.src(a) || path_tgt(q, d, k) != q.tgt(a))
                throw input_error("arrow image leaves the (source,target) block of '" +
                                  q.arrow(a).id + "'");
        });
    }
};

template <class C>
TruncSeries<C> Endomorphism<C>::apply(const TruncSeries<C>& f) const {
    if (!same_quiver(q_, f.quiver()) || trunc_ != f.trunc())
        throw input_error("endomorphism application mismatch");
    const Quiver& q = *q_;
    const int N = trunc_;
    TruncSeries<C> out(q_, N);

    // degree-0 terms map to themselves
    out.mutable_terms(0) = f.terms(0);

    // dense per-degree accumulators where the key space is small
    std::vector<std::unique_ptr<detail::DenseAccumGuard<C>>> accs(size_t(N) + 1);
    for (int d = 1; d <= N; ++d) {
        const std::uint64_t space = q.arrow_count() <= 1 ? 1 : q.pow_arrows(d);
        if (space <= detail::kDenseLimit) {
            accs[size_t(d)] = std::make_unique<detail::DenseAccumGuard<C>>();
            accs[size_t(d)]->get().begin(space);
        }
    }
    std::vector<std::tuple<int, PathKey, C>> spill;

    // Walk the words of each degree in sorted (= lexicographic) order and
    // reuse the image products of the shared prefix with the previous word.
    std::vector<int> digits, prev;
    std::vector<TruncSeries<C>> prefix; // prefix[j] = image of the first j letters
    for (int d = 1; d <= N; ++d) {
        prev.clear();
        prefix.assign(1, TruncSeries<C>(q_, N)); // placeholder; prefix[0] set per word
        for (const auto& [key, c] : f.terms(d)) {
            decode_path(q, d, key, digits);
            size_t shared = 0;
            while (shared < prev.size() && shared < digits.size() && prev[shared] == digits[shared])
                ++shared;
            if (shared == 0) {
                prefix.resize(1);
                prefix[0] = TruncSeries<C>::node_unit(q_, N, q.src(digits[0]));
            }
            prefix.resize(shared + 1);
            for (size_t j = shared; j < digits.size(); ++j) {
                if (prefix.back().is_zero()) break;
                prefix.push_back(prefix.back() * img_[size_t(digits[j])]);
            }
            // remember only the prefix actually built (a zero product cuts it short)
            prev.assign(digits.begin(), digits.begin() + std::ptrdiff_t(prefix.size() - 1));
            if (prefix.size() == digits.size() + 1) {
                const C cc0 = c;
                prefix.back().for_each([&](int dd, PathKey kk, const C& cc) {
                    if (dd >= 1 && accs[size_t(dd)]) {
                        accs[size_t(dd)]->get().add(kk, cc0 * cc);
                    } else {
                        spill.emplace_back(dd, kk, C(cc0 * cc));
                    }
                });
            }
        }
    }
    for (int d = 1; d <= N; ++d)
        if (accs[size_t(d)]) accs[size_t(d)]->get().drain_into(out.mutable_terms(d));
    if (!spill.empty()) out += TruncSeries<C>::from_accum(q_, N, std::move(spill));
    return out;
}

template <class C>
Endomorphism<C> Endomorphism<C>::invert() const {
    static_assert(coeff_traits<C>::is_exact || std::is_same_v<C, CD>);
    const Quiver& q = *q_;
    const int n = q.node_count();
    const int N = trunc_;

    // arrows per (source,target) block
    std::vector<std::vector<int>> block(size_t(n) * size_t(n));
    for (int a = 0; a < q.arrow_count(); ++a) block[size_t(q.src(a)) * size_t(n) + size_t(q.tgt(a))].push_back(a);

    // degree-1 coefficient matrix per block; solve L * X = I exactly
    std::vector<TruncSeries<C>> linv_img(size_t(q.arrow_count()), TruncSeries<C>(q_, N));
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            const auto& arrows = block[size_t(s) * size_t(n) + size_t(t)];
            const int m = int(arrows.size());
            if (m == 0) continue;
            // M[r][c] = coefficient of arrow r in image(arrow c)
            std::vector<std::vector<C>> M(size_t(m), std::vector<C>(size_t(2 * m), C{}));
            for (int cidx = 0; cidx < m; ++cidx) {
                for (const auto& [k, coef] : img_[size_t(arrows[size_t(cidx)])].terms(1)) {
                    auto it = std::find(arrows.begin(), arrows.end(), int(k));
                    if (it != arrows.end()) M[size_t(it - arrows.begin())][size_t(cidx)] = coef;
                }
                M[size_t(cidx)][size_t(m + cidx)] = coeff_traits<C>::one();
            }
            // Gauss-Jordan
            for (int col = 0; col < m; ++col) {
                int piv = -1;
                for (int r = col; r < m; ++r)
                    if (!coeff_traits<C>::is_zero(M[size_t(r)][size_t(col)])) { piv = r; break; }
                if (piv < 0)
                    throw math_error("singular degree-1 block (" + q.node_id(s) + " -> " + q.node_id(t) + ")");
                std::swap(M[size_t(piv)], M[size_t(col)]);
                C d = M[size_t(col)][size_t(col)];
                for (auto& x : M[size_t(col)]) x = x / d;
                for (int r = 0; r < m; ++r) {
                    if (r == col) continue;
                    C f = M[size_t(r)][size_t(col)];
                    if (coeff_traits<C>::is_zero(f)) continue;
                    for (int cc = 0; cc < 2 * m; ++cc) M[size_t(r)][size_t(cc)] -= f * M[size_t(col)][size_t(cc)];
                }
            }
            // columns of L^-1 give the linear images of the inverse
            for (int cidx = 0; cidx < m; ++cidx) {
                TruncSeries<C> im(q_, N);
                for (int r = 0; r < m; ++r) {
                    const C& coef = M[size_t(r)][size_t(m + cidx)];
                    if (coeff_traits<C>::is_zero(coef)) continue;
                    im.mutable_terms(1).push_back({PathKey(arrows[size_t(r)]), coef});
                }
                im.normalize();
                linv_img[size_t(arrows[size_t(cidx)])] = std::move(im);
            }
        }
    auto linv = from_images(q_, N, std::move(linv_img));

    // htilde = linv o this is unitriangular; solve htilde o g = id order by order
    auto htilde = linv.compose(*this);
    auto g = identity(q_, N);
    for (int d = 2; d <= N; ++d) {
        auto err = htilde.compose(g);
        for (int a = 0; a < q.arrow_count(); ++a) {
            const auto& rd = err.image(a).terms(d);
            if (rd.empty()) continue;
            TruncSeries<C> corr(q_, N);
            corr.mutable_terms(d) = rd;
            g.add_to_image(a, -corr);
        }
    }
    return g.compose(linv);
}

} // namespace qp
