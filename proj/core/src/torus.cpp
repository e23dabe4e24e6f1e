#include "qp/torus.hpp"

#include <algorithm>
#include <optional>

namespace qp {

namespace {

std::int64_t chibar_vv(const EulerForm& e, const std::vector<std::int32_t>& v,
                       const std::vector<std::int32_t>& w) {
    std::int64_t s = 0;
    for (int i = 0; i < e.n; ++i) {
        if (v[size_t(i)] == 0) continue;
        for (int j = 0; j < e.n; ++j) {
            if (w[size_t(j)] == 0) continue;
            s += std::int64_t(v[size_t(i)]) * e.chibar(i, j) * w[size_t(j)];
        }
    }
    return s;
}

std::int64_t dot(const std::vector<std::int32_t>& v, const std::vector<std::int32_t>& w) {
    std::int64_t s = 0;
    for (size_t i = 0; i < v.size(); ++i) s += std::int64_t(v[i]) * w[i];
    return s;
}

std::vector<std::int32_t> vadd(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
    std::vector<std::int32_t> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

/// Sign relating the basis monomial y^v to the ordered generator product
/// y_1^{v_1} ... y_n^{v_n} = sigma(v) y^v.
int collection_sign(const EulerForm& e, const std::vector<std::int32_t>& v) {
    std::int64_t s = 0;
    for (int j = 1; j < e.n; ++j) {
        if (v[size_t(j)] == 0) continue;
        for (int i = 0; i < j; ++i) s += std::int64_t(v[size_t(i)]) * v[size_t(j)] * e.chibar(j, i);
    }
    return (s % 2 == 0) ? 1 : -1;
}

} // namespace

TorusElement TorusElement::one(TorusCtxPtr ctx) {
    TorusElement e(ctx);
    const int n = ctx->nodes();
    e.add_term(ExpKey{std::vector<std::int32_t>(size_t(n), 0), std::vector<std::int32_t>(size_t(n), 0)},
               Rat(1));
    return e;
}

TorusElement TorusElement::monomial(TorusCtxPtr ctx, std::vector<std::int32_t> xexp,
                                    std::vector<std::int32_t> yexp, Rat coeff) {
    if (int(xexp.size()) != ctx->nodes() || int(yexp.size()) != ctx->nodes())
        throw input_error("torus monomial exponent length mismatch");
    TorusElement e(ctx);
    e.add_term(ExpKey{std::move(xexp), std::move(yexp)}, std::move(coeff));
    return e;
}

TorusElement TorusElement::x_gen(TorusCtxPtr ctx, int i, int power) {
    std::vector<std::int32_t> x(size_t(ctx->nodes()), 0), y(size_t(ctx->nodes()), 0);
    x[size_t(i)] = std::int32_t(power);
    return monomial(std::move(ctx), std::move(x), std::move(y), Rat(1));
}

TorusElement TorusElement::y_gen(TorusCtxPtr ctx, int i, int power) {
    std::vector<std::int32_t> x(size_t(ctx->nodes()), 0), y(size_t(ctx->nodes()), 0);
    y[size_t(i)] = std::int32_t(power);
    return monomial(std::move(ctx), std::move(x), std::move(y), Rat(1));
}

void TorusElement::add_term(ExpKey k, Rat c) {
    if (c.is_zero()) return;
    if (k.total_ydeg() > ctx_->ydeg_bound) return;
    auto [it, fresh] = terms_.emplace(std::move(k), c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void TorusElement::require_ctx(const TorusElement& o) const {
    if (ctx_ != o.ctx_ && !(ctx_ && o.ctx_ && same_quiver(ctx_->quiver, o.ctx_->quiver) &&
                            ctx_->ydeg_bound == o.ctx_->ydeg_bound))
        throw input_error("torus elements from different contexts");
}

TorusElement operator+(const TorusElement& a, const TorusElement& b) {
    a.require_ctx(b);
    TorusElement r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, c);
    return r;
}

TorusElement operator-(const TorusElement& a, const TorusElement& b) {
    a.require_ctx(b);
    TorusElement r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, -c);
    return r;
}

TorusElement operator-(const TorusElement& a) {
    TorusElement r = a;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
}

TorusElement operator*(const Rat& s, const TorusElement& a) {
    TorusElement r(a.ctx_);
    if (s.is_zero()) return r;
    r.terms_ = a.terms_;
    for (auto& [k, c] : r.terms_) c *= s;
    return r;
}

TorusElement TorusElement::sc_product(const TorusElement& a, const TorusElement& b) {
    a.require_ctx(b);
    TorusElement r(a.ctx_);
    const auto& e = a.ctx_->euler;
    for (const auto& [k1, c1] : a.terms_) {
        for (const auto& [k2, c2] : b.terms_) {
            const std::int64_t tw = chibar_vv(e, k2.y, k1.y);
            Rat c = c1 * c2;
            if (tw % 2 != 0) c = -c;
            r.add_term(ExpKey{vadd(k1.x, k2.x), vadd(k1.y, k2.y)}, std::move(c));
        }
    }
    return r;
}

TorusElement TorusElement::truncated(int ydeg) const {
    TorusElement r(ctx_);
    for (const auto& [k, c] : terms_)
        if (k.total_ydeg() <= ydeg) r.terms_.emplace(k, c);
    return r;
}

TorusElement TorusElement::inverse() const {
    if (terms_.empty()) throw math_error("torus inverse of zero");
    // leading term: the unique term of minimal total y-degree
    auto lead = terms_.begin();
    int count_min = 0;
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        const int d = it->first.total_ydeg();
        if (d < lead->first.total_ydeg()) {
            lead = it;
            count_min = 1;
        } else if (d == lead->first.total_ydeg()) {
            ++count_min;
        }
    }
    if (count_min != 1)
        throw math_error("torus inverse needs a unique leading monomial in y-degree");

    // factor out the leading monomial: this = lead * (1 + T), ord_y(T) >= 1
    ExpKey lk = lead->first;
    Rat lc = lead->second;
    ExpKey lk_inv{lk.x, lk.y};
    for (auto& v : lk_inv.x) v = -v;
    for (auto& v : lk_inv.y) v = -v;
    auto mono_inv = TorusElement::monomial(ctx_, lk_inv.x, lk_inv.y, Rat(1) / lc);
    // normalize through the computed unit so the twist sign of the monomial
    // product drops out
    auto lead_mono = TorusElement::monomial(ctx_, lk.x, lk.y, lc);
    auto unit = sc_product(lead_mono, mono_inv);
    if (unit.terms_.size() != 1) throw math_error("torus inverse: bad monomial unit");
    const Rat u = unit.terms_.begin()->second;
    mono_inv = (Rat(1) / u) * mono_inv;

    auto t = sc_product(mono_inv, *this) - one(ctx_); // ord_y >= 1
    for (const auto& [k, c] : t.terms_)
        if (k.total_ydeg() == 0) throw math_error("torus inverse: non-series unit part");
    // The geometric series converges in the y-degree completion only when the
    // series part is sign-coherent per coordinate (total degree is additive
    // on such a cone); mixed signs could cancel degrees indefinitely.
    {
        const int n = ctx_->nodes();
        std::vector<int> sign(static_cast<size_t>(n), 0);
        for (const auto& [k, c] : t.terms_)
            for (int i = 0; i < n; ++i) {
                const int s = k.y[size_t(i)] > 0 ? 1 : k.y[size_t(i)] < 0 ? -1 : 0;
                if (s == 0) continue;
                if (sign[size_t(i)] == 0) sign[size_t(i)] = s;
                else if (sign[size_t(i)] != s)
                    throw math_error("torus inverse: series part mixes y-exponent signs");
            }
    }
    auto geo = one(ctx_);
    auto pw = one(ctx_);
    const int D = ctx_->ydeg_bound;
    for (int d = 1; d <= D; ++d) {
        pw = sc_product(pw, t);
        if (pw.is_zero()) break;
        geo = (d % 2 == 0) ? geo + pw : geo - pw;
    }
    return sc_product(geo, mono_inv);
}

TorusElement TorusElement::pow(int n) const {
    if (n == 0) return one(ctx_);
    const TorusElement base = n > 0 ? *this : inverse();
    TorusElement acc = one(ctx_);
    for (int i = 0; i < std::abs(n); ++i) acc = sc_product(acc, base);
    return acc;
}

std::string TorusElement::str() const {
    std::string s;
    for (const auto& [k, c] : terms_) {
        if (!s.empty()) s += " + ";
        s += c.str();
        for (size_t i = 0; i < k.x.size(); ++i)
            if (k.x[i] != 0) s += "*x" + std::to_string(i + 1) + "^" + std::to_string(k.x[i]);
        for (size_t i = 0; i < k.y.size(); ++i)
            if (k.y[i] != 0) s += "*y" + std::to_string(i + 1) + "^" + std::to_string(k.y[i]);
    }
    return s.empty() ? "0" : s;
}

TorusElement poisson(const TorusElement& a, const TorusElement& b) {
    if (!a.context() || !b.context()) throw input_error("poisson: missing context");
    TorusElement r(a.context());
    const auto& e = a.context()->euler;
    for (const auto& [k1, c1] : a.terms()) {
        for (const auto& [k2, c2] : b.terms()) {
            const std::int64_t cb = chibar_vv(e, k2.y, k1.y);
            const std::int64_t mixed = dot(k1.y, k2.x) - dot(k2.y, k1.x);
            Rat c = c1 * c2 * Rat(cb + mixed);
            if (cb % 2 != 0) c = -c;
            r.add_term(ExpKey{vadd(k1.x, k2.x), vadd(k1.y, k2.y)}, std::move(c));
        }
    }
    return r;
}

// ---- operators -----------------------------------------------------------------

TorusOperator TorusOperator::identity(TorusCtxPtr ctx) {
    std::vector<TorusElement> xs, ys;
    for (int i = 0; i < ctx->nodes(); ++i) {
        xs.push_back(TorusElement::x_gen(ctx, i));
        ys.push_back(TorusElement::y_gen(ctx, i));
    }
    return from_images(std::move(ctx), std::move(xs), std::move(ys));
}

TorusOperator TorusOperator::from_images(TorusCtxPtr ctx, std::vector<TorusElement> x_images,
                                         std::vector<TorusElement> y_images) {
    if (int(x_images.size()) != ctx->nodes() || int(y_images.size()) != ctx->nodes())
        throw input_error("torus operator needs one image per generator");
    TorusOperator op;
    op.ctx_ = std::move(ctx);
    op.ximg_ = std::move(x_images);
    op.yimg_ = std::move(y_images);
    return op;
}

TorusElement TorusOperator::apply(const TorusElement& u) const {
    TorusElement out(ctx_);
    const auto& e = ctx_->euler;
    const int n = ctx_->nodes();
    // per-call cache of the image inverses needed for negative exponents
    std::vector<std::optional<TorusElement>> xinv(static_cast<size_t>(n));
    std::vector<std::optional<TorusElement>> yinv(static_cast<size_t>(n));
    for (const auto& [k, c] : u.terms()) {
        TorusElement acc = TorusElement::one(ctx_);
        for (int i = 0; i < n; ++i) {
            const int w = k.x[size_t(i)];
            if (w == 0) continue;
            if (w < 0 && !xinv[size_t(i)]) xinv[size_t(i)] = ximg_[size_t(i)].inverse();
            const TorusElement& base = w > 0 ? ximg_[size_t(i)] : *xinv[size_t(i)];
            for (int t = 0; t < std::abs(w); ++t) acc = TorusElement::sc_product(acc, base);
        }
        for (int i = 0; i < n; ++i) {
            const int v = k.y[size_t(i)];
            if (v == 0) continue;
            if (v < 0 && !yinv[size_t(i)]) yinv[size_t(i)] = yimg_[size_t(i)].inverse();
            const TorusElement& base = v > 0 ? yimg_[size_t(i)] : *yinv[size_t(i)];
            for (int t = 0; t < std::abs(v); ++t) acc = TorusElement::sc_product(acc, base);
        }
        Rat cc = c;
        if (collection_sign(e, k.y) < 0) cc = -cc;
        out = out + cc * acc;
    }
    return out;
}

TorusOperator TorusOperator::compose(const TorusOperator& inner) const {
    std::vector<TorusElement> xs, ys;
    for (int i = 0; i < ctx_->nodes(); ++i) {
        xs.push_back(apply(inner.x_image(i)));
        ys.push_back(apply(inner.y_image(i)));
    }
    return from_images(ctx_, std::move(xs), std::move(ys));
}

bool operators_equal(const TorusOperator& a, const TorusOperator& b, int ydeg) {
    for (int i = 0; i < a.context()->nodes(); ++i) {
        if (!((a.x_image(i) - b.x_image(i)).truncated(ydeg).is_zero())) return false;
        if (!((a.y_image(i) - b.y_image(i)).truncated(ydeg).is_zero())) return false;
    }
    return true;
}

TorusOperator AdOperator::to_operator() const {
    const auto& e = ctx->euler;
    std::vector<TorusElement> xs, ys;
    for (int i = 0; i < ctx->nodes(); ++i)
        xs.push_back(TorusElement::sc_product(TorusElement::x_gen(ctx, i), multiplier[size_t(i)]));
    for (int i = 0; i < ctx->nodes(); ++i) {
        TorusElement m = TorusElement::y_gen(ctx, i);
        for (int j = 0; j < ctx->nodes(); ++j) {
            const auto p = e.chibar(j, i);
            if (p == 0) continue;
            m = TorusElement::sc_product(m, multiplier[size_t(j)].pow(int(p)));
        }
        ys.push_back(std::move(m));
    }
    return TorusOperator::from_images(ctx, std::move(xs), std::move(ys));
}

AdOperator dt_operator(TorusCtxPtr ctx, std::vector<TorusElement> z_series) {
    if (int(z_series.size()) != ctx->nodes()) throw input_error("dt_operator: one series per node");
    const int n = ctx->nodes();
    for (int i = 0; i < n; ++i) {
        ExpKey unitk{std::vector<std::int32_t>(size_t(n), 0), std::vector<std::int32_t>(size_t(n), 0)};
        if (z_series[size_t(i)].coeff(unitk).is_zero())
            throw math_error("dt_operator: series must have constant term 1");
        for (const auto& [k, c] : z_series[size_t(i)].terms()) {
            bool xfree = true;
            for (auto v : k.x)
                if (v != 0) xfree = false;
            if (!xfree) throw input_error("dt_operator: multiplier series must be y-only");
        }
    }
    return AdOperator{std::move(ctx), std::move(z_series), false};
}

AdOperator ad_simple(TorusCtxPtr ctx, int node, AdSignMode mode) {
    const int n = ctx->nodes();
    if (node < 0 || node >= n) throw input_error("ad_simple: unknown node");
    std::vector<TorusElement> mult;
    for (int i = 0; i < n; ++i) {
        if (i != node) {
            mult.push_back(TorusElement::one(ctx));
            continue;
        }
        auto m = TorusElement::one(ctx) -
                 TorusElement::y_gen(ctx, node, mode == AdSignMode::Plain ? 1 : -1);
        mult.push_back(std::move(m));
    }
    return AdOperator{ctx, std::move(mult), mode == AdSignMode::Shifted};
}

AdOperator ad_simple_inverse(TorusCtxPtr ctx, int node, AdSignMode mode) {
    auto ad = ad_simple(ctx, node, mode);
    ad.multiplier[size_t(node)] = ad.multiplier[size_t(node)].inverse();
    return ad;
}

TorusElement fz_specialize(const TorusElement& u) {
    const auto& ctx = u.context();
    const auto& e = ctx->euler;
    const int n = ctx->nodes();
    std::vector<TorusElement> ximg, yimg;
    for (int i = 0; i < n; ++i) ximg.push_back(TorusElement::x_gen(ctx, i));
    for (int i = 0; i < n; ++i) {
        std::vector<std::int32_t> x(size_t(n), 0), y(size_t(n), 0);
        for (int j = 0; j < n; ++j) x[size_t(j)] = std::int32_t(e.chibar(i, j));
        yimg.push_back(TorusElement::monomial(ctx, std::move(x), std::move(y), Rat(-1)));
    }
    return TorusOperator::from_images(ctx, std::move(ximg), std::move(yimg)).apply(u);
}

ClassMap ClassMap::y_identity(int nodes) {
    ClassMap m;
    m.x_rows.assign(size_t(nodes), std::vector<std::int32_t>(size_t(nodes), 0));
    m.y_rows.assign(size_t(nodes), std::vector<std::int32_t>(size_t(nodes), 0));
    for (int i = 0; i < nodes; ++i) m.y_rows[size_t(i)][size_t(i)] = 1;
    return m;
}

ExpKey ClassMap::apply(const DimVector& v) const {
    ExpKey k;
    k.x.assign(x_rows.size(), 0);
    k.y.assign(y_rows.size(), 0);
    for (size_t r = 0; r < x_rows.size(); ++r)
        for (int j = 0; j < v.size(); ++j) k.x[r] += std::int32_t(x_rows[r][size_t(j)] * v[j]);
    for (size_t r = 0; r < y_rows.size(); ++r)
        for (int j = 0; j < v.size(); ++j) k.y[r] += std::int32_t(y_rows[r][size_t(j)] * v[j]);
    return k;
}

TorusElement cc_character(TorusCtxPtr ctx, std::vector<std::int32_t> g, const FSeries& f,
                          const ClassMap& cls) {
    if (int(cls.x_rows.size()) != ctx->nodes() || int(cls.y_rows.size()) != ctx->nodes())
        throw input_error("cc_character: class map shape mismatch");
    TorusElement sum(ctx);
    for (const auto& [v, entry] : f.entries) {
        auto k = cls.apply(v);
        sum.add_term(std::move(k), Rat(entry.chi));
    }
    auto head = TorusElement::monomial(ctx, std::move(g), std::vector<std::int32_t>(size_t(ctx->nodes()), 0), Rat(1));
    return TorusElement::sc_product(head, sum);
}

std::optional<TorusElement> laurent_divide(const TorusElement& num, const TorusElement& den) {
    if (den.is_zero()) throw math_error("laurent division by zero");
    TorusElement rem = num;
    TorusElement quot(num.context());
    // leading = largest key in the map order; eliminate iteratively
    const auto& dterms = den.terms();
    const auto dlead = std::prev(dterms.end());
    std::size_t guard = num.terms().size() * dterms.size() * 4 + 64;
    while (!rem.is_zero()) {
        if (guard-- == 0) return std::nullopt;
        const auto rlead = std::prev(rem.terms().end());
        ExpKey qk;
        qk.x.resize(rlead->first.x.size());
        qk.y.resize(rlead->first.y.size());
        for (size_t i = 0; i < qk.x.size(); ++i) qk.x[i] = rlead->first.x[i] - dlead->first.x[i];
        for (size_t i = 0; i < qk.y.size(); ++i) qk.y[i] = rlead->first.y[i] - dlead->first.y[i];
        // the sign twist between qk and dlead must be unwound
        auto qmono = TorusElement::monomial(num.context(), qk.x, qk.y, Rat(1));
        auto test = TorusElement::sc_product(qmono, TorusElement::monomial(num.context(), dlead->first.x,
                                                                           dlead->first.y, dlead->second));
        const Rat lead_c = test.coeff(rlead->first);
        if (lead_c.is_zero()) return std::nullopt;
        qmono = (rlead->second / lead_c) * qmono;
        quot = quot + qmono;
        rem = rem - TorusElement::sc_product(qmono, den);
    }
    return quot;
}

std::vector<TorusElement> cluster_exchange(const std::vector<TorusElement>& cluster, int k) {
    if (cluster.empty()) throw input_error("empty cluster");
    const auto& ctx = cluster[0].context();
    const auto& e = ctx->euler;
    const int n = ctx->nodes();
    if (k < 0 || k >= n) throw input_error("cluster_exchange: unknown node");
    TorusElement in = TorusElement::one(ctx), out = TorusElement::one(ctx);
    for (int j = 0; j < n; ++j) {
        if (e.chi(j, k) > 0) in = TorusElement::sc_product(in, cluster[size_t(j)].pow(int(e.chi(j, k))));
        if (e.chi(k, j) > 0) out = TorusElement::sc_product(out, cluster[size_t(j)].pow(int(e.chi(k, j))));
    }
    auto quot = laurent_divide(in + out, cluster[size_t(k)]);
    if (!quot) throw math_error("cluster exchange is not Laurent at this step");
    auto next = cluster;
    next[size_t(k)] = std::move(*quot);
    return next;
}

} // namespace qp
