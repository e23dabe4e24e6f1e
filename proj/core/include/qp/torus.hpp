#pragma once

#include "qp/quiver.hpp"
#include "qp/rational.hpp"
#include "qp/repmod.hpp"

#include <map>
#include <memory>

namespace qp {

/// Shared context of the semiclassical double torus: the Euler form of a
/// quiver and the total-y-degree truncation bound for series elements.
struct TorusContext {
    QuiverPtr quiver;
    EulerForm euler;
    int ydeg_bound = 16;

    static std::shared_ptr<const TorusContext> make(QuiverPtr q, int ydeg_bound) {
        auto c = std::make_shared<TorusContext>();
        c->euler = EulerForm::of(*q);
        c->quiver = std::move(q);
        c->ydeg_bound = ydeg_bound;
        return c;
    }
    int nodes() const { return euler.n; }
};

using TorusCtxPtr = std::shared_ptr<const TorusContext>;

/// x- and y-exponent vectors of one monomial.
struct ExpKey {
    std::vector<std::int32_t> x, y;
    auto operator<=>(const ExpKey&) const = default;

    int total_ydeg() const {
        int s = 0;
        for (auto v : y) s += v < 0 ? -v : v;
        return s;
    }
};

/// Element of the semiclassical double torus: a finite rational combination
/// of monomials x^w y^v with the sign-twisted commutative product
///   (x^w1 y^v1) (x^w2 y^v2) = (-1)^{chibar(v2, v1)} x^{w1+w2} y^{v1+v2}.
/// Terms beyond the context's total-y-degree bound are dropped, which
/// realizes the completed algebra at a finite precision.
class TorusElement {
public:
    TorusElement() = default;
    explicit TorusElement(TorusCtxPtr ctx) : ctx_(std::move(ctx)) {}

    static TorusElement zero(TorusCtxPtr ctx) { return TorusElement(std::move(ctx)); }
    static TorusElement one(TorusCtxPtr ctx);
    static TorusElement monomial(TorusCtxPtr ctx, std::vector<std::int32_t> xexp,
                                 std::vector<std::int32_t> yexp, Rat coeff);
    static TorusElement x_gen(TorusCtxPtr ctx, int i, int power = 1);
    static TorusElement y_gen(TorusCtxPtr ctx, int i, int power = 1);

    const TorusCtxPtr& context() const { return ctx_; }
    const std::map<ExpKey, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rat coeff(const ExpKey& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    void add_term(ExpKey k, Rat c);

    friend TorusElement operator+(const TorusElement& a, const TorusElement& b);
    friend TorusElement operator-(const TorusElement& a, const TorusElement& b);
    friend TorusElement operator-(const TorusElement& a);
    friend TorusElement operator*(const Rat& s, const TorusElement& a);
    friend TorusElement operator*(const TorusElement& a, const TorusElement& b) {
        return sc_product(a, b);
    }
    friend bool operator==(const TorusElement& a, const TorusElement& b) {
        return a.terms_ == b.terms_;
    }

    /// Sign-twisted product.
    static TorusElement sc_product(const TorusElement& a, const TorusElement& b);

    /// Integer power; negative powers invert (the element must factor as
    /// coeff * monomial * (1 + positive-y-degree terms)).
    TorusElement pow(int n) const;
    TorusElement inverse() const;

    /// Truncation control for series-valued elements.
    TorusElement truncated(int ydeg) const;

    std::string str() const;

private:
    TorusCtxPtr ctx_;
    std::map<ExpKey, Rat> terms_;

    void require_ctx(const TorusElement& o) const;
};

/// Signed Poisson bracket of the weighted integration map:
/// {x^w1 y^v1, x^w2 y^v2} =
///   (-1)^{chibar(v2,v1)} (chibar(v2,v1) + <v1,w2> - <v2,w1>) x^{w1+w2} y^{v1+v2}.
TorusElement poisson(const TorusElement& a, const TorusElement& b);

/// Substitution automorphism given by generator images; monomials map through
/// the collection sign that makes the extension multiplicative.
class TorusOperator {
public:
    TorusOperator() = default;
    static TorusOperator identity(TorusCtxPtr ctx);
    static TorusOperator from_images(TorusCtxPtr ctx, std::vector<TorusElement> x_images,
                                     std::vector<TorusElement> y_images);

    const TorusCtxPtr& context() const { return ctx_; }
    const TorusElement& x_image(int i) const { return ximg_[size_t(i)]; }
    const TorusElement& y_image(int i) const { return yimg_[size_t(i)]; }

    TorusElement apply(const TorusElement& u) const;
    TorusOperator compose(const TorusOperator& inner) const;

    friend bool operator==(const TorusOperator& a, const TorusOperator& b) {
        return a.ximg_ == b.ximg_ && a.yimg_ == b.yimg_;
    }

private:
    TorusCtxPtr ctx_;
    std::vector<TorusElement> ximg_, yimg_;
};

/// Multiplier data of a torus automorphism: per node a y-only series with
/// constant term 1, applied to x_i directly and to y_i through chibar powers.
/// `shifted` flips the sign of the defining y-exponent (the involution
/// x <-> x^-1, y <-> y^-1 conjugation convention).
struct AdOperator {
    TorusCtxPtr ctx;
    std::vector<TorusElement> multiplier;
    bool shifted = false;

    TorusOperator to_operator() const;
};

/// Operator x_i -> x_i Z^i, y_i -> y_i prod_j (Z^j)^{chibar(j,i)} from
/// per-node series with constant term 1.
AdOperator dt_operator(TorusCtxPtr ctx, std::vector<TorusElement> z_series);

enum class AdSignMode { Plain, Shifted };

/// One-step operator with multiplier 1 - y^{+-e_k} at the chosen node.
AdOperator ad_simple(TorusCtxPtr ctx, int node, AdSignMode mode);
/// Same multiplier inverted (geometric series to the y-degree bound).
AdOperator ad_simple_inverse(TorusCtxPtr ctx, int node, AdSignMode mode);

/// Operator equality on generators up to a total y-degree.
bool operators_equal(const TorusOperator& a, const TorusOperator& b, int ydeg);

/// Specialization y_i -> -prod_j x_j^{chibar(i,j)}; the result is x-only.
TorusElement fz_specialize(const TorusElement& u);

/// Additive map from dimension vectors into the exponent lattice.
struct ClassMap {
    // columns indexed by nodes; rows split into x and y exponent parts
    std::vector<std::vector<std::int32_t>> x_rows; // size n_x-lattice x nodes
    std::vector<std::vector<std::int32_t>> y_rows;

    static ClassMap y_identity(int nodes);
    ExpKey apply(const DimVector& v) const;
};

/// Character assembly x^g * sum_v f(v) * monomial(class of v). With
/// user-supplied weighted entries this realizes the weighted F-series
/// assembly; with the y-identity class map the entries land on y^v.
TorusElement cc_character(TorusCtxPtr ctx, std::vector<std::int32_t> g, const FSeries& f,
                          const ClassMap& cls);

/// Exact division in the Laurent ring; empty when the division leaves a
/// remainder.
std::optional<TorusElement> laurent_divide(const TorusElement& num, const TorusElement& den);

/// One Fomin-Zelevinsky exchange on a cluster of x-only Laurent elements:
/// x_k' = (prod_j x_in-cluster^{chi(j,k)} + prod_j x^{chi(k,j)}) / x_k.
std::vector<TorusElement> cluster_exchange(const std::vector<TorusElement>& cluster, int k);

} // namespace qp
