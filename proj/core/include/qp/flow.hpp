#pragma once

#include "qp/endo.hpp"

#include <span>

namespace qp {

/// Polynomial in the time variable with complex coefficients.
struct TimePoly {
    std::vector<CD> coeffs; // constant term first

    TimePoly() = default;
    explicit TimePoly(std::vector<CD> c) : coeffs(std::move(c)) {}
    static TimePoly constant(CD c) { return TimePoly({c}); }

    CD eval(double t) const {
        CD acc{0.0, 0.0};
        for (size_t i = coeffs.size(); i-- > 0;) acc = acc * t + coeffs[i];
        return acc;
    }
    int degree() const { return int(coeffs.size()) - 1; }
};

/// One-parameter family of derivations, stored as arrow-indexed term lists
/// (path, polynomial-in-t coefficient). Paths have length >= 1 and lie in the
/// (source,target) block of their arrow.
class DerivationFamily {
public:
    DerivationFamily(QuiverPtr q, int trunc)
        : q_(std::move(q)), trunc_(trunc), terms_(size_t(q_->arrow_count())) {
        check_key_capacity(*q_, trunc_);
    }

    const QuiverPtr& quiver() const { return q_; }
    int trunc() const { return trunc_; }

    void add_term(int arrow, int degree, PathKey key, TimePoly poly) {
        if (arrow < 0 || arrow >= q_->arrow_count()) throw input_error("unknown arrow");
        if (degree < 1 || degree > trunc_) throw input_error("derivation paths have length 1..N");
        if (path_src(*q_, degree, key) != q_->src(arrow) || path_tgt(*q_, degree, key) != q_->tgt(arrow))
            throw input_error("derivation term leaves the (source,target) block of its arrow");
        terms_[size_t(arrow)].push_back({degree, key, std::move(poly)});
    }

    /// The derivation images at a fixed time, as series.
    std::vector<TruncSeries<CD>> at(double t) const {
        std::vector<TruncSeries<CD>> out;
        out.reserve(terms_.size());
        for (int a = 0; a < q_->arrow_count(); ++a) {
            TruncSeries<CD> s(q_, trunc_);
            for (const auto& [d, k, poly] : terms_[size_t(a)]) {
                const CD v = poly.eval(t);
                if (v != CD(0.0, 0.0)) s.mutable_terms(d).push_back({k, v});
            }
            s.normalize();
            out.push_back(std::move(s));
        }
        return out;
    }

    DerivationFamily negated() const {
        DerivationFamily f(q_, trunc_);
        f.terms_ = terms_;
        for (auto& per_arrow : f.terms_)
            for (auto& [d, k, poly] : per_arrow)
                for (auto& c : poly.coeffs) c = -c;
        return f;
    }

    const std::vector<std::vector<std::tuple<int, PathKey, TimePoly>>>& terms() const { return terms_; }

private:
    QuiverPtr q_;
    int trunc_ = 0;
    std::vector<std::vector<std::tuple<int, PathKey, TimePoly>>> terms_;
};

struct FlowState {
    double t = 0.0;
    Endomorphism<CD> endo;
};

/// Classical fixed-step fourth-order integration of du/dt = F(u(z,t), t) with
/// u(z,t0) = z. The right-hand side is the substitution of u into the family,
/// which is exact at the truncation, so time discretization is the only error
/// source.
FlowState integrate(const DerivationFamily& f, double t0, double t1, int steps);

struct HalvingDiagnostic {
    FlowState state;          // at `steps`
    double halving_delta = 0; // max coefficient difference against 2x steps
};

HalvingDiagnostic integrate_with_halving(const DerivationFamily& f, double t0, double t1, int steps);

struct ConservationReport {
    double max_deviation = 0.0;
    std::vector<double> deviations; // per grid time
};

/// Transport check for the family Theta_s = theta0 + s * theta1. The family
/// xi is expected to satisfy dTheta/ds = pi(sum_a xi_s(a) * D_a Theta_s); the
/// matching automorphism flow runs along -xi, and apply(H_s, Theta_s) is
/// compared against the value at the first grid time.
ConservationReport conservation_check(const CyclicPotential<CD>& theta0,
                                      const CyclicPotential<CD>& theta1, const DerivationFamily& xi,
                                      std::span<const double> grid, int total_steps);

} // namespace qp
