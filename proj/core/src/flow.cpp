#include "qp/flow.hpp"

#include <cmath>

namespace qp {

namespace {

using State = std::vector<TruncSeries<CD>>; // arrow images

State axpy(const State& u, double h, const State& k) {
    State out = u;
    for (size_t a = 0; a < out.size(); ++a) out[a] += CD(h, 0.0) * k[a];
    return out;
}

State rhs(const DerivationFamily& f, const State& u, double t) {
    const auto& q = f.quiver();
    auto endo = Endomorphism<CD>::from_images(q, f.trunc(), u);
    auto fields = f.at(t);
    State out;
    out.reserve(fields.size());
    for (auto& field : fields) out.push_back(endo.apply(field));
    return out;
}

State rk4(const DerivationFamily& f, double t0, double t1, int steps) {
    const auto& q = f.quiver();
    const int N = f.trunc();
    State u;
    for (int a = 0; a < q->arrow_count(); ++a) {
        int arr[1] = {a};
        u.push_back(TruncSeries<CD>::monomial(q, N, arr, CD(1.0, 0.0)));
    }
    const double h = (t1 - t0) / steps;
    double t = t0;
    for (int s = 0; s < steps; ++s) {
        State k1 = rhs(f, u, t);
        State k2 = rhs(f, axpy(u, h / 2, k1), t + h / 2);
        State k3 = rhs(f, axpy(u, h / 2, k2), t + h / 2);
        State k4 = rhs(f, axpy(u, h, k3), t + h);
        for (size_t a = 0; a < u.size(); ++a)
            u[a] += CD(h / 6, 0.0) * (k1[a] + CD(2.0, 0.0) * k2[a] + CD(2.0, 0.0) * k3[a] + k4[a]);
        t = t0 + (s + 1) * h;
    }
    return u;
}

double max_coeff_delta(const State& a, const State& b) {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        auto diff = a[i] - b[i];
        diff.for_each([&](int, PathKey, const CD& c) { m = std::max(m, std::abs(c)); });
    }
    return m;
}

} // namespace

FlowState integrate(const DerivationFamily& f, double t0, double t1, int steps) {
    if (steps < 1) throw input_error("integrate: steps must be >= 1");
    auto u = rk4(f, t0, t1, steps);
    return {t1, Endomorphism<CD>::from_images(f.quiver(), f.trunc(), std::move(u))};
}

HalvingDiagnostic integrate_with_halving(const DerivationFamily& f, double t0, double t1, int steps) {
    if (steps < 1) throw input_error("integrate: steps must be >= 1");
    auto u1 = rk4(f, t0, t1, steps);
    auto u2 = rk4(f, t0, t1, 2 * steps);
    HalvingDiagnostic d;
    d.halving_delta = max_coeff_delta(u1, u2);
    d.state = {t1, Endomorphism<CD>::from_images(f.quiver(), f.trunc(), std::move(u1))};
    return d;
}

ConservationReport conservation_check(const CyclicPotential<CD>& theta0,
                                      const CyclicPotential<CD>& theta1, const DerivationFamily& xi,
                                      std::span<const double> grid, int total_steps) {
    if (grid.size() < 2) throw input_error("conservation_check: need at least two grid times");
    if (!same_quiver(theta0.quiver(), xi.quiver()) || theta0.trunc() != xi.trunc())
        throw input_error("conservation_check: mismatched quiver or truncation");
    const auto flow_family = xi.negated();
    const double span_len = grid.back() - grid.front();

    auto theta_at = [&](double s) {
        return theta0 + CD(s, 0.0) * theta1;
    };

    ConservationReport rep;
    const auto reference = theta_at(grid.front());
    rep.deviations.push_back(0.0);

    State u;
    for (int a = 0; a < xi.quiver()->arrow_count(); ++a) {
        int arr[1] = {a};
        u.push_back(TruncSeries<CD>::monomial(xi.quiver(), xi.trunc(), arr, CD(1.0, 0.0)));
    }
    double t = grid.front();
    for (size_t g = 1; g < grid.size(); ++g) {
        const double target = grid[g];
        int steps = std::max(1, int(std::lround(total_steps * std::abs(target - t) /
                                                (span_len == 0 ? 1.0 : std::abs(span_len)))));
        // continue the same trajectory segment by segment
        const double h = (target - t) / steps;
        for (int s = 0; s < steps; ++s) {
            State k1 = rhs(flow_family, u, t);
            State k2 = rhs(flow_family, axpy(u, h / 2, k1), t + h / 2);
            State k3 = rhs(flow_family, axpy(u, h / 2, k2), t + h / 2);
            State k4 = rhs(flow_family, axpy(u, h, k3), t + h);
            for (size_t a = 0; a < u.size(); ++a)
                u[a] += CD(h / 6, 0.0) * (k1[a] + CD(2.0, 0.0) * k2[a] + CD(2.0, 0.0) * k3[a] + k4[a]);
            t += h;
        }
        t = target;
        auto endo = Endomorphism<CD>::from_images(xi.quiver(), xi.trunc(), u);
        auto transported = endo.apply(theta_at(target));
        auto diff = transported - reference;
        double m = 0;
        diff.for_each([&](int, PathKey, const CD& c) { m = std::max(m, std::abs(c)); });
        rep.deviations.push_back(m);
        rep.max_deviation = std::max(rep.max_deviation, m);
    }
    return rep;
}

} // namespace qp
