#pragma once

#include "qp/jacobi.hpp"
#include "qp/series.hpp"

#include <cstdint>
#include <map>
#include <span>

namespace qp {

/// Minimal dense matrix over a field-like type.
template <class F>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<F> a; // row major

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c), F{}) {}
    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = coeff_traits<F>::one();
        return m;
    }

    F& at(int i, int j) { return a[size_t(i) * size_t(cols) + size_t(j)]; }
    const F& at(int i, int j) const { return a[size_t(i) * size_t(cols) + size_t(j)]; }

    friend Mat operator*(const Mat& x, const Mat& y) {
        if (x.cols != y.rows) throw input_error("matrix shape mismatch");
        Mat r(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                const F& v = x.at(i, k);
                if (coeff_traits<F>::is_zero(v)) continue;
                for (int j = 0; j < y.cols; ++j) r.at(i, j) += v * y.at(k, j);
            }
        return r;
    }
    friend Mat operator+(const Mat& x, const Mat& y) {
        if (x.rows != y.rows || x.cols != y.cols) throw input_error("matrix shape mismatch");
        Mat r = x;
        for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
        return r;
    }
    friend Mat operator*(const F& s, const Mat& x) {
        Mat r = x;
        for (auto& v : r.a) v = s * v;
        return r;
    }
    F trace() const {
        F t{};
        for (int i = 0; i < std::min(rows, cols); ++i) t += at(i, i);
        return t;
    }
    bool is_zero() const {
        for (const auto& v : a)
            if (!coeff_traits<F>::is_zero(v)) return false;
        return true;
    }
    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

/// Arrow-indexed matrices A_a of shape v_{t(a)} x v_{s(a)}.
template <class F>
struct MatrixRep {
    QuiverPtr quiver;
    DimVector dim;
    std::vector<Mat<F>> mats;

    static MatrixRep make(QuiverPtr q, DimVector d, std::vector<Mat<F>> m) {
        if (d.size() != q->node_count()) throw input_error("dimension vector length mismatch");
        if (int(m.size()) != q->arrow_count()) throw input_error("one matrix per arrow required");
        for (int a = 0; a < q->arrow_count(); ++a) {
            if (m[size_t(a)].rows != int(d[q->tgt(a)]) || m[size_t(a)].cols != int(d[q->src(a)]))
                throw input_error("matrix shape mismatch for arrow '" + q->arrow(a).id + "'");
        }
        return {std::move(q), std::move(d), std::move(m)};
    }

    /// Certified by (sum of the embedded arrow operators)^totaldim = 0.
    bool nilpotent() const {
        const int n = int(dim.total());
        if (n == 0) return true;
        std::vector<int> offset(size_t(quiver->node_count()) + 1, 0);
        for (int i = 0; i < quiver->node_count(); ++i) offset[size_t(i) + 1] = offset[size_t(i)] + int(dim[i]);
        Mat<F> big(n, n);
        for (int a = 0; a < quiver->arrow_count(); ++a) {
            const auto& m = mats[size_t(a)];
            for (int i = 0; i < m.rows; ++i)
                for (int j = 0; j < m.cols; ++j)
                    big.at(offset[size_t(quiver->tgt(a))] + i, offset[size_t(quiver->src(a))] + j) += m.at(i, j);
        }
        Mat<F> pw = Mat<F>::identity(n);
        for (int i = 0; i < n; ++i) pw = pw * big;
        return pw.is_zero();
    }
};

/// Matrix of a one-block series at a representation: sum over stored paths of
/// coeff * A_{a_m} ... A_{a_1}. The series must live in a single
/// (source,target) block; the result has shape v_tgt-block x v_src-block.
template <class F>
Mat<F> evaluate_series(const TruncSeries<F>& s, const MatrixRep<F>& rep, int src_node, int tgt_node) {
    const Quiver& q = *rep.quiver;
    Mat<F> out(int(rep.dim[tgt_node]), int(rep.dim[src_node]));
    std::vector<int> digits;
    s.for_each([&](int d, PathKey k, const F& c) {
        if (path_src(q, d, k) != src_node || path_tgt(q, d, k) != tgt_node)
            throw input_error("series leaves the requested block");
        if (d == 0) {
            for (int i = 0; i < out.rows; ++i) out.at(i, i) += c;
            return;
        }
        decode_path(q, d, k, digits);
        Mat<F> m = rep.mats[size_t(digits[0])];
        for (int i = 1; i < d; ++i) m = rep.mats[size_t(digits[size_t(i)])] * m;
        out = out + c * m;
    });
    return out;
}

/// Trace of the potential along a representation (the critical-locus value of
/// the associated scalar function at that point).
template <class F>
F cs_evaluate(const CyclicPotential<F>& phi, const MatrixRep<F>& rep) {
    if (!same_quiver(phi.quiver(), rep.quiver)) throw input_error("cs_evaluate: quiver mismatch");
    const Quiver& q = *rep.quiver;
    F acc{};
    std::vector<int> digits;
    phi.for_each([&](int d, PathKey k, const F& c) {
        if (d == 0) {
            acc += c * F(std::int64_t(rep.dim[int(k)]));
            return;
        }
        decode_path(q, d, k, digits);
        Mat<F> m = rep.mats[size_t(digits[0])];
        for (int i = 1; i < d; ++i) m = rep.mats[size_t(digits[size_t(i)])] * m;
        acc += c * m.trace();
    });
    return acc;
}

struct CriticalPointReport {
    double max_gradient_discrepancy = 0.0; // finite differences vs cyclic derivatives
    double gradient_norm = 0.0;            // max |algebraic gradient entry|
    bool algebraic_gradient_vanishes = false;
    double step = 0.0;
    double tolerance = 0.0;
};

/// Central finite differences of the trace function against the evaluated
/// cyclic derivatives. Separates gradient correctness from criticality.
CriticalPointReport critical_point_check(const CyclicPotential<CD>& phi, const MatrixRep<CD>& rep,
                                         double h, double tol);

// ---- finite-field counting ----------------------------------------------------

/// All w-dimensional subspaces of F_p^n, each as a row-reduced basis.
struct SubspaceList {
    int n = 0, w = 0;
    std::int64_t p = 2;
    std::vector<std::vector<std::vector<std::int64_t>>> bases; // subspace -> rows
};

SubspaceList enumerate_subspaces(int n, int w, std::int64_t p);

/// Number of w-dimensional subspaces of F_p^n (Gaussian binomial).
double gaussian_binomial_estimate(int n, int w, std::int64_t p);

/// Quotients of dimension `quotient_dim` are counted as stable subspace
/// tuples of the complementary dimension. The budget guards the product of
/// per-node subspace counts.
std::uint64_t count_submodules(const MatrixRep<std::int64_t>& rep, std::int64_t p,
                               const DimVector& quotient_dim, double budget = 1e7);

/// Stable subspace tuples of every dimension at once (partition-check helper).
std::uint64_t count_all_stable_tuples(const MatrixRep<std::int64_t>& rep, std::int64_t p,
                                      double budget = 1e7);

enum class FProvenance { FiniteFieldCount, DirectEnumeration, UserWeight };

struct FSeriesEntry {
    std::int64_t chi = 0;
    FProvenance provenance = FProvenance::FiniteFieldCount;
};

struct FSeries {
    int nodes = 0;
    std::map<DimVector, FSeriesEntry> entries;
    std::vector<DimVector> rejected; // count not polynomial at the tested primes

    std::int64_t at(const DimVector& v) const {
        auto it = entries.find(v);
        return it == entries.end() ? 0 : it->second.chi;
    }
};

/// Point counts over each prime, fitted by the minimal-degree interpolating
/// polynomial in q and evaluated at q = 1. At least two primes beyond the
/// fitted degree must confirm the fit; entries that fail are reported in
/// `rejected` and omitted.
FSeries fseries(const MatrixRep<Rat>& rep, std::span<const std::int64_t> primes, double budget = 1e7);

/// Left module P_i on the quotient basis of paths starting at node i; needs a
/// finiteness certificate so the basis is finite and the action closes.
MatrixRep<Rat> jacobi_module(const JacobiTruncation<Rat>& jt, int node);

} // namespace qp
