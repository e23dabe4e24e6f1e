#pragma once

#include "qp/errors.hpp"

#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

namespace qp {

/// Exact rational on 64-bit words. Always stored reduced with positive
/// denominator; every operation checks that the reduced result fits, and
/// throws qp::overflow_error otherwise.
class Rat {
public:
    constexpr Rat() = default;
    Rat(std::int64_t n) : num_(n) {}
    Rat(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize_(); }

    static Rat parse(std::string_view s);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_integer() const { return den_ == 1; }

    Rat abs() const { return Rat(num_ < 0 ? -num_ : num_, den_); }

    friend Rat operator-(const Rat& a) { Rat r; r.num_ = -a.num_; r.den_ = a.den_; return r; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        if (a.num_ == 0) return b;
        if (b.num_ == 0) return a;
        const std::int64_t g = std::gcd(a.den_, b.den_);
        const I128 bd = b.den_ / g, ad = a.den_ / g;
        const I128 n = I128(a.num_) * bd + I128(b.num_) * ad;
        const I128 d = I128(a.den_) * bd;
        return from_i128_(n, d);
    }
    friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }

    friend Rat operator*(const Rat& a, const Rat& b) {
        if (a.num_ == 0 || b.num_ == 0) return Rat();
        const std::int64_t g1 = std::gcd(iabs_(a.num_), b.den_);
        const std::int64_t g2 = std::gcd(iabs_(b.num_), a.den_);
        const I128 n = I128(a.num_ / g1) * (b.num_ / g2);
        const I128 d = I128(a.den_ / g2) * (b.den_ / g1);
        return from_i128_(n, d);
    }

    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw math_error("rational division by zero");
        Rat inv;
        inv.num_ = b.num_ < 0 ? -b.den_ : b.den_;
        inv.den_ = iabs_(b.num_);
        return a * inv;
    }

    Rat& operator+=(const Rat& o) { *this = *this + o; return *this; }
    Rat& operator-=(const Rat& o) { *this = *this - o; return *this; }
    Rat& operator*=(const Rat& o) { *this = *this * o; return *this; }
    Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return I128(a.num_) * b.den_ < I128(b.num_) * a.den_; }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    double to_double() const { return double(num_) / double(den_); }
    std::string str() const;

private:
    using I128 = __int128;
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;

    static std::int64_t iabs_(std::int64_t v) { return v < 0 ? -v : v; }

    void normalize_();
    static Rat from_i128_(I128 n, I128 d);
};

/// Gaussian rational: a + b·i with exact rational a, b.
struct GaussRat {
    Rat re, im;

    GaussRat() = default;
    GaussRat(Rat r) : re(r) {}
    GaussRat(std::int64_t n) : re(n) {}
    GaussRat(Rat r, Rat i) : re(r), im(i) {}

    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    friend GaussRat operator-(const GaussRat& a) { return {-a.re, -a.im}; }
    friend GaussRat operator+(const GaussRat& a, const GaussRat& b) { return {a.re + b.re, a.im + b.im}; }
    friend GaussRat operator-(const GaussRat& a, const GaussRat& b) { return {a.re - b.re, a.im - b.im}; }
    friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
        const Rat n2 = b.re * b.re + b.im * b.im;
        if (n2.is_zero()) throw math_error("gaussian rational division by zero");
        return {(a.re * b.re + a.im * b.im) / n2, (a.im * b.re - a.re * b.im) / n2};
    }
    GaussRat& operator+=(const GaussRat& o) { *this = *this + o; return *this; }
    GaussRat& operator-=(const GaussRat& o) { *this = *this - o; return *this; }
    GaussRat& operator*=(const GaussRat& o) { *this = *this * o; return *this; }

    friend bool operator==(const GaussRat& a, const GaussRat& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

    // l1 modulus |re| + |im|; exact and norm-equivalent to the usual modulus.
    Rat abs_l1() const { return re.abs() + im.abs(); }

    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
    std::string str() const;
};

using CD = std::complex<double>;

// ---- coefficient traits ----------------------------------------------------

template <class C> struct coeff_traits;

template <> struct coeff_traits<Rat> {
    static constexpr bool is_exact = true;
    using abs_type = Rat;
    static bool is_zero(const Rat& c) { return c.is_zero(); }
    static Rat one() { return Rat(1); }
    static Rat abs(const Rat& c) { return c.abs(); }
    static double abs_double(const Rat& c) { return std::abs(c.to_double()); }
    static CD to_complex(const Rat& c) { return {c.to_double(), 0.0}; }
};

template <> struct coeff_traits<GaussRat> {
    static constexpr bool is_exact = true;
    using abs_type = Rat;
    static bool is_zero(const GaussRat& c) { return c.is_zero(); }
    static GaussRat one() { return GaussRat(Rat(1)); }
    static Rat abs(const GaussRat& c) { return c.abs_l1(); }
    static double abs_double(const GaussRat& c) { return std::abs(c.to_complex()); }
    static CD to_complex(const GaussRat& c) { return c.to_complex(); }
};

template <> struct coeff_traits<CD> {
    static constexpr bool is_exact = false;
    using abs_type = double;
    static bool is_zero(const CD& c) { return c == CD(0.0, 0.0); }
    static CD one() { return {1.0, 0.0}; }
    static double abs(const CD& c) { return std::abs(c); }
    static double abs_double(const CD& c) { return std::abs(c); }
    static CD to_complex(const CD& c) { return c; }
};

template <> struct coeff_traits<std::int64_t> {
    static constexpr bool is_exact = true;
    using abs_type = std::int64_t;
    static bool is_zero(std::int64_t c) { return c == 0; }
    static std::int64_t one() { return 1; }
    static std::int64_t abs(std::int64_t c) { return c < 0 ? -c : c; }
    static double abs_double(std::int64_t c) { return double(c < 0 ? -c : c); }
    static CD to_complex(std::int64_t c) { return {double(c), 0.0}; }
};

} // namespace qp
