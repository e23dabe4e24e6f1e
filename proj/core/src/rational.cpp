#include "qp/rational.hpp"

#include <charconv>
#include <limits>

namespace qp {

namespace {
constexpr std::int64_t I64_MAX = std::numeric_limits<std::int64_t>::max();

std::int64_t parse_i64(std::string_view s) {
    std::int64_t v = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw input_error("bad integer literal: '" + std::string(s) + "'");
    return v;
}
} // namespace

void Rat::normalize_() {
    if (den_ == 0) throw math_error("rational with zero denominator");
    if (num_ == 0) { den_ = 1; return; }
    if (den_ < 0) {
        if (num_ == std::numeric_limits<std::int64_t>::min() || den_ == std::numeric_limits<std::int64_t>::min())
            throw overflow_error("rational overflow");
        num_ = -num_;
        den_ = -den_;
    }
    const std::int64_t g = std::gcd(iabs_(num_), den_);
    num_ /= g;
    den_ /= g;
}

Rat Rat::from_i128_(I128 n, I128 d) {
    if (d == 0) throw math_error("rational with zero denominator");
    if (n == 0) return Rat();
    if (d < 0) { n = -n; d = -d; }
    I128 a = n < 0 ? -n : n, b = d;
    while (b != 0) { I128 t = a % b; a = b; b = t; }
    n /= a;
    d /= a;
    if (n > I128(I64_MAX) || n < -I128(I64_MAX) || d > I128(I64_MAX))
        throw overflow_error("rational overflow (value outside 64-bit range)");
    Rat r;
    r.num_ = std::int64_t(n);
    r.den_ = std::int64_t(d);
    return r;
}

Rat Rat::parse(std::string_view s) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rat(parse_i64(s));
    return Rat(parse_i64(s.substr(0, slash)), parse_i64(s.substr(slash + 1)));
}

std::string Rat::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string GaussRat::str() const {
    if (im.is_zero()) return re.str();
    return re.str() + (im < Rat(0) ? "-" : "+") + im.abs().str() + "i";
}

} // namespace qp
