#include <doctest.h>

#include "qp/rational.hpp"

using qp::GaussRat;
using qp::Rat;

TEST_CASE("rational arithmetic is reduced and exact") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
    CHECK(Rat(3, 7) * Rat(7, 3) == Rat(1));
    CHECK(Rat(-1, 2) - Rat(1, 2) == Rat(-1));
    CHECK(Rat(5, -10) == Rat(-1, 2));
    CHECK(Rat(1, 2) / Rat(-3) == Rat(-1, 6));
    CHECK(Rat(7, 2) > Rat(3));
    CHECK(Rat(0).is_zero());
    CHECK(Rat(22, 7).str() == "22/7");
}

TEST_CASE("rational parse") {
    CHECK(Rat::parse("3/4") == Rat(3, 4));
    CHECK(Rat::parse("-5") == Rat(-5));
    CHECK(Rat::parse("-6/4") == Rat(-3, 2));
    CHECK_THROWS_AS(Rat::parse("x"), qp::input_error);
    CHECK_THROWS_AS((void)Rat(1, 0), qp::math_error);
}

TEST_CASE("rational overflow is detected, not wrapped") {
    const Rat big(std::int64_t(1) << 62);
    CHECK_THROWS_AS((void)(big * big), qp::overflow_error);
    CHECK_THROWS_AS((void)(big + big), qp::overflow_error);
    // cross-reduction keeps representable results representable
    CHECK(Rat(std::int64_t(1) << 40) * Rat(1, std::int64_t(1) << 40) == Rat(1));
}

TEST_CASE("gaussian rationals") {
    const GaussRat i(Rat(0), Rat(1));
    CHECK(i * i == GaussRat(Rat(-1)));
    const GaussRat z(Rat(1, 2), Rat(-1, 3));
    CHECK(z * GaussRat(Rat(2)) == GaussRat(Rat(1), Rat(-2, 3)));
    CHECK(z.abs_l1() == Rat(5, 6));
    CHECK((z / z) == GaussRat(Rat(1)));
}
