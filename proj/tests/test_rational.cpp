#include <catch2/catch_amalgamated.hpp>

#include "ops/rational.hpp"

using ops::Rational;

TEST_CASE("rationals reduce to lowest terms") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(10, 10).is_one());
    CHECK_THROWS(Rational(1, 0));
    CHECK_THROWS(Rational(-1, 2));
}

TEST_CASE("ceil_mul is exact") {
    CHECK(Rational(1, 2).ceil_mul(10) == 5);
    CHECK(Rational(1, 2).ceil_mul(7) == 4);
    CHECK(Rational(1, 3).ceil_mul(10) == 4);
    CHECK(Rational(2, 3).ceil_mul(10) == 7);
    CHECK(Rational(1, 1).ceil_mul(9) == 9);
    CHECK(Rational(3, 10).ceil_mul(1) == 1);
    // Values where floating point would round the wrong way.
    CHECK(Rational(1, 3).ceil_mul(3) == 1);
    CHECK(Rational(7, 10).ceil_mul(10) == 7);
}

TEST_CASE("unit-interval guard") {
    CHECK(Rational(1, 10).in_unit_interval_left_open());
    CHECK(Rational(1, 1).in_unit_interval_left_open());
    CHECK_FALSE(Rational(3, 2).in_unit_interval_left_open());
    CHECK_FALSE(Rational(0, 5).in_unit_interval_left_open());
}
