#include "doctest.h"

#include "flanders/field.hpp"

using namespace flanders;

TEST_CASE("field axioms hold exhaustively for every supported q") {
    for (unsigned q : {2u, 3u, 5u, 7u}) {
        field f(q);
        for (unsigned a = 0; a < q; ++a) {
            CHECK(f.add(a, 0) == a);
            CHECK(f.mul(a, 1) == a);
            CHECK(f.add(a, f.neg(a)) == 0);
            if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
            for (unsigned b = 0; b < q; ++b) {
                CHECK(f.add(a, b) == f.add(b, a));
                CHECK(f.mul(a, b) == f.mul(b, a));
                CHECK(f.add(a, b) < q);
                CHECK(f.mul(a, b) < q);
                CHECK(f.sub(a, b) == f.add(a, f.neg(b)));
                for (unsigned c = 0; c < q; ++c) {
                    CHECK(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
                    CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
                    CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

TEST_CASE("arithmetic examples") {
    CHECK(field_arith(field(3), field_op::add, 1, 2) == 0);
    CHECK(field_arith(field(2), field_op::mul, 1, 1) == 1);
    CHECK(field_arith(field(5), field_op::neg, 2) == 3);
}

TEST_CASE("inverses") {
    CHECK(field_inv(field(3), 2) == 2);
    // brute-force residue search as the oracle
    {
        field f(5);
        std::uint8_t want = 0;
        for (std::uint8_t b = 1; b < 5; ++b)
            if ((3 * b) % 5 == 1) want = b;
        CHECK(want == 2);
        CHECK(field_inv(f, 3) == want);
    }
    CHECK(field_inv(field(2), 1) == 1);

    for (unsigned q : {2u, 3u, 5u, 7u}) {
        field f(q);
        for (unsigned a = 1; a < q; ++a) CHECK(f.inv(f.inv(a)) == a);
    }
}

TEST_CASE("epsilon") {
    CHECK(epsilon(field(2)) == 2);
    CHECK(epsilon(field(3)) == 0);
    CHECK(epsilon(field(5)) == 0);
    CHECK(epsilon(field(7)) == 0);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(field_inv(field(3), 0), error);
    CHECK_THROWS_AS(field(4), error);
    CHECK_THROWS_AS(field(6), error);
    CHECK_THROWS_AS(field(1), error);
    CHECK_THROWS_AS(field(11), error);
    try {
        field_inv(field(3), 0);
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::division_by_zero);
    }
}
