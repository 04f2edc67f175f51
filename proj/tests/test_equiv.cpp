#include "doctest.h"

#include "flanders/catalog.hpp"
#include "flanders/equiv.hpp"
#include "flanders/rng.hpp"

using namespace flanders;

namespace {

matrix rand_invertible(field f, int n, splitmix64& g) {
    while (true) {
        matrix m(f, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.set(i, j, static_cast<std::uint8_t>(g.below(f.q())));
        if (m.invertible()) return m;
    }
}

} // namespace

TEST_CASE("rank profiles") {
    field f2(2);
    rank_profile full = compute_rank_profile(mat_space::full_space(f2, 2, 2));
    CHECK(full.set_counts == std::vector<std::uint64_t>{1, 9, 6});

    rank_profile zero = compute_rank_profile(mat_space::zero_space(f2, 2, 2));
    CHECK(zero.set_counts == std::vector<std::uint64_t>{1, 0, 0});

    rank_profile u2 = compute_rank_profile(named_space("U2", f2).space);
    CHECK(u2.set_counts == std::vector<std::uint64_t>{0, 4, 0});
    CHECK(u2.translation_counts == std::vector<std::uint64_t>{1, 1, 2});

    // sum of counts is the element count
    std::uint64_t total = 0;
    for (auto c : u2.set_counts) total += c;
    CHECK(total == 4);
}

TEST_CASE("profile invariance under the group action") {
    for (const auto& e : desk_catalog(3, 3, 3)) {
        splitmix64 g = stream_for(41, e.space.hash());
        matrix pm = rand_invertible(e.space.fld(), e.space.n(), g);
        matrix qm = rand_invertible(e.space.fld(), e.space.p(), g);
        CHECK(compute_rank_profile(e.space) ==
              compute_rank_profile(e.space.apply_equivalence(pm, qm)));
    }
}

TEST_CASE("planted witnesses are found for every catalog space") {
    std::vector<catalog_entry> entries = desk_catalog(3, 3, 3);
    entries.push_back(named_space("U4", field(3)));
    entries.push_back(compression_entry(field(3), 4, 4, 1, 2));
    for (const auto& e : entries) {
        splitmix64 g = stream_for(42, e.space.hash());
        matrix pm = rand_invertible(e.space.fld(), e.space.n(), g);
        matrix qm = rand_invertible(e.space.fld(), e.space.p(), g);
        mat_space moved = e.space.apply_equivalence(pm, qm);
        equiv_result res = are_equivalent(e.space, moved);
        REQUIRE(res.kind == equiv_kind::yes);
        CHECK(res.witness->verify(e.space, moved));
    }
}

TEST_CASE("U3 is equivalent to its transpose") {
    mat_space u3 = named_space("U3", field(3)).space;
    equiv_result res = are_equivalent(u3, u3.transposed());
    REQUIRE(res.kind == equiv_kind::yes);
    CHECK(res.witness->verify(u3, u3.transposed()));
}

TEST_CASE("R(1,0) and R(0,1) are distinguished by the stabilizer multiset") {
    field f2(2);
    mat_space a = compression_space(f2, 2, 2, 1, 0);
    mat_space b = compression_space(f2, 2, 2, 0, 1);
    equiv_result res = are_equivalent(a, b);
    CHECK(res.kind == equiv_kind::no);
    CHECK(res.reason.find("S_H") != std::string::npos);
}

TEST_CASE("the search layer itself reports completed-empty searches") {
    field f2(2);
    mat_space a = mat_space::make(f2, 2, 2, matrix(f2, 2, 2),
                                  {matrix::unit(f2, 2, 2, 0, 0)}, true);
    mat_space b = mat_space::make(f2, 2, 2, matrix(f2, 2, 2), {matrix::identity(f2, 2)}, true);
    equiv_result res = detail::search_equivalence(a, b, 1000000);
    CHECK(res.kind == equiv_kind::no);
    CHECK(res.reason.find("exhaustive") != std::string::npos);

    // rank-matched single generators are always equivalent
    mat_space c = mat_space::make(f2, 2, 2, matrix(f2, 2, 2),
                                  {matrix::unit(f2, 2, 2, 1, 1)}, true);
    equiv_result yes = detail::search_equivalence(a, c, 1000000);
    REQUIRE(yes.kind == equiv_kind::yes);
    CHECK(yes.witness->verify(a, c));
}

TEST_CASE("dimension-zero spaces compare by rank normal form") {
    field f3(3);
    matrix e11 = matrix::unit(f3, 2, 2, 0, 0);
    matrix e22 = matrix::unit(f3, 2, 2, 1, 1);
    mat_space pa = mat_space::make(f3, 2, 2, e11, {}, false);
    mat_space pb = mat_space::make(f3, 2, 2, e22, {}, false);
    equiv_result res = are_equivalent(pa, pb);
    REQUIRE(res.kind == equiv_kind::yes);
    CHECK(res.witness->verify(pa, pb));

    mat_space pc = mat_space::make(f3, 2, 2, matrix::identity(f3, 2), {}, false);
    CHECK(are_equivalent(pa, pc).kind == equiv_kind::no);
}

TEST_CASE("budget exhaustion reports inconclusive") {
    mat_space u4 = named_space("U4", field(3)).space;
    equiv_result res = are_equivalent(u4, u4.transposed(), 3);
    CHECK(res.kind == equiv_kind::inconclusive);
}

TEST_CASE("shape and field preconditions") {
    field f2(2), f3(3);
    CHECK_THROWS_AS(
        are_equivalent(mat_space::zero_space(f2, 2, 2), mat_space::zero_space(f3, 2, 2)), error);
    CHECK_THROWS_AS(
        are_equivalent(mat_space::zero_space(f2, 2, 2), mat_space::zero_space(f2, 2, 3)), error);
    // dim mismatch is a fast no
    CHECK(are_equivalent(mat_space::zero_space(f2, 2, 2), mat_space::full_space(f2, 2, 2)).kind ==
          equiv_kind::no);
    // linear vs affine is a fast no
    field ff(2);
    mat_space aff = mat_space::make(ff, 2, 2, matrix::unit(ff, 2, 2, 0, 1),
                                    {matrix::unit(ff, 2, 2, 0, 0)}, false);
    mat_space lin = mat_space::make(ff, 2, 2, matrix(ff, 2, 2),
                                    {matrix::unit(ff, 2, 2, 0, 0)}, true);
    CHECK(are_equivalent(aff, lin).kind == equiv_kind::no);
}

TEST_CASE("the decision is symmetric on random small spaces") {
    for (unsigned q : {2u, 3u}) {
        field f(q);
        for (int trial = 0; trial < 60; ++trial) {
            splitmix64 g = stream_for(45, q * 1000 + trial);
            auto rand_space = [&]() {
                int d = 1 + static_cast<int>(g.below(3));
                std::vector<matrix> gens;
                for (int i = 0; i < d; ++i) {
                    matrix m(f, 2, 3);
                    for (int r = 0; r < 2; ++r)
                        for (int c = 0; c < 3; ++c)
                            m.set(r, c, static_cast<std::uint8_t>(g.below(q)));
                    gens.push_back(std::move(m));
                }
                return mat_space::make(f, 2, 3, matrix(f, 2, 3), gens, true);
            };
            mat_space a = rand_space(), b = rand_space();
            if (a.dim() != b.dim()) continue;
            equiv_result ab = are_equivalent(a, b);
            equiv_result ba = are_equivalent(b, a);
            CHECK(ab.kind == ba.kind);
            if (ab.kind == equiv_kind::yes) {
                CHECK(ab.witness->verify(a, b));
                CHECK(ba.witness->verify(b, a));
            }
        }
    }
}

TEST_CASE("rank normal form") {
    splitmix64 g(44);
    for (unsigned q : {2u, 3u, 5u}) {
        field f(q);
        for (int trial = 0; trial < 20; ++trial) {
            matrix m(f, 3, 4);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 4; ++j) m.set(i, j, static_cast<std::uint8_t>(g.below(q)));
            auto [pm, qm] = rank_normal_form(m);
            matrix c = pm * m * qm;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 4; ++j)
                    CHECK(c.at(i, j) == ((i == j && i < m.rank()) ? 1 : 0));
        }
    }
}
