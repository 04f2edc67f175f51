#include "doctest.h"

#include <set>
#include <sstream>

#include "flanders/catalog.hpp"
#include "flanders/decomp.hpp"
#include "flanders/rangecompat.hpp"
#include "flanders/rng.hpp"
#include "flanders/verify.hpp"

using namespace flanders;

namespace {

affine_map local_map(const mat_space& dom, const row_vec& x) {
    affine_map f{dom, dom.base().apply(x), {}};
    for (const auto& g : dom.gens()) f.values_on_basis.push_back(g.apply(x));
    return f;
}

// evaluate a classified shape on one element
row_vec eval_shape(const rc_shape& s, const matrix& m) {
    const field f = m.fld();
    if (s.kind == rc_shape::kind_t::local) return m.apply(s.x_local);
    row_vec mx = m.apply(s.x);
    // coords of mx in the plane basis
    std::vector<row_vec> rows;
    for (int i = 0; i < s.plane_basis.rows(); ++i) {
        row_vec r(2);
        for (int j = 0; j < 2; ++j) r[j] = s.plane_basis.at(i, j);
        rows.push_back(std::move(r));
    }
    // solve plane_basis * c = mx
    row_vec c(2, 0);
    {
        std::vector<row_vec> aug = rows;
        for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(mx[i]);
        std::vector<int> piv = rref_rows(f, aug);
        for (std::size_t i = 0; i < aug.size(); ++i) {
            REQUIRE(piv[i] != 2);
            c[piv[i]] = aug[i][2];
        }
    }
    row_vec phic(2, 0);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) phic[a] = f.add(phic[a], f.mul(s.phi.at(a, b), c[b]));
    row_vec out = m.apply(s.x_prime);
    for (int i = 0; i < s.plane_basis.rows(); ++i)
        for (int a = 0; a < 2; ++a)
            out[i] = f.add(out[i], f.mul(s.plane_basis.at(i, a), phic[a]));
    return out;
}

} // namespace

TEST_CASE("local maps are range-compatible and recovered exactly") {
    field f2(2);
    mat_space full = mat_space::full_space(f2, 3, 2);
    affine_map f = local_map(full, {1, 0});
    CHECK(is_range_compatible(f));
    auto x = find_locality_witness(f);
    REQUIRE(x.has_value());
    CHECK(*x == row_vec{1, 0}); // unique since the full space separates points

    affine_map zero{full, row_vec(3, 0), std::vector<row_vec>(6, row_vec(3, 0))};
    CHECK(is_range_compatible(zero));
    auto xz = find_locality_witness(zero);
    REQUIRE(xz.has_value());
    CHECK(*xz == row_vec{0, 0});
}

TEST_CASE("a nonzero constant map on a linear domain is not range-compatible") {
    field f3(3);
    mat_space dom = mat_space::make(f3, 2, 2, matrix(f3, 2, 2),
                                    {matrix::unit(f3, 2, 2, 0, 0)}, true);
    affine_map f{dom, {1, 0}, {row_vec{0, 0}}};
    CHECK_FALSE(is_range_compatible(f));
    CHECK_FALSE(find_locality_witness(f).has_value());
    // the zero element violates with zero image, so no line can help
    CHECK_FALSE(find_qrc_line(f).has_value());
}

TEST_CASE("local implies range-compatible implies quasi-range-compatible") {
    for (const auto& e : desk_catalog(3, 3, 3)) {
        splitmix64 g = stream_for(51, e.space.hash());
        row_vec x(e.space.p());
        for (auto& v : x) v = static_cast<std::uint8_t>(g.below(e.space.fld().q()));
        affine_map f = local_map(e.space, x);
        CHECK(find_locality_witness(f).has_value());
        CHECK(is_range_compatible(f));
        CHECK(find_qrc_line(f).has_value());
        // every line works for a range-compatible map; the first one is returned
        CHECK(find_qrc_line(f)->entries() ==
              projective_points(e.space.fld(), e.space.n())[0].entries());
    }
}

TEST_CASE("a quasi-range-compatible map that is not range-compatible") {
    // domain {E_11 + t E_12} over F_3: every image is the e_1 line; the
    // constant value e_2 violates compatibility everywhere, but the line
    // D = span(e_1) is inside every image, making the condition vacuous
    field f3(3);
    mat_space dom = mat_space::make(f3, 2, 2, matrix::unit(f3, 2, 2, 0, 0),
                                    {matrix::unit(f3, 2, 2, 0, 1)}, false);
    affine_map f{dom, {0, 1}, {row_vec{0, 0}}};
    CHECK_FALSE(is_range_compatible(f));
    auto d = find_qrc_line(f);
    REQUIRE(d.has_value());
    CHECK(d->entries() == row_vec{1, 0});
}

TEST_CASE("classification recovers planted plane forms") {
    field f3(3);
    mat_space full = mat_space::full_space(f3, 2, 2);
    // plant F(M) = phi(M X) + M X' with a non-local phi
    row_vec x{1, 0}, x_prime{0, 1};
    matrix phi(f3, 2, 2, {0, 1, 1, 0});
    affine_map f{full, row_vec(2, 0), {}};
    auto plant = [&](const matrix& m) {
        row_vec mx = m.apply(x);
        row_vec v = m.apply(x_prime);
        row_vec phomx(2, 0);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                phomx[a] = f3.add(phomx[a], f3.mul(phi.at(a, b), mx[b]));
        for (int i = 0; i < 2; ++i) v[i] = f3.add(v[i], phomx[i]);
        return v;
    };
    f.value_at_base = plant(full.base());
    for (const auto& g : full.gens()) f.values_on_basis.push_back(plant(g));

    rc_shape shape = classify_rc_shape(f);
    REQUIRE(shape.kind != rc_shape::kind_t::neither);
    // whatever parameters came back, they must reproduce the map everywhere
    full.for_each_element([&](const matrix& m) { CHECK(eval_shape(shape, m) == plant(m)); });
}

TEST_CASE("every quasi-range-compatible affine map on full Mat_2(F_3) is local or plane") {
    field f3(3);
    mat_space full = mat_space::full_space(f3, 2, 2);
    std::vector<matrix> els = full.elements();
    const int n = 2;
    // vector index <-> F_3^2
    auto vec_idx = [&](const row_vec& v) { return v[0] + 3 * v[1]; };
    std::vector<std::uint16_t> im_mask(els.size());
    std::vector<std::uint8_t> line_mask(els.size()); // bit per projective line
    auto lines = projective_points(f3, n);
    for (std::size_t e = 0; e < els.size(); ++e) {
        for (std::uint8_t a = 0; a < 3; ++a)
            for (std::uint8_t b = 0; b < 3; ++b) {
                row_vec v{a, b};
                if (in_image(els[e], v)) im_mask[e] |= static_cast<std::uint16_t>(1 << vec_idx(v));
            }
        for (std::size_t li = 0; li < lines.size(); ++li)
            if (in_image(els[e], lines[li].entries()))
                line_mask[e] |= static_cast<std::uint8_t>(1 << li);
    }
    std::vector<std::vector<std::uint8_t>> coords(els.size());
    for (std::size_t e = 0; e < els.size(); ++e) coords[e] = full.coordinates(els[e]);

    std::uint64_t qrc_count = 0, local_count = 0, plane_count = 0;
    std::vector<row_vec> vals(5, row_vec(n, 0)); // base + 4 gens
    std::uint64_t total = 1;
    for (int i = 0; i < 10; ++i) total *= 3;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t xx = code;
        for (int i = 0; i < 5; ++i)
            for (int k = 0; k < n; ++k) {
                vals[i][k] = static_cast<std::uint8_t>(xx % 3);
                xx /= 3;
            }
        // F(element e)
        auto value_at = [&](std::size_t e) {
            row_vec v = vals[0];
            for (int i = 0; i < 4; ++i) {
                std::uint8_t ci = coords[e][i];
                if (!ci) continue;
                for (int k = 0; k < n; ++k)
                    v[k] = f3.add(v[k], f3.mul(ci, vals[i + 1][k]));
            }
            return v;
        };
        std::uint8_t feasible_lines = (1 << lines.size()) - 1;
        for (std::size_t e = 0; e < els.size() && feasible_lines; ++e) {
            row_vec v = value_at(e);
            if (!(im_mask[e] >> vec_idx(v) & 1)) feasible_lines &= line_mask[e];
        }
        if (!feasible_lines) continue;
        ++qrc_count;
        affine_map f{full, vals[0], {vals[1], vals[2], vals[3], vals[4]}};
        rc_shape shape = classify_rc_shape(f);
        REQUIRE(shape.kind != rc_shape::kind_t::neither);
        if (shape.kind == rc_shape::kind_t::local)
            ++local_count;
        else
            ++plane_count;
    }
    CHECK(qrc_count > 0);
    CHECK(local_count > 0);
    std::ostringstream os;
    os << "qrc maps: " << qrc_count << " (" << local_count << " local, " << plane_count
       << " plane)";
    INFO(os.str());
    CHECK(qrc_count == local_count + plane_count);
}

TEST_CASE("quasi-range-compatible linear maps on large subspaces of Mat_{3,2}(F_3)") {
    // codim <= 2n-4-eps = 2; one representative per equivalence class suffices
    // because both quasi-range-compatibility and the local/plane shapes are
    // carried along the group action
    field f3(3);
    const int n = 3, p = 2, m = 6;
    auto lines = projective_points(f3, n);
    std::set<std::string> seen;
    int reps = 0;
    std::uint64_t maps_checked = 0;
    for (int d = 4; d <= 6; ++d) {
        subspace_iterator it(f3, m, d);
        while (it.next()) {
            mat_space sp = mat_space::from_canonical_rows(f3, n, p, it.rows(), row_vec(m, 0));
            if (seen.count(sp.key())) continue;
            for (const auto& [k, w] : detail::orbit_of(sp).members) seen.insert(k);
            ++reps;

            std::vector<matrix> els = sp.elements();
            for (const auto& dline : lines) {
                // linear system for { F : D not in im M  =>  F(M) in im M }
                std::vector<row_vec> rows;
                for (const auto& mm : els) {
                    if (mm.is_zero()) continue;
                    if (in_image(mm, dline.entries())) continue;
                    auto cs = sp.coordinates(mm);
                    // left annihilator rows y with y M = 0
                    matrix mt = mm.transposed();
                    for (const auto& y : mt.kernel_basis()) {
                        row_vec row(static_cast<std::size_t>(3) * d, 0);
                        for (int i = 0; i < d; ++i)
                            for (int k = 0; k < n; ++k)
                                row[static_cast<std::size_t>(3) * i + k] =
                                    f3.mul(cs[i], y[k]);
                        rows.push_back(std::move(row));
                    }
                }
                matrix sys(f3, static_cast<int>(rows.size()), 3 * d);
                for (std::size_t i = 0; i < rows.size(); ++i)
                    for (int j = 0; j < 3 * d; ++j)
                        sys.set(static_cast<int>(i), j, rows[i][j]);
                auto basis = sys.kernel_basis(); // the QRC_D map family
                // enumerate it
                std::vector<std::uint8_t> coef(basis.size(), 0);
                std::uint64_t count = pow_u64(3, static_cast<unsigned>(basis.size()));
                REQUIRE(count <= 100000);
                for (std::uint64_t idx = 1; idx < count; ++idx) {
                    std::size_t i = 0;
                    while (coef[i] == 2) coef[i++] = 0;
                    ++coef[i];
                    row_vec flat(static_cast<std::size_t>(3) * d, 0);
                    for (std::size_t b = 0; b < basis.size(); ++b) {
                        if (!coef[b]) continue;
                        for (std::size_t k = 0; k < flat.size(); ++k)
                            flat[k] = f3.add(flat[k], f3.mul(coef[b], basis[b][k]));
                    }
                    affine_map fm{sp, row_vec(n, 0), {}};
                    for (int i2 = 0; i2 < d; ++i2)
                        fm.values_on_basis.push_back(
                            row_vec(flat.begin() + 3 * i2, flat.begin() + 3 * i2 + 3));
                    ++maps_checked;
                    rc_shape shape = classify_rc_shape(fm);
                    REQUIRE(shape.kind != rc_shape::kind_t::neither);
                }
            }
        }
    }
    CHECK(reps > 0);
    CHECK(maps_checked > 0);
}

TEST_CASE("map files round-trip") {
    mat_space u2 = named_space("U2", field(2)).space;
    affine_map f = local_map(u2, {1, 1});
    std::istringstream in(f.to_text());
    affine_map back = affine_map::parse(in);
    CHECK(back.domain == f.domain);
    CHECK(back.value_at_base == f.value_at_base);
    CHECK(back.values_on_basis == f.values_on_basis);
}
