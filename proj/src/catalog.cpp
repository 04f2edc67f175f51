#include "flanders/catalog.hpp"

namespace flanders {

void catalog_entry::verify_expected(std::uint64_t budget) const {
    if (space.dim() != expected.dim)
        fail(errc::param_out_of_range, name + ": dimension " + std::to_string(space.dim()) +
                                           " does not match expected " +
                                           std::to_string(expected.dim));
    int urk = space.upper_rank(budget);
    if (urk != expected.upper_rank)
        fail(errc::param_out_of_range, name + ": upper rank " + std::to_string(urk) +
                                           " does not match expected " +
                                           std::to_string(expected.upper_rank));
}

long long dim_compression(long long n, long long p, long long s, long long t) {
    return n * t + s * (p - t);
}

mat_space compression_space(field f, int n, int p, int s, int t) {
    if (s < 0 || s > n || t < 0 || t > p)
        fail(errc::param_out_of_range, "compression_space: need 0<=s<=n, 0<=t<=p");
    std::vector<matrix> gens;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j)
            if (i < s || j < t) gens.push_back(matrix::unit(f, n, p, i, j));
    return mat_space::make(f, n, p, matrix(f, n, p), gens, true);
}

catalog_entry compression_entry(field f, int n, int p, int s, int t) {
    catalog_entry e{"R(" + std::to_string(s) + "," + std::to_string(t) + ")@" +
                        std::to_string(n) + "x" + std::to_string(p) + "/F" +
                        std::to_string(f.q()),
                    compression_space(f, n, p, s, t),
                    {dim_compression(n, p, s, t), std::min({s + t, n, p})}};
    return e;
}

namespace {

catalog_entry make_u2(field f) {
    if (f.q() != 2) fail(errc::wrong_field, "U2 is defined over F_2");
    matrix base(f, 2, 2);
    base.set(1, 1, 1); // x = y = 0 gives diag(0,1)
    std::vector<matrix> gens{matrix::identity(f, 2), matrix::unit(f, 2, 2, 0, 1)};
    return {"U2", mat_space::make(f, 2, 2, base, gens, false), {2, 1}};
}

catalog_entry make_u3(field f) {
    if (f.q() != 3) fail(errc::wrong_field, "U3 is defined over F_3");
    matrix base(f, 3, 3);
    base.set(1, 1, 1);
    base.set(2, 2, f.neg(1)); // diag(0, 1, -1)
    std::vector<matrix> gens{matrix::identity(f, 3), matrix::unit(f, 3, 3, 0, 1),
                             matrix::unit(f, 3, 3, 0, 2), matrix::unit(f, 3, 3, 1, 2)};
    return {"U3", mat_space::make(f, 3, 3, base, gens, false), {4, 2}};
}

catalog_entry make_u4(field f) {
    if (f.q() != 3) fail(errc::wrong_field, "U4 is defined over F_3");
    matrix gx(f, 4, 4), gy(f, 4, 4);
    // diagonal pattern (x, y, x+y, x-y)
    gx.set(0, 0, 1);
    gx.set(2, 2, 1);
    gx.set(3, 3, 1);
    gy.set(1, 1, 1);
    gy.set(2, 2, 1);
    gy.set(3, 3, f.neg(1));
    std::vector<matrix> gens{gx, gy};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) gens.push_back(matrix::unit(f, 4, 4, i, j));
    return {"U4", mat_space::make(f, 4, 4, matrix(f, 4, 4), gens, true), {8, 3}};
}

catalog_entry make_j3(field f) {
    if (f.q() != 2) fail(errc::wrong_field, "J3 is defined over F_2");
    matrix ga(f, 3, 3), gb(f, 3, 3);
    ga.set(0, 0, 1);
    ga.set(2, 2, 1);
    gb.set(1, 1, 1);
    gb.set(2, 2, 1);
    std::vector<matrix> gens{ga, gb, matrix::unit(f, 3, 3, 0, 1), matrix::unit(f, 3, 3, 0, 2),
                             matrix::unit(f, 3, 3, 1, 2)};
    return {"J3", mat_space::make(f, 3, 3, matrix(f, 3, 3), gens, true), {5, 2}};
}

catalog_entry make_alt(field f, int n) {
    if (n < 1) fail(errc::param_out_of_range, "ALT needs a positive size");
    std::vector<matrix> gens;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            matrix g(f, n, n);
            g.set(i, j, 1);
            g.set(j, i, f.neg(1));
            gens.push_back(std::move(g));
        }
    int urk = (n % 2 == 0) ? n : n - 1;
    return {"ALT" + std::to_string(n), mat_space::make(f, n, n, matrix(f, n, n), gens, true),
            {static_cast<long long>(n) * (n - 1) / 2, urk}};
}

catalog_entry make_triang(field f, int n) {
    if (n < 1) fail(errc::param_out_of_range, "TRIANG needs a positive size");
    std::vector<matrix> gens;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) gens.push_back(matrix::unit(f, n, n, i, j));
    return {"TRIANG" + std::to_string(n), mat_space::make(f, n, n, matrix(f, n, n), gens, true),
            {static_cast<long long>(n) * (n + 1) / 2, n}};
}

} // namespace

catalog_entry named_space(const std::string& name, field f, int size) {
    if (name == "U2") return make_u2(f);
    if (name == "U3") return make_u3(f);
    if (name == "U4") return make_u4(f);
    if (name == "J3") return make_j3(f);
    if (name == "ALT") return make_alt(f, size);
    if (name == "TRIANG") return make_triang(f, size);
    fail(errc::param_out_of_range, "unknown catalog name: " + name);
}

mat_space vee_construct(const mat_space& w, int n, int p) {
    if (w.n() != w.p()) fail(errc::shape_mismatch, "vee_construct: w must be square");
    const int s = w.n();
    if (!(n >= p && p >= s)) fail(errc::shape_mismatch, "vee_construct: need n >= p >= s");
    const field f = w.fld();
    auto embed = [&](const matrix& a) {
        matrix m(f, n, p);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) m.set(i, j, a.at(i, j));
        return m;
    };
    std::vector<matrix> gens;
    for (const auto& g : w.gens()) gens.push_back(embed(g));
    for (int i = 0; i < s; ++i)
        for (int j = s; j < p; ++j) gens.push_back(matrix::unit(f, n, p, i, j)); // B block
    for (int i = s; i < n; ++i)
        for (int j = s; j < p; ++j) gens.push_back(matrix::unit(f, n, p, i, j)); // C block
    return mat_space::make(f, n, p, embed(w.base()), gens, false);
}

std::vector<std::string> catalog_names() { return {"U2", "U3", "U4", "J3", "ALT", "TRIANG"}; }

std::vector<catalog_entry> desk_catalog(int max_n, int max_p, unsigned max_q) {
    std::vector<catalog_entry> out;
    auto fields = std::vector<unsigned>{};
    for (unsigned q : {2u, 3u, 5u, 7u})
        if (q <= max_q) fields.push_back(q);

    for (unsigned q : fields) {
        field f(q);
        if (q == 2 && max_n >= 2 && max_p >= 2) out.push_back(make_u2(f));
        if (q == 2 && max_n >= 3 && max_p >= 3) out.push_back(make_j3(f));
        if (q == 3 && max_n >= 3 && max_p >= 3) out.push_back(make_u3(f));
        if (q == 3 && max_n >= 4 && max_p >= 4) out.push_back(make_u4(f));
        for (int n = 2; n <= std::min(max_n, max_p); ++n) {
            out.push_back(make_alt(f, n));
            out.push_back(make_triang(f, n));
        }
        for (int n = 1; n <= max_n; ++n)
            for (int p = 1; p <= max_p; ++p)
                for (int s = 0; s <= n; ++s)
                    for (int t = 0; t <= p; ++t) {
                        if (s + t < 1 || s + t > std::min(n, p)) continue;
                        out.push_back(compression_entry(f, n, p, s, t));
                    }
    }
    return out;
}

} // namespace flanders
