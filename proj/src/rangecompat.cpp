#include "flanders/rangecompat.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace flanders {

row_vec affine_map::value_at_coords(const std::vector<std::uint8_t>& coords) const {
    const field f = domain.fld();
    row_vec v = value_at_base;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (!coords[i]) continue;
        for (std::size_t k = 0; k < v.size(); ++k)
            v[k] = f.add(v[k], f.mul(coords[i], values_on_basis[i][k]));
    }
    return v;
}

row_vec affine_map::value_at(const matrix& m) const { return value_at_coords(domain.coordinates(m)); }

bool in_image(const matrix& m, const row_vec& v) {
    bool zero = true;
    for (auto x : v)
        if (x) { zero = false; break; }
    if (zero) return true;
    matrix aug(m.fld(), m.rows(), m.cols() + 1);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) aug.set(i, j, m.at(i, j));
        aug.set(i, m.cols(), v[i]);
    }
    return aug.rank() == m.rank();
}

bool is_range_compatible(const affine_map& f, std::uint64_t budget) {
    bool ok = true;
    try {
        f.domain.for_each_element(
            [&](const matrix& m) {
                if (!in_image(m, f.value_at(m))) {
                    ok = false;
                    throw 0; // early exit
                }
            },
            budget);
    } catch (int) {
    }
    return ok;
}

namespace {

// least-squares-free exact solve: returns any x with A x = b, or nullopt
std::optional<row_vec> solve_linear(const field& f, const std::vector<row_vec>& a_rows,
                                    const row_vec& b, int ncols) {
    std::vector<row_vec> aug;
    aug.reserve(a_rows.size());
    for (std::size_t i = 0; i < a_rows.size(); ++i) {
        row_vec r = a_rows[i];
        r.push_back(b[i]);
        aug.push_back(std::move(r));
    }
    std::vector<int> pivots = rref_rows(f, aug);
    row_vec x(ncols, 0);
    for (std::size_t i = 0; i < aug.size(); ++i) {
        if (pivots[i] == ncols) return std::nullopt; // inconsistent
        x[pivots[i]] = aug[i][ncols];
    }
    return x;
}

} // namespace

std::optional<row_vec> find_locality_witness(const affine_map& f) {
    const field fld = f.domain.fld();
    const int n = f.domain.n(), p = f.domain.p();
    std::vector<row_vec> rows;
    row_vec rhs;
    auto add_eq = [&](const matrix& m, const row_vec& val) {
        for (int i = 0; i < n; ++i) {
            row_vec r(p, 0);
            for (int j = 0; j < p; ++j) r[j] = m.at(i, j);
            rows.push_back(std::move(r));
            rhs.push_back(val[i]);
        }
    };
    add_eq(f.domain.base(), f.value_at_base);
    for (int i = 0; i < f.domain.dim(); ++i) add_eq(f.domain.gens()[i], f.values_on_basis[i]);
    return solve_linear(fld, rows, rhs, p);
}

std::optional<covector> find_qrc_line(const affine_map& f, std::uint64_t budget) {
    const field fld = f.domain.fld();
    std::vector<matrix> violators;
    bool hopeless = false;
    try {
        f.domain.for_each_element(
            [&](const matrix& m) {
                if (!in_image(m, f.value_at(m))) {
                    if (m.rank() == 0) {
                        hopeless = true; // no line lies inside a zero image
                        throw 0;
                    }
                    violators.push_back(m);
                }
            },
            budget);
    } catch (int) {
    }
    if (hopeless) return std::nullopt;
    for (const auto& d : projective_points(fld, f.domain.n())) {
        bool ok = true;
        for (const auto& m : violators)
            if (!in_image(m, d.entries())) { ok = false; break; }
        if (ok) return d;
    }
    return std::nullopt;
}

namespace {

// coordinates of v in the 2-column basis pb (pb has independent columns)
std::optional<row_vec> coords_in_plane(const field& f, const matrix& pb, const row_vec& v) {
    std::vector<row_vec> rows;
    for (int i = 0; i < pb.rows(); ++i) {
        row_vec r(pb.cols());
        for (int j = 0; j < pb.cols(); ++j) r[j] = pb.at(i, j);
        rows.push_back(std::move(r));
    }
    return solve_linear(f, rows, v, pb.cols());
}

} // namespace

rc_shape classify_rc_shape(const affine_map& f, std::uint64_t budget) {
    (void)budget;
    rc_shape out;
    if (auto x = find_locality_witness(f)) {
        out.kind = rc_shape::kind_t::local;
        out.x_local = *x;
        return out;
    }
    const field fld = f.domain.fld();
    const int n = f.domain.n(), p = f.domain.p();
    if (n < 2) return out;
    const int d = f.domain.dim();

    // gathers the values the candidate shape must reproduce
    std::vector<const matrix*> mats;
    std::vector<const row_vec*> vals;
    mats.push_back(&f.domain.base());
    vals.push_back(&f.value_at_base);
    for (int i = 0; i < d; ++i) {
        mats.push_back(&f.domain.gens()[i]);
        vals.push_back(&f.values_on_basis[i]);
    }

    for (const auto& xc : projective_points(fld, p)) {
        const row_vec& x = xc.entries();
        // span of S x
        std::vector<row_vec> span;
        for (const matrix* m : mats) span.push_back(m->apply(x));
        std::vector<int> pivots = rref_rows(fld, span);
        if (static_cast<int>(span.size()) > 2) continue;

        if (span.size() == 2) {
            matrix pb(fld, n, 2);
            for (int j = 0; j < 2; ++j)
                for (int i = 0; i < n; ++i) pb.set(i, j, span[j][i]);
            // unknowns: phi (2x2, row-major slots 0..3) then x' (p)
            std::vector<row_vec> rows;
            row_vec rhs;
            for (std::size_t k = 0; k < mats.size(); ++k) {
                auto c = coords_in_plane(fld, pb, mats[k]->apply(x));
                for (int i = 0; i < n; ++i) {
                    row_vec r(4 + p, 0);
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b) r[a * 2 + b] = fld.mul(pb.at(i, a), (*c)[b]);
                    for (int j = 0; j < p; ++j) r[4 + j] = mats[k]->at(i, j);
                    rows.push_back(std::move(r));
                    rhs.push_back((*vals[k])[i]);
                }
            }
            auto sol = solve_linear(fld, rows, rhs, 4 + p);
            if (!sol) continue;
            out.kind = rc_shape::kind_t::plane;
            out.x = x;
            out.x_prime.assign(sol->begin() + 4, sol->end());
            out.plane_basis = pb;
            matrix phi(fld, 2, 2);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) phi.set(a, b, (*sol)[a * 2 + b]);
            out.phi = phi;
            return out;
        }

        if (span.size() == 1) {
            // S x lies on the line spanned by u; the plane is determined by
            // the solve itself: F(M) = alpha(M) w + M x' with w free
            const row_vec& u = span[0];
            const int lead = pivots[0];
            std::vector<row_vec> rows;
            row_vec rhs;
            for (std::size_t k = 0; k < mats.size(); ++k) {
                std::uint8_t alpha = mats[k]->apply(x)[lead];
                for (int i = 0; i < n; ++i) {
                    row_vec r(n + p, 0);
                    r[i] = alpha;
                    for (int j = 0; j < p; ++j) r[n + j] = mats[k]->at(i, j);
                    rows.push_back(std::move(r));
                    rhs.push_back((*vals[k])[i]);
                }
            }
            auto sol = solve_linear(fld, rows, rhs, n + p);
            if (!sol) continue;
            row_vec w(sol->begin(), sol->begin() + n);
            // plane containing u and w, canonically completed
            std::vector<row_vec> plane{u, w};
            std::vector<int> ppiv = rref_rows(fld, plane);
            for (int j = 0; j < n && static_cast<int>(plane.size()) < 2; ++j) {
                if (std::find(ppiv.begin(), ppiv.end(), j) != ppiv.end()) continue;
                row_vec e(n, 0);
                e[j] = 1;
                plane.push_back(std::move(e));
                ppiv = rref_rows(fld, plane);
            }
            matrix pb(fld, n, 2);
            for (int j = 0; j < 2; ++j)
                for (int i = 0; i < n; ++i) pb.set(i, j, plane[j][i]);
            auto cu = coords_in_plane(fld, pb, u);
            auto cw = coords_in_plane(fld, pb, w);
            // phi with phi(u) = w: rank-1 choice  phi = cw * lambda^T, lambda . cu = 1
            int nz = (*cu)[0] ? 0 : 1;
            std::uint8_t scale = fld.inv((*cu)[nz]);
            matrix phi(fld, 2, 2);
            for (int a = 0; a < 2; ++a) phi.set(a, nz, fld.mul((*cw)[a], scale));
            out.kind = rc_shape::kind_t::plane;
            out.x = x;
            out.x_prime.assign(sol->begin() + n, sol->end());
            out.plane_basis = pb;
            out.phi = phi;
            return out;
        }
        // span empty: F would be M -> M x', i.e. local, which already failed
    }
    return out;
}

// --- map file ---------------------------------------------------------------

std::string affine_map::to_text() const {
    std::ostringstream os;
    os << domain.to_text();
    auto put_vec = [&](const row_vec& v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ' ';
            os << static_cast<int>(v[i]);
        }
        os << '\n';
    };
    os << "F(base):\n";
    put_vec(value_at_base);
    for (int i = 0; i < domain.dim(); ++i) {
        os << "F(gen " << (i + 1) << "):\n";
        put_vec(values_on_basis[i]);
    }
    return os.str();
}

namespace {

void expect_exact(std::istream& in, const std::string& want) {
    std::string line;
    do {
        if (!std::getline(in, line)) fail(errc::format_error, "mapfile: expected '" + want + "'");
    } while (line.empty());
    if (line != want) fail(errc::format_error, "mapfile: expected '" + want + "', got '" + line + "'");
}

row_vec parse_vec(const field& f, int n, std::istream& in) {
    row_vec v(n);
    for (int i = 0; i < n; ++i) {
        long x;
        if (!(in >> x)) fail(errc::format_error, "mapfile: truncated vector");
        if (x < 0 || x >= static_cast<long>(f.q()))
            fail(errc::format_error, "mapfile: entry not a canonical residue");
        v[i] = static_cast<std::uint8_t>(x);
    }
    in >> std::ws;
    return v;
}

} // namespace

affine_map affine_map::parse(std::istream& in) {
    mat_space dom = mat_space::parse_text(in);
    in >> std::ws;
    affine_map f{dom, {}, {}};
    expect_exact(in, "F(base):");
    f.value_at_base = parse_vec(dom.fld(), dom.n(), in);
    for (int i = 0; i < dom.dim(); ++i) {
        expect_exact(in, "F(gen " + std::to_string(i + 1) + "):");
        f.values_on_basis.push_back(parse_vec(dom.fld(), dom.n(), in));
    }
    return f;
}

} // namespace flanders
