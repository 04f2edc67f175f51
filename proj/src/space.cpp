#include "flanders/space.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <istream>
#include <sstream>

namespace flanders {

std::uint64_t pow_u64(std::uint64_t q, unsigned e) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (r > UINT64_MAX / q) return UINT64_MAX;
        r *= q;
    }
    return r;
}

std::uint64_t default_budget(const field& f) {
    if (const char* env = std::getenv("FLANDERS_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return f.q() == 2 ? 100000000ULL : 10000000ULL;
}

// --- covector ---------------------------------------------------------------

covector::covector(field f, std::vector<std::uint8_t> entries) : f_(f), v_(std::move(entries)) {
    int first = -1;
    for (std::size_t i = 0; i < v_.size(); ++i)
        if (v_[i]) { first = static_cast<int>(i); break; }
    if (first < 0) fail(errc::param_out_of_range, "covector must be nonzero");
    std::uint8_t s = f_.inv(v_[first]);
    if (s != 1)
        for (auto& x : v_) x = f_.mul(s, x);
}

matrix covector::kernel_cols() const {
    const int m = length();
    matrix row(f_, 1, m, v_);
    auto basis = row.kernel_basis();
    matrix cols(f_, m, static_cast<int>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (int i = 0; i < m; ++i) cols.set(i, static_cast<int>(j), basis[j][i]);
    return cols;
}

matrix covector::annihilator_rows() const {
    matrix cols = kernel_cols();
    return cols.transposed();
}

std::vector<covector> projective_points(field f, int m) {
    std::vector<covector> out;
    if (m <= 0) return out;
    std::vector<std::uint8_t> v(m, 0);
    const unsigned q = f.q();
    // odometer over all q^m vectors, keep those whose first nonzero is 1
    while (true) {
        int i = m - 1;
        while (i >= 0 && v[i] == q - 1) v[i--] = 0;
        if (i < 0) break;
        ++v[i];
        int first = 0;
        while (first < m && !v[first]) ++first;
        if (first < m && v[first] == 1) out.emplace_back(f, v);
    }
    return out;
}

// --- vectorization ----------------------------------------------------------

row_vec vectorize(const matrix& m) { return m.entries(); }

matrix devectorize(field f, int n, int p, const row_vec& v) { return matrix(f, n, p, v); }

// --- mat_space --------------------------------------------------------------

mat_space mat_space::make(field f, int n, int p, const matrix& base,
                          const std::vector<matrix>& generators, bool linear) {
    if (base.fld() != f) fail(errc::field_mismatch, "make_space: base field mismatch");
    if (base.rows() != n || base.cols() != p) fail(errc::shape_mismatch, "make_space: base shape");
    for (const auto& g : generators) {
        if (g.fld() != f) fail(errc::field_mismatch, "make_space: generator field mismatch");
        if (g.rows() != n || g.cols() != p) fail(errc::shape_mismatch, "make_space: generator shape");
    }
    if (linear && !base.is_zero())
        fail(errc::shape_mismatch, "make_space: linear space requires zero base");

    std::vector<row_vec> rows;
    rows.reserve(generators.size());
    for (const auto& g : generators) rows.push_back(vectorize(g));
    std::vector<int> pivots = rref_rows(f, rows);
    row_vec rb = reduce_mod_rows(f, vectorize(base), rows, pivots);
    return from_canonical_rows(f, n, p, std::move(rows), std::move(rb));
}

mat_space mat_space::from_canonical_rows(field f, int n, int p, std::vector<row_vec> basis_rows,
                                         row_vec reduced_base) {
    mat_space s(f, n, p);
    s.base_ = devectorize(f, n, p, reduced_base);
    s.linear_ = s.base_.is_zero();
    s.gens_.reserve(basis_rows.size());
    for (auto& r : basis_rows) {
        int piv = -1;
        for (std::size_t k = 0; k < r.size(); ++k)
            if (r[k]) { piv = static_cast<int>(k); break; }
        assert(piv >= 0 && r[piv] == 1);
        s.pivots_.push_back(piv);
        s.gens_.push_back(devectorize(f, n, p, r));
    }
    return s;
}

mat_space mat_space::zero_space(field f, int n, int p) {
    return make(f, n, p, matrix(f, n, p), {}, true);
}

mat_space mat_space::full_space(field f, int n, int p) {
    std::vector<matrix> gens;
    gens.reserve(static_cast<std::size_t>(n) * p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) gens.push_back(matrix::unit(f, n, p, i, j));
    return make(f, n, p, matrix(f, n, p), gens, true);
}

bool mat_space::operator==(const mat_space& o) const {
    return f_ == o.f_ && n_ == o.n_ && p_ == o.p_ && base_ == o.base_ && gens_ == o.gens_;
}

std::size_t mat_space::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::uint8_t b) {
        h ^= b;
        h *= 1099511628211ULL;
    };
    mix(static_cast<std::uint8_t>(f_.q()));
    mix(static_cast<std::uint8_t>(n_));
    mix(static_cast<std::uint8_t>(p_));
    for (std::uint8_t b : base_.entries()) mix(b);
    for (const auto& g : gens_)
        for (std::uint8_t b : g.entries()) mix(b);
    return static_cast<std::size_t>(h);
}

std::string mat_space::key() const {
    std::string k;
    k.reserve(3 + (gens_.size() + 1) * base_.entries().size());
    k.push_back(static_cast<char>(f_.q()));
    k.push_back(static_cast<char>(n_));
    k.push_back(static_cast<char>(p_));
    k.append(base_.entries().begin(), base_.entries().end());
    for (const auto& g : gens_) k.append(g.entries().begin(), g.entries().end());
    return k;
}

bool mat_space::contains(const matrix& m) const {
    if (m.fld() != f_) fail(errc::field_mismatch, "contains: field mismatch");
    if (m.rows() != n_ || m.cols() != p_) fail(errc::shape_mismatch, "contains: shape mismatch");
    row_vec diff = vectorize(m - base_);
    std::vector<row_vec> rows;
    rows.reserve(gens_.size());
    for (const auto& g : gens_) rows.push_back(vectorize(g));
    row_vec red = reduce_mod_rows(f_, std::move(diff), rows, pivots_);
    for (std::uint8_t v : red)
        if (v) return false;
    return true;
}

std::vector<std::uint8_t> mat_space::coordinates(const matrix& m) const {
    row_vec diff = vectorize(m - base_);
    std::vector<std::uint8_t> coords(gens_.size());
    for (std::size_t i = 0; i < gens_.size(); ++i) coords[i] = diff[pivots_[i]];
    return coords;
}

void mat_space::for_each_element(const std::function<void(const matrix&)>& fn,
                                 std::uint64_t budget) const {
    if (budget == 0) budget = default_budget(f_);
    const std::uint64_t count = element_count();
    if (count > budget) throw budget_error(count, budget, "element enumeration");

    matrix cur = base_;
    fn(cur);
    const int d = dim();
    if (d == 0) return;

    if (f_.q() == 2) {
        // Gray code: element k -> k+1 toggles generator ctz(k+1)
        for (std::uint64_t k = 1; k < count; ++k) {
            int bit = 0;
            std::uint64_t x = k;
            while (!(x & 1)) { x >>= 1; ++bit; }
            cur.add_in_place(gens_[bit]);
            fn(cur);
        }
        return;
    }

    // odometer; a digit wrapping q-1 -> 0 contributes -(q-1)*B = +B mod q,
    // so each step adds B_j for every wrapped digit plus the incremented one
    std::vector<std::uint8_t> digits(d, 0);
    const unsigned q = f_.q();
    for (std::uint64_t k = 1; k < count; ++k) {
        int j = 0;
        while (j < d && digits[j] == q - 1) {
            digits[j] = 0;
            cur.add_in_place(gens_[j]);
            ++j;
        }
        ++digits[j];
        cur.add_in_place(gens_[j]);
        fn(cur);
    }
}

std::vector<matrix> mat_space::elements(std::uint64_t budget) const {
    std::vector<matrix> out;
    out.reserve(static_cast<std::size_t>(element_count()));
    for_each_element([&](const matrix& m) { out.push_back(m); }, budget);
    return out;
}

int mat_space::upper_rank(std::uint64_t budget) const {
    const int cap = std::min(n_, p_);
    int best = 0;
    try {
        for_each_element(
            [&](const matrix& m) {
                int r = m.rank();
                if (r > best) {
                    best = r;
                    if (best == cap) throw best; // early exit
                }
            },
            budget);
    } catch (int) {
    }
    return best;
}

mat_space mat_space::translation() const {
    if (linear_) return *this;
    return make(f_, n_, p_, matrix(f_, n_, p_), gens_, true);
}

// Solve for coefficient combinations of the generators subject to a linear
// condition given by `constraint`, which maps a generator to a stacked
// constraint vector. Returns the sub-space of the translation space.
static mat_space solve_gen_constraints(const mat_space& s,
                                       const std::function<row_vec(const matrix&)>& constraint) {
    const field f = s.fld();
    const int d = s.dim();
    if (d == 0) return mat_space::zero_space(f, s.n(), s.p());
    std::vector<row_vec> cols;
    cols.reserve(d);
    std::size_t rows_len = 0;
    for (const auto& g : s.gens()) {
        cols.push_back(constraint(g));
        rows_len = cols.back().size();
    }
    // build the rows_len x d system
    matrix sys(f, static_cast<int>(rows_len), d);
    for (int j = 0; j < d; ++j)
        for (std::size_t i = 0; i < rows_len; ++i)
            sys.set(static_cast<int>(i), j, cols[j][i]);
    auto combos = sys.kernel_basis(); // coefficient vectors
    std::vector<matrix> gens;
    for (const auto& c : combos) {
        matrix g(f, s.n(), s.p());
        for (int j = 0; j < d; ++j)
            if (c[j]) g.add_scaled_in_place(s.gens()[j], c[j]);
        gens.push_back(std::move(g));
    }
    return mat_space::make(f, s.n(), s.p(), matrix(f, s.n(), s.p()), gens, true);
}

mat_space mat_space::stabilizer_kernel(const covector& h) const {
    if (h.length() != p_) fail(errc::shape_mismatch, "stabilizer_kernel: covector length");
    matrix k = h.kernel_cols(); // p x (p-1)
    return solve_gen_constraints(*this, [&](const matrix& g) { return vectorize(g * k); });
}

mat_space mat_space::stabilizer_image(const covector& d) const {
    if (d.length() != n_) fail(errc::shape_mismatch, "stabilizer_image: vector length");
    matrix a = d.annihilator_rows(); // (n-1) x n
    return solve_gen_constraints(*this, [&](const matrix& g) { return vectorize(a * g); });
}

mat_space mat_space::restrict_cols(const matrix& c) const {
    if (c.rows() != p_) fail(errc::shape_mismatch, "restrict_cols: basis shape");
    std::vector<matrix> gens;
    gens.reserve(gens_.size());
    for (const auto& g : gens_) gens.push_back(g * c);
    return make(f_, n_, c.cols(), base_ * c, gens, false);
}

mat_space mat_space::project_rows(const matrix& k) const {
    if (k.cols() != n_) fail(errc::shape_mismatch, "project_rows: basis shape");
    std::vector<matrix> gens;
    gens.reserve(gens_.size());
    for (const auto& g : gens_) gens.push_back(k * g);
    return make(f_, k.rows(), p_, k * base_, gens, false);
}

mat_space mat_space::delete_rows_cols(const std::vector<int>& rows,
                                      const std::vector<int>& cols) const {
    for (int i : rows)
        if (i < 0 || i >= n_) fail(errc::index_out_of_range, "delete_rows_cols: row index");
    for (int j : cols)
        if (j < 0 || j >= p_) fail(errc::index_out_of_range, "delete_rows_cols: column index");
    std::vector<int> keep_rows, keep_cols;
    for (int i = 0; i < n_; ++i)
        if (std::find(rows.begin(), rows.end(), i) == rows.end()) keep_rows.push_back(i);
    for (int j = 0; j < p_; ++j)
        if (std::find(cols.begin(), cols.end(), j) == cols.end()) keep_cols.push_back(j);
    std::vector<matrix> gens;
    gens.reserve(gens_.size());
    for (const auto& g : gens_) gens.push_back(g.submatrix(keep_rows, keep_cols));
    return make(f_, static_cast<int>(keep_rows.size()), static_cast<int>(keep_cols.size()),
                base_.submatrix(keep_rows, keep_cols), gens, false);
}

mat_space mat_space::apply_equivalence(const matrix& pmat, const matrix& qmat) const {
    if (!pmat.invertible() || !qmat.invertible())
        fail(errc::not_invertible, "apply_equivalence: P and Q must be invertible");
    if (pmat.cols() != n_ || qmat.rows() != p_)
        fail(errc::shape_mismatch, "apply_equivalence: P/Q shapes");
    std::vector<matrix> gens;
    gens.reserve(gens_.size());
    for (const auto& g : gens_) gens.push_back(pmat * g * qmat);
    return make(f_, pmat.rows(), qmat.cols(), pmat * base_ * qmat, gens, false);
}

mat_space mat_space::transposed() const {
    std::vector<matrix> gens;
    gens.reserve(gens_.size());
    for (const auto& g : gens_) gens.push_back(g.transposed());
    return make(f_, p_, n_, base_.transposed(), gens, false);
}

mat_space mat_space::padded(int n2, int p2) const {
    if (n2 < n_ || p2 < p_) fail(errc::shape_mismatch, "padded: target smaller than source");
    auto pad = [&](const matrix& m) {
        matrix r(f_, n2, p2);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < p_; ++j) r.set(i, j, m.at(i, j));
        return r;
    };
    std::vector<matrix> gens;
    gens.reserve(gens_.size());
    for (const auto& g : gens_) gens.push_back(pad(g));
    return make(f_, n2, p2, pad(base_), gens, false);
}

// --- file format ------------------------------------------------------------

std::string mat_space::to_text() const {
    std::ostringstream os;
    os << "matspace 1\n";
    os << "q=" << f_.q() << " n=" << n_ << " p=" << p_ << " kind="
       << (linear_ ? "linear" : "affine") << " dim=" << dim() << '\n';
    os << "base:\n" << base_.to_text();
    for (int i = 0; i < dim(); ++i) os << "gen " << (i + 1) << ":\n" << gens_[i].to_text();
    return os.str();
}

nlohmann::json mat_space::to_json() const {
    auto mat_to_json = [](const matrix& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < m.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int j = 0; j < m.cols(); ++j) row.push_back(static_cast<int>(m.at(i, j)));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    nlohmann::json j;
    j["format"] = "matspace";
    j["version"] = 1;
    j["q"] = f_.q();
    j["n"] = n_;
    j["p"] = p_;
    j["kind"] = linear_ ? "linear" : "affine";
    j["dim"] = dim();
    j["base"] = mat_to_json(base_);
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : gens_) gens.push_back(mat_to_json(g));
    j["gens"] = std::move(gens);
    return j;
}

static void expect_line(std::istream& in, const std::string& want) {
    std::string line;
    do {
        if (!std::getline(in, line)) fail(errc::format_error, "matspace: expected '" + want + "'");
    } while (line.empty());
    if (line != want) fail(errc::format_error, "matspace: expected '" + want + "', got '" + line + "'");
}

mat_space mat_space::parse_text(std::istream& in) {
    expect_line(in, "matspace 1");
    std::string header;
    if (!std::getline(in, header)) fail(errc::format_error, "matspace: missing header line");
    unsigned q = 0;
    int n = -1, p = -1, d = -1;
    std::string kind;
    {
        std::istringstream hs(header);
        std::string tok;
        while (hs >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) fail(errc::format_error, "matspace: bad header token " + tok);
            std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            if (key == "q") q = static_cast<unsigned>(std::stoul(val));
            else if (key == "n") n = std::stoi(val);
            else if (key == "p") p = std::stoi(val);
            else if (key == "kind") kind = val;
            else if (key == "dim") d = std::stoi(val);
            else fail(errc::format_error, "matspace: unknown header key " + key);
        }
    }
    if (n < 0 || p < 0 || d < 0 || (kind != "linear" && kind != "affine"))
        fail(errc::format_error, "matspace: incomplete header");
    field f(q);
    expect_line(in, "base:");
    matrix base = matrix::parse_text(f, n, p, in);
    in >> std::ws;
    std::vector<matrix> gens;
    for (int i = 0; i < d; ++i) {
        expect_line(in, "gen " + std::to_string(i + 1) + ":");
        gens.push_back(matrix::parse_text(f, n, p, in));
        in >> std::ws;
    }
    mat_space s = make(f, n, p, base, gens, false);
    if (s.dim() != d) fail(errc::format_error, "matspace: declared dim does not match generators");
    if ((kind == "linear") != s.is_linear())
        fail(errc::format_error, "matspace: declared kind does not match content");
    return s;
}

mat_space mat_space::parse_json(const nlohmann::json& j) {
    if (!j.contains("q") || !j.contains("n") || !j.contains("p") || !j.contains("base") ||
        !j.contains("gens"))
        fail(errc::format_error, "matspace json: missing fields");
    field f(j.at("q").get<unsigned>());
    int n = j.at("n").get<int>(), p = j.at("p").get<int>();
    auto mat_from_json = [&](const nlohmann::json& rows) {
        matrix m(f, n, p);
        if (static_cast<int>(rows.size()) != n) fail(errc::format_error, "matspace json: row count");
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[i].size()) != p)
                fail(errc::format_error, "matspace json: column count");
            for (int c = 0; c < p; ++c) {
                long v = rows[i][c].get<long>();
                if (v < 0 || v >= static_cast<long>(f.q()))
                    fail(errc::format_error, "matspace json: entry not a canonical residue");
                m.set(i, c, static_cast<std::uint8_t>(v));
            }
        }
        return m;
    };
    matrix base = mat_from_json(j.at("base"));
    std::vector<matrix> gens;
    for (const auto& g : j.at("gens")) gens.push_back(mat_from_json(g));
    mat_space s = make(f, n, p, base, gens, false);
    if (j.contains("dim") && s.dim() != j.at("dim").get<int>())
        fail(errc::format_error, "matspace json: declared dim does not match generators");
    if (j.contains("kind")) {
        std::string kind = j.at("kind").get<std::string>();
        if ((kind == "linear") != s.is_linear())
            fail(errc::format_error, "matspace json: declared kind does not match content");
    }
    return s;
}

mat_space mat_space::parse(std::istream& in) {
    in >> std::ws;
    if (in.peek() == '{') {
        nlohmann::json j;
        in >> j;
        return parse_json(j);
    }
    return parse_text(in);
}

} // namespace flanders
