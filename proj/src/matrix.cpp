#include "flanders/matrix.hpp"

#include <istream>
#include <sstream>

namespace flanders {

matrix::matrix(field f, int n, int p) : f_(f), n_(n), p_(p) {
    if (n < 0 || p < 0) fail(errc::param_out_of_range, "negative matrix shape");
    e_.assign(static_cast<std::size_t>(n) * p, 0);
}

matrix::matrix(field f, int n, int p, std::vector<std::uint8_t> entries)
    : f_(f), n_(n), p_(p), e_(std::move(entries)) {
    if (n < 0 || p < 0) fail(errc::param_out_of_range, "negative matrix shape");
    if (e_.size() != static_cast<std::size_t>(n) * p)
        fail(errc::shape_mismatch, "entry count does not match shape");
    for (std::uint8_t v : e_)
        if (!f_.valid_element(v)) fail(errc::param_out_of_range, "entry not a canonical residue");
}

matrix matrix::identity(field f, int n) {
    matrix m(f, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

matrix matrix::unit(field f, int n, int p, int i, int j) {
    matrix m(f, n, p);
    m.set(i, j, 1);
    return m;
}

bool matrix::is_zero() const {
    for (std::uint8_t v : e_)
        if (v) return false;
    return true;
}

matrix matrix::operator+(const matrix& o) const {
    if (f_ != o.f_) fail(errc::field_mismatch, "matrix add: field mismatch");
    if (n_ != o.n_ || p_ != o.p_) fail(errc::dimension_mismatch, "matrix add: shape mismatch");
    matrix r = *this;
    for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = f_.add(e_[k], o.e_[k]);
    return r;
}

matrix matrix::operator-(const matrix& o) const {
    if (f_ != o.f_) fail(errc::field_mismatch, "matrix sub: field mismatch");
    if (n_ != o.n_ || p_ != o.p_) fail(errc::dimension_mismatch, "matrix sub: shape mismatch");
    matrix r = *this;
    for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = f_.sub(e_[k], o.e_[k]);
    return r;
}

matrix matrix::operator*(const matrix& o) const {
    if (f_ != o.f_) fail(errc::field_mismatch, "matrix mul: field mismatch");
    if (p_ != o.n_) fail(errc::dimension_mismatch, "matrix mul: inner dimensions differ");
    matrix r(f_, n_, o.p_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < p_; ++k) {
            std::uint8_t aik = at(i, k);
            if (!aik) continue;
            for (int j = 0; j < o.p_; ++j)
                r.set(i, j, f_.add(r.at(i, j), f_.mul(aik, o.at(k, j))));
        }
    return r;
}

matrix matrix::scaled(std::uint8_t c) const {
    matrix r = *this;
    for (auto& v : r.e_) v = f_.mul(v, c);
    return r;
}

matrix matrix::negated() const {
    matrix r = *this;
    for (auto& v : r.e_) v = f_.neg(v);
    return r;
}

matrix matrix::transposed() const {
    matrix r(f_, p_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < p_; ++j) r.set(j, i, at(i, j));
    return r;
}

void matrix::add_scaled_in_place(const matrix& o, std::uint8_t c) {
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] = f_.add(e_[k], f_.mul(c, o.e_[k]));
}

void matrix::add_in_place(const matrix& o) {
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] = f_.add(e_[k], o.e_[k]);
}

matrix matrix::submatrix(const std::vector<int>& keep_rows, const std::vector<int>& keep_cols) const {
    for (int i : keep_rows)
        if (i < 0 || i >= n_) fail(errc::index_out_of_range, "row index out of range");
    for (int j : keep_cols)
        if (j < 0 || j >= p_) fail(errc::index_out_of_range, "column index out of range");
    matrix r(f_, static_cast<int>(keep_rows.size()), static_cast<int>(keep_cols.size()));
    for (std::size_t a = 0; a < keep_rows.size(); ++a)
        for (std::size_t b = 0; b < keep_cols.size(); ++b)
            r.set(static_cast<int>(a), static_cast<int>(b), at(keep_rows[a], keep_cols[b]));
    return r;
}

namespace {

// Packed F2 elimination. Our shapes always fit one 64-bit word per row.
int f2_rank(const matrix& m) {
    const int n = m.rows(), p = m.cols();
    std::uint64_t rows[64];
    for (int i = 0; i < n; ++i) {
        std::uint64_t w = 0;
        for (int j = 0; j < p; ++j) w |= static_cast<std::uint64_t>(m.at(i, j)) << j;
        rows[i] = w;
    }
    int rank = 0;
    for (int j = 0; j < p && rank < n; ++j) {
        const std::uint64_t bit = 1ULL << j;
        int piv = -1;
        for (int i = rank; i < n; ++i)
            if (rows[i] & bit) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int i = 0; i < n; ++i)
            if (i != rank && (rows[i] & bit)) rows[i] ^= rows[rank];
        ++rank;
    }
    return rank;
}

} // namespace

int matrix::rank() const {
    if (n_ == 0 || p_ == 0) return 0;
    if (f_.q() == 2 && p_ <= 64) return f2_rank(*this);
    // generic byte-array elimination
    matrix work = *this;
    int rank = 0;
    for (int j = 0; j < p_ && rank < n_; ++j) {
        int piv = -1;
        for (int i = rank; i < n_; ++i)
            if (work.at(i, j)) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int c = 0; c < p_; ++c) {
                std::uint8_t tmp = work.at(rank, c);
                work.set(rank, c, work.at(piv, c));
                work.set(piv, c, tmp);
            }
        std::uint8_t s = f_.inv(work.at(rank, j));
        for (int c = j; c < p_; ++c) work.set(rank, c, f_.mul(s, work.at(rank, c)));
        for (int i = rank + 1; i < n_; ++i) {
            std::uint8_t v = work.at(i, j);
            if (!v) continue;
            for (int c = j; c < p_; ++c)
                work.set(i, c, f_.sub(work.at(i, c), f_.mul(v, work.at(rank, c))));
        }
        ++rank;
    }
    return rank;
}

echelon_form rref_and_rank(const matrix& m) {
    const field f = m.fld();
    const int n = m.rows(), p = m.cols();
    echelon_form out{m, 0, {}, matrix::identity(f, n)};
    matrix& a = out.rref;
    matrix& t = out.transform;
    int rank = 0;
    for (int j = 0; j < p && rank < n; ++j) {
        int piv = -1;
        for (int i = rank; i < n; ++i)
            if (a.at(i, j)) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != rank) {
            for (int c = 0; c < p; ++c) {
                std::uint8_t tmp = a.at(rank, c);
                a.set(rank, c, a.at(piv, c));
                a.set(piv, c, tmp);
            }
            for (int c = 0; c < n; ++c) {
                std::uint8_t tmp = t.at(rank, c);
                t.set(rank, c, t.at(piv, c));
                t.set(piv, c, tmp);
            }
        }
        std::uint8_t s = f.inv(a.at(rank, j));
        if (s != 1) {
            for (int c = 0; c < p; ++c) a.set(rank, c, f.mul(s, a.at(rank, c)));
            for (int c = 0; c < n; ++c) t.set(rank, c, f.mul(s, t.at(rank, c)));
        }
        for (int i = 0; i < n; ++i) {
            if (i == rank) continue;
            std::uint8_t v = a.at(i, j);
            if (!v) continue;
            for (int c = 0; c < p; ++c) a.set(i, c, f.sub(a.at(i, c), f.mul(v, a.at(rank, c))));
            for (int c = 0; c < n; ++c) t.set(i, c, f.sub(t.at(i, c), f.mul(v, t.at(rank, c))));
        }
        out.pivot_cols.push_back(j);
        ++rank;
    }
    out.rank = rank;
    return out;
}

matrix matrix::inverse() const {
    if (n_ != p_) fail(errc::not_invertible, "inverse of non-square matrix");
    echelon_form ech = rref_and_rank(*this);
    if (ech.rank != n_) fail(errc::not_invertible, "singular matrix");
    return ech.transform;
}

std::vector<std::vector<std::uint8_t>> matrix::kernel_basis() const {
    echelon_form ech = rref_and_rank(*this);
    std::vector<bool> is_pivot(p_, false);
    for (int j : ech.pivot_cols) is_pivot[j] = true;
    std::vector<std::vector<std::uint8_t>> basis;
    for (int j = 0; j < p_; ++j) {
        if (is_pivot[j]) continue;
        std::vector<std::uint8_t> v(p_, 0);
        v[j] = 1;
        for (int i = 0; i < ech.rank; ++i) v[ech.pivot_cols[i]] = f_.neg(ech.rref.at(i, j));
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<std::uint8_t> matrix::apply(const std::vector<std::uint8_t>& v) const {
    if (static_cast<int>(v.size()) != p_) fail(errc::dimension_mismatch, "apply: vector length");
    std::vector<std::uint8_t> r(n_, 0);
    for (int i = 0; i < n_; ++i) {
        std::uint8_t acc = 0;
        for (int j = 0; j < p_; ++j) acc = f_.add(acc, f_.mul(at(i, j), v[j]));
        r[i] = acc;
    }
    return r;
}

std::string matrix::to_text() const {
    std::ostringstream os;
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < p_; ++j) {
            if (j) os << ' ';
            os << static_cast<int>(at(i, j));
        }
        os << '\n';
    }
    return os.str();
}

matrix matrix::parse_text(field f, int n, int p, std::istream& in) {
    matrix m(f, n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) {
            long v;
            if (!(in >> v)) fail(errc::format_error, "matrix text: unexpected end of input");
            if (v < 0 || v >= static_cast<long>(f.q()))
                fail(errc::format_error, "matrix text: entry not a canonical residue mod q");
            m.set(i, j, static_cast<std::uint8_t>(v));
        }
    return m;
}

// --- row-vector helpers ---------------------------------------------------

std::vector<int> rref_rows(const field& f, std::vector<row_vec>& rows) {
    const int m = rows.empty() ? 0 : static_cast<int>(rows[0].size());
    const int n = static_cast<int>(rows.size());
    std::vector<int> pivots;
    int rank = 0;
    for (int j = 0; j < m && rank < n; ++j) {
        int piv = -1;
        for (int i = rank; i < n; ++i)
            if (rows[i][j]) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        std::uint8_t s = f.inv(rows[rank][j]);
        if (s != 1)
            for (int c = j; c < m; ++c) rows[rank][c] = f.mul(s, rows[rank][c]);
        for (int i = 0; i < n; ++i) {
            if (i == rank) continue;
            std::uint8_t v = rows[i][j];
            if (!v) continue;
            for (int c = j; c < m; ++c) rows[i][c] = f.sub(rows[i][c], f.mul(v, rows[rank][c]));
        }
        pivots.push_back(j);
        ++rank;
    }
    rows.resize(rank);
    return pivots;
}

row_vec reduce_mod_rows(const field& f, row_vec v, const std::vector<row_vec>& rows,
                        const std::vector<int>& pivots) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::uint8_t c = v[pivots[i]];
        if (!c) continue;
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = f.sub(v[k], f.mul(c, rows[i][k]));
    }
    return v;
}

int rank_of_rows(const field& f, std::vector<row_vec> rows) {
    return static_cast<int>(rref_rows(f, rows).size());
}

} // namespace flanders
