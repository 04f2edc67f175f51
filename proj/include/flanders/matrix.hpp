#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "flanders/field.hpp"

namespace flanders {

// Dense matrix over F_q, row-major canonical residues. Empty shapes (n or p
// zero) are legal and behave as rank 0. Values are immutable in spirit: all
// operations return fresh matrices except the _in_place helpers used by the
// enumeration hot paths.
class matrix {
public:
    matrix() : f_(2), n_(0), p_(0) {}
    matrix(field f, int n, int p);
    matrix(field f, int n, int p, std::vector<std::uint8_t> entries);

    static matrix identity(field f, int n);
    // E_{i,j} (0-based indices)
    static matrix unit(field f, int n, int p, int i, int j);

    field fld() const { return f_; }
    int rows() const { return n_; }
    int cols() const { return p_; }

    std::uint8_t at(int i, int j) const { return e_[static_cast<std::size_t>(i) * p_ + j]; }
    void set(int i, int j, std::uint8_t v) { e_[static_cast<std::size_t>(i) * p_ + j] = v; }
    const std::vector<std::uint8_t>& entries() const { return e_; }

    bool is_zero() const;

    matrix operator+(const matrix& o) const;
    matrix operator-(const matrix& o) const;
    matrix operator*(const matrix& o) const; // DimensionMismatch / FieldMismatch
    matrix scaled(std::uint8_t c) const;
    matrix negated() const;
    matrix transposed() const;

    bool operator==(const matrix& o) const { return n_ == o.n_ && p_ == o.p_ && f_ == o.f_ && e_ == o.e_; }

    // add c * o into this (hot path for element enumeration)
    void add_scaled_in_place(const matrix& o, std::uint8_t c);
    void add_in_place(const matrix& o);

    // keep the listed rows/cols, in the given order
    matrix submatrix(const std::vector<int>& keep_rows, const std::vector<int>& keep_cols) const;

    int rank() const;
    bool invertible() const { return n_ == p_ && rank() == n_; }
    matrix inverse() const; // NotInvertible

    // column vectors spanning ker(M); count is cols - rank
    std::vector<std::vector<std::uint8_t>> kernel_basis() const;

    // M*v for a column vector v of length cols
    std::vector<std::uint8_t> apply(const std::vector<std::uint8_t>& v) const;

    std::string to_text() const; // one line per row, space-separated digits
    static matrix parse_text(field f, int n, int p, std::istream& in);

private:
    field f_;
    int n_, p_;
    std::vector<std::uint8_t> e_;
};

struct echelon_form {
    matrix rref;
    int rank = 0;
    std::vector<int> pivot_cols;
    matrix transform; // invertible, transform * input = rref
};

echelon_form rref_and_rank(const matrix& m);

// --- row-vector helpers shared by the space/decomp/equiv modules ---------
//
// A "row" is a vector over F_q of fixed length. rref_rows reduces a list of
// rows in place to canonical RREF (zero rows dropped, pivots descending by
// construction order then sorted); returns pivot columns ascending.

using row_vec = std::vector<std::uint8_t>;

// In-place RREF of a set of rows; drops zero rows; rows come out pivot-sorted.
std::vector<int> rref_rows(const field& f, std::vector<row_vec>& rows);

// Reduce v modulo the span of canonical RREF rows (pivot coordinates of v
// become zero). Returns the reduced vector.
row_vec reduce_mod_rows(const field& f, row_vec v, const std::vector<row_vec>& rows,
                        const std::vector<int>& pivots);

int rank_of_rows(const field& f, std::vector<row_vec> rows);

} // namespace flanders
