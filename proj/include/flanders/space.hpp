#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flanders/matrix.hpp"

#include "json.hpp"

namespace flanders {

// Default element-enumeration budgets, overridable via FLANDERS_BUDGET.
std::uint64_t default_budget(const field& f);

// q^e saturating at uint64 max.
std::uint64_t pow_u64(std::uint64_t q, unsigned e);

// Canonical representative of a nonzero vector up to scaling: first nonzero
// entry is 1. Depending on context it names a hyperplane H = ker(v) of K^m,
// or a line D = span(v).
class covector {
public:
    covector(field f, std::vector<std::uint8_t> entries);
    field fld() const { return f_; }
    int length() const { return static_cast<int>(v_.size()); }
    const std::vector<std::uint8_t>& entries() const { return v_; }
    std::uint8_t at(int i) const { return v_[i]; }
    bool operator==(const covector& o) const { return f_ == o.f_ && v_ == o.v_; }

    // basis of ker(v) as columns of an m x (m-1) matrix
    matrix kernel_cols() const;
    // basis of the annihilator {y : y . v = 0} as rows of an (m-1) x m matrix
    matrix annihilator_rows() const;

private:
    field f_;
    std::vector<std::uint8_t> v_;
};

// All canonical projective representatives of F_q^m \ {0}, in ascending
// lexicographic order of the entry vector. (q^m - 1)/(q - 1) of them.
std::vector<covector> projective_points(field f, int m);

// Affine subspace S = base + span(gens) of Mat_{n,p}(F_q), held in canonical
// form: the vectorized (row-major) generators form an RREF basis, and the
// basepoint is reduced modulo their span. Two descriptions of the same affine
// set compare equal. Immutable.
class mat_space {
public:
    static mat_space make(field f, int n, int p, const matrix& base,
                          const std::vector<matrix>& generators, bool linear);
    static mat_space zero_space(field f, int n, int p);
    static mat_space full_space(field f, int n, int p);

    field fld() const { return f_; }
    int n() const { return n_; }
    int p() const { return p_; }
    int dim() const { return static_cast<int>(gens_.size()); }
    bool is_linear() const { return linear_; }
    const matrix& base() const { return base_; }
    const std::vector<matrix>& gens() const { return gens_; }
    const std::vector<int>& pivots() const { return pivots_; }

    bool operator==(const mat_space& o) const;
    std::size_t hash() const;
    std::string key() const; // compact canonical encoding, usable as map key

    std::uint64_t element_count() const { return pow_u64(f_.q(), static_cast<unsigned>(dim())); }

    bool contains(const matrix& m) const;
    // coordinates of m in the canonical basis (requires contains(m))
    std::vector<std::uint8_t> coordinates(const matrix& m) const;

    // Visits all q^dim elements exactly once. Over F_2 the order is a Gray
    // code: consecutive elements differ by exactly one generator. Throws
    // BudgetExceeded (with the required count) when q^dim > budget;
    // budget = 0 means default_budget(field).
    void for_each_element(const std::function<void(const matrix&)>& fn,
                          std::uint64_t budget = 0) const;
    std::vector<matrix> elements(std::uint64_t budget = 0) const;

    int upper_rank(std::uint64_t budget = 0) const;

    mat_space translation() const; // linear space spanned by the generators

    // {M in translation : M v = 0 for all v in ker h}; affine inputs are
    // queried on their translation space.
    mat_space stabilizer_kernel(const covector& h) const;
    // {M in translation : im M inside span(d)}
    mat_space stabilizer_image(const covector& d) const;

    // image space {M C : M in S} for a p x k matrix C whose columns are a
    // basis of the selected domain subspace
    mat_space restrict_cols(const matrix& c) const;
    // image space {K M : M in S} for a k x n matrix K (row projection)
    mat_space project_rows(const matrix& k) const;

    mat_space delete_rows_cols(const std::vector<int>& rows, const std::vector<int>& cols) const;

    mat_space apply_equivalence(const matrix& pmat, const matrix& qmat) const; // NotInvertible
    mat_space transposed() const;
    mat_space padded(int n2, int p2) const; // embed in the top-left corner

    // --- file format -------------------------------------------------------
    std::string to_text() const;
    nlohmann::json to_json() const;
    static mat_space parse(std::istream& in);      // sniffs text vs JSON
    static mat_space parse_text(std::istream& in);
    static mat_space parse_json(const nlohmann::json& j);

    // Trusted constructor for rows already in canonical form (census hot
    // path); validated in debug builds only.
    static mat_space from_canonical_rows(field f, int n, int p, std::vector<row_vec> basis_rows,
                                         row_vec reduced_base);

private:
    mat_space(field f, int n, int p) : f_(f), n_(n), p_(p), base_(f, n, p), linear_(true) {}

    field f_;
    int n_, p_;
    matrix base_;
    std::vector<matrix> gens_;
    std::vector<int> pivots_; // pivot positions of the vectorized basis
    bool linear_;
};

row_vec vectorize(const matrix& m);
matrix devectorize(field f, int n, int p, const row_vec& v);

} // namespace flanders
