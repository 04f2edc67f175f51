#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flanders/space.hpp"

namespace flanders {

// Affine map F : S -> K^n presented by its value on the basepoint and its
// linear part on each canonical basis matrix.
struct affine_map {
    mat_space domain;
    row_vec value_at_base;
    std::vector<row_vec> values_on_basis;

    row_vec value_at(const matrix& m) const;
    row_vec value_at_coords(const std::vector<std::uint8_t>& coords) const;

    std::string to_text() const;
    static affine_map parse(std::istream& in);
};

// v in column space of m?
bool in_image(const matrix& m, const row_vec& v);

// F(M) in im M for every element M of the domain.
bool is_range_compatible(const affine_map& f, std::uint64_t budget = 0);

// x with F(M) = M x for all M; pure linear algebra, no enumeration.
std::optional<row_vec> find_locality_witness(const affine_map& f);

// First line D of K^n (canonical order) such that F(M) in im M whenever
// D is not inside im M.
std::optional<covector> find_qrc_line(const affine_map& f, std::uint64_t budget = 0);

struct rc_shape {
    enum class kind_t { local, plane, neither };
    kind_t kind = kind_t::neither;
    row_vec x_local;    // kind == local
    row_vec x, x_prime; // kind == plane: F(M) = phi(M x) + M x'
    matrix plane_basis; // n x 2, columns spanning the plane P
    matrix phi;         // 2 x 2, endomorphism of P in that basis
};

// Local, or of the form M -> phi(M X) + M X' with dim(S X) <= 2, or neither.
rc_shape classify_rc_shape(const affine_map& f, std::uint64_t budget = 0);

} // namespace flanders
