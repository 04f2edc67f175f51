#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flanders/space.hpp"

namespace flanders {

// Equivalence invariants used for fast screening. All four components are
// invariant under S -> P S Q.
struct rank_profile {
    std::vector<std::uint64_t> set_counts;         // #elements of the affine set per rank
    std::vector<std::uint64_t> translation_counts; // same for the translation space
    std::vector<int> sh_dims;                      // sorted dims of S_H over all hyperplanes H
    std::vector<int> sd_dims;                      // sorted dims of S^D over all lines D
    bool operator==(const rank_profile&) const = default;
};

rank_profile compute_rank_profile(const mat_space& s, std::uint64_t budget = 0);

struct equivalence_witness {
    matrix pmat, qmat;
    bool verify(const mat_space& a, const mat_space& b) const;
};

enum class equiv_kind { yes, no, inconclusive };

struct equiv_result {
    equiv_kind kind = equiv_kind::inconclusive;
    std::optional<equivalence_witness> witness; // set for yes
    std::string reason;                         // distinguishing invariant / search summary
    std::uint64_t nodes = 0;
};

// Decides whether b = P a Q for some invertible P, Q. Yes always carries a
// verified witness. No is only returned on an invariant mismatch or a
// completed exhaustive search. Inconclusive when the node budget ran out (or
// a degenerate branch was abandoned) with profiles equal.
equiv_result are_equivalent(const mat_space& a, const mat_space& b,
                            std::uint64_t budget = 100000000ULL);

namespace detail {
// Witness search without the invariant screening; exposed for the test suite.
equiv_result search_equivalence(const mat_space& a, const mat_space& b, std::uint64_t budget);
} // namespace detail

// (P, Q) with P m Q = [[I_r, 0], [0, 0]].
std::pair<matrix, matrix> rank_normal_form(const matrix& m);

} // namespace flanders
