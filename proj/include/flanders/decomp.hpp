#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flanders/space.hpp"

namespace flanders {

// Number of k-dimensional subspaces of F_q^m, saturating at uint64 max.
std::uint64_t gaussian_binomial(int m, int k, unsigned q);

// Enumerates all k-dim subspaces of F_q^m exactly once, as k x m canonical
// RREF row sets. Order: pivot-column patterns ascending lexicographically,
// free entries in odometer order within a pattern. A single-pattern
// constructor exposes the strata the census engine parallelizes over.
class subspace_iterator {
public:
    subspace_iterator(field f, int m, int k);
    subspace_iterator(field f, int m, std::vector<int> pattern);

    // advances to the next subspace; the first call yields the first one
    bool next();

    const std::vector<row_vec>& rows() const { return rows_; }
    const std::vector<int>& pattern() const { return pattern_; }

    static std::vector<std::vector<int>> pivot_patterns(int m, int k);

private:
    void enter_pattern();
    bool advance_pattern();

    field f_;
    int m_, k_;
    bool single_pattern_;
    bool started_ = false;
    bool done_ = false;
    std::vector<int> pattern_;
    std::vector<std::pair<int, int>> free_pos_; // (row, col) pairs
    std::vector<std::uint8_t> digits_;
    std::vector<row_vec> rows_;
};

// Witness that every matrix of the space maps G into H, i.e. the space is
// equivalent to a subspace of R(s,t). G has dimension p-t, H has dimension s.
struct decomposition_witness {
    int s = 0, t = 0;
    matrix g_cols; // p x (p-t)
    matrix h_cols; // n x s
    bool verify(const mat_space& sp) const;
};

// Searches for a witness that sp is equivalent to a subspace of R(sigma,tau).
// G runs in canonical subspace order; H is forced: the minimal admissible H
// is span(S G), so a witness exists iff that span has dimension <= sigma.
std::optional<decomposition_witness> equiv_sub_compression(const mat_space& sp, int sigma,
                                                           int tau);

// Tries all splits (sigma, r - sigma) with sigma ascending; first witness wins.
std::optional<decomposition_witness> is_r_decomposable(const mat_space& sp, int r);

struct primitivity_report {
    bool primitive = false;
    int condition = 0; // 1..4 when not primitive
    std::string detail;
    std::optional<decomposition_witness> compression_witness; // conditions 1/2
    std::optional<covector> direction;                        // conditions 3/4
    int upper_rank = 0;
};

// A linear space of upper-rank r is primitive when (1) it does not vanish on
// a common line of K^p, (2) its images do not share a hyperplane of K^n,
// (3) no domain hyperplane lowers the upper-rank, (4) dually for rows.
primitivity_report is_primitive(const mat_space& sp, std::uint64_t budget = 0);

struct reduction_result {
    int s = 0, t = 0; // peeled compression layers
    mat_space core;
    int core_upper_rank = 0;
    std::vector<std::string> steps;
};

// Greedily strips conditions (1)-(4) until the core is primitive. The core
// has upper-rank r - (s + t); its shape gives (s', t').
reduction_result primitive_reduction(const mat_space& sp, std::uint64_t budget = 0);

} // namespace flanders
