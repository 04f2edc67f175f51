#pragma once

#include <string>
#include <vector>

#include "flanders/space.hpp"

namespace flanders {

struct expected_facts {
    long long dim = 0;
    int upper_rank = 0;
};

struct catalog_entry {
    std::string name;
    mat_space space;
    expected_facts expected;

    // re-checks the expected record by enumeration (used by tests and by
    // `catalog emit` in debug builds)
    void verify_expected(std::uint64_t budget = 0) const;
};

// nt + s(p-t)
long long dim_compression(long long n, long long p, long long s, long long t);

// R(s,t): matrices vanishing on the lower-right (n-s) x (p-t) block.
mat_space compression_space(field f, int n, int p, int s, int t);
catalog_entry compression_entry(field f, int n, int p, int s, int t);

// U2 (q=2, 2x2 affine), U3 (q=3, 3x3 affine), U4 (q=3, 4x4 linear),
// J3 (q=2, 3x3 linear), ALT (n x n alternating; over F_2 this is
// symmetric-with-zero-diagonal), TRIANG (n x n upper triangular).
// `size` is the matrix size for ALT/TRIANG and ignored otherwise.
catalog_entry named_space(const std::string& name, field f, int size = 0);

// W v Mat_{n-s,p-s}: block matrices [[A, B], [0, C]] with A in w (s x s),
// B and C free. Requires n >= p >= s.
mat_space vee_construct(const mat_space& w, int n, int p);

std::vector<std::string> catalog_names();

// Every catalog space with shape within (max_n, max_p) and field size within
// max_q: the named spaces plus all compression spaces R(s,t) with
// s+t <= min(n,p). The workload of the oracle-agreement suites.
std::vector<catalog_entry> desk_catalog(int max_n, int max_p, unsigned max_q);

} // namespace flanders
