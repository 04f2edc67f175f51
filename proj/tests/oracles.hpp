#pragma once

// Independent oracles for the test suites. Everything here recomputes results
// by brute force along a different algorithmic route than the library.

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "flanders/decomp.hpp"
#include "flanders/matrix.hpp"
#include "flanders/space.hpp"

namespace oracle {

using namespace flanders;

// determinant by Laplace expansion along the first row
inline std::uint8_t det_laplace(const matrix& m) {
    const field f = m.fld();
    const int n = m.rows();
    if (n == 0) return 1;
    if (n == 1) return m.at(0, 0);
    std::uint8_t acc = 0;
    std::vector<int> rows;
    for (int i = 1; i < n; ++i) rows.push_back(i);
    for (int j = 0; j < n; ++j) {
        if (!m.at(0, j)) continue;
        std::vector<int> cols;
        for (int c = 0; c < n; ++c)
            if (c != j) cols.push_back(c);
        std::uint8_t minor = det_laplace(m.submatrix(rows, cols));
        std::uint8_t term = f.mul(m.at(0, j), minor);
        acc = (j % 2 == 0) ? f.add(acc, term) : f.sub(acc, term);
    }
    return acc;
}

// rank = size of the largest nonzero minor
inline int rank_by_minors(const matrix& m) {
    const int n = m.rows(), p = m.cols();
    auto subsets = [](int total, int want) {
        std::vector<std::vector<int>> out;
        std::vector<int> c(want);
        for (int i = 0; i < want; ++i) c[i] = i;
        if (want == 0) {
            out.push_back({});
            return out;
        }
        while (true) {
            out.push_back(c);
            int i = want - 1;
            while (i >= 0 && c[i] == total - want + i) --i;
            if (i < 0) break;
            ++c[i];
            for (int j = i + 1; j < want; ++j) c[j] = c[j - 1] + 1;
        }
        return out;
    };
    for (int k = std::min(n, p); k >= 1; --k) {
        for (const auto& rs : subsets(n, k))
            for (const auto& cs : subsets(p, k))
                if (det_laplace(m.submatrix(rs, cs)) != 0) return k;
    }
    return 0;
}

// product by the definition, one coefficient at a time
inline matrix mul_triple_loop(const matrix& a, const matrix& b) {
    const field f = a.fld();
    matrix r(f, a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            std::uint8_t acc = 0;
            for (int k = 0; k < a.cols(); ++k) acc = f.add(acc, f.mul(a.at(i, k), b.at(k, j)));
            r.set(i, j, acc);
        }
    return r;
}

// number of k-dim subspaces of F_q^m by span-set deduplication over all
// k x m generator matrices
inline std::uint64_t count_subspaces_dedup(field f, int m, int k) {
    const unsigned q = f.q();
    std::set<std::set<std::vector<std::uint8_t>>> seen;
    std::vector<std::uint8_t> flat(static_cast<std::size_t>(k) * m, 0);
    while (true) {
        matrix gen(f, k, m, flat);
        if (gen.rank() == k) {
            // enumerate the span as a set of vectors
            std::set<std::vector<std::uint8_t>> span;
            std::vector<std::uint8_t> coef(k, 0);
            while (true) {
                std::vector<std::uint8_t> v(m, 0);
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < m; ++j)
                        v[j] = f.add(v[j], f.mul(coef[i], gen.at(i, j)));
                span.insert(v);
                int i = 0;
                while (i < k && coef[i] == q - 1) coef[i++] = 0;
                if (i == k) break;
                ++coef[i];
            }
            seen.insert(std::move(span));
        }
        std::size_t i = 0;
        while (i < flat.size() && flat[i] == q - 1) flat[i++] = 0;
        if (i == flat.size()) break;
        ++flat[i];
    }
    if (k == 0) return 1;
    return seen.size();
}

// decomposability by the unpruned double loop: search G and H independently
inline bool decomposable_double_loop(const mat_space& sp, int sigma, int tau) {
    const field f = sp.fld();
    std::vector<matrix> mats = sp.gens();
    mats.push_back(sp.base());
    subspace_iterator git(f, sp.p(), sp.p() - tau);
    while (git.next()) {
        subspace_iterator hit(f, sp.n(), sigma);
        while (hit.next()) {
            bool all_in = true;
            for (const auto& m : mats) {
                for (const auto& g : git.rows()) {
                    row_vec img = m.apply(g);
                    std::vector<row_vec> stack = hit.rows();
                    stack.push_back(img);
                    if (static_cast<int>(rref_rows(f, stack).size()) >
                        static_cast<int>(hit.rows().size())) {
                        all_in = false;
                        break;
                    }
                }
                if (!all_in) break;
            }
            if (all_in) return true;
        }
    }
    return false;
}

} // namespace oracle
