#pragma once

#include <cstdint>
#include <vector>

#include "flanders/matrix.hpp"
#include "flanders/space.hpp"

// Rank-filter scanners for the enumeration engines: given a subspace basis
// (canonical rows of the vectorized matrix space) and a coset representative,
// decide whether every element has rank <= r.

namespace flanders::detail {

// q = 2, vectorized length <= 22: packed words and a full rank table
struct f2_scanner {
    int m;
    std::vector<std::uint8_t> rank_lut;

    f2_scanner(field f, int n, int p) : m(n * p) {
        rank_lut.resize(std::size_t(1) << m);
        for (std::uint64_t w = 0; w < rank_lut.size(); ++w) {
            matrix mat(f, n, p);
            for (int k = 0; k < m; ++k)
                if (w >> k & 1) mat.set(k / p, k % p, 1);
            rank_lut[w] = static_cast<std::uint8_t>(mat.rank());
        }
    }

    bool rank_bounded(const std::vector<row_vec>& rows, const row_vec& rep, int r) const {
        std::uint32_t packed[32];
        const int d = static_cast<int>(rows.size());
        for (int i = 0; i < d; ++i) {
            std::uint32_t w = 0;
            for (int k = 0; k < m; ++k) w |= static_cast<std::uint32_t>(rows[i][k]) << k;
            packed[i] = w;
        }
        std::uint32_t cur = 0;
        for (int k = 0; k < m; ++k) cur |= static_cast<std::uint32_t>(rep[k]) << k;
        if (rank_lut[cur] > r) return false;
        const std::uint64_t count = std::uint64_t(1) << d;
        for (std::uint64_t i = 1; i < count; ++i) {
            cur ^= packed[__builtin_ctzll(i)];
            if (rank_lut[cur] > r) return false;
        }
        return true;
    }
};

// generic odometer scanner; uses a base-q rank table when it fits
struct generic_scanner {
    field f;
    int n, p, m;
    std::vector<std::uint8_t> rank_lut; // empty when q^m is too large

    generic_scanner(field f_, int n_, int p_) : f(f_), n(n_), p(p_), m(n_ * p_) {
        std::uint64_t size = pow_u64(f.q(), static_cast<unsigned>(m));
        if (size <= (1ULL << 21)) {
            rank_lut.resize(size);
            row_vec v(m, 0);
            for (std::uint64_t idx = 0;; ++idx) {
                rank_lut[idx] = static_cast<std::uint8_t>(devectorize(f, n, p, v).rank());
                int k = 0;
                while (k < m && v[k] == f.q() - 1) v[k++] = 0;
                if (k == m) break;
                ++v[k];
            }
        }
    }

    int rank_of(const row_vec& v) const {
        if (!rank_lut.empty()) {
            std::uint64_t idx = 0;
            for (int k = m - 1; k >= 0; --k) idx = idx * f.q() + v[k];
            return rank_lut[idx];
        }
        return devectorize(f, n, p, v).rank();
    }

    bool rank_bounded(const std::vector<row_vec>& rows, const row_vec& rep, int r) const {
        const unsigned q = f.q();
        const int d = static_cast<int>(rows.size());
        row_vec cur = rep;
        if (rank_of(cur) > r) return false;
        std::vector<std::uint8_t> digits(d, 0);
        const std::uint64_t count = pow_u64(q, static_cast<unsigned>(d));
        auto add_row = [&](const row_vec& g) {
            for (int k = 0; k < m; ++k) cur[k] = f.add(cur[k], g[k]);
        };
        for (std::uint64_t i = 1; i < count; ++i) {
            int j = 0;
            while (digits[j] == q - 1) {
                digits[j] = 0;
                add_row(rows[j]);
                ++j;
            }
            ++digits[j];
            add_row(rows[j]);
            if (rank_of(cur) > r) return false;
        }
        return true;
    }
};

} // namespace flanders::detail
