#pragma once

#include <array>
#include <cstdint>

#include "flanders/error.hpp"

namespace flanders {

namespace detail {

constexpr int max_q = 7;

struct fq_tables {
    std::uint8_t add[max_q][max_q]{};
    std::uint8_t sub[max_q][max_q]{};
    std::uint8_t mul[max_q][max_q]{};
    std::uint8_t neg[max_q]{};
    std::uint8_t inv[max_q]{}; // inv[0] unused
};

constexpr fq_tables make_fq_tables(unsigned q) {
    fq_tables t{};
    for (unsigned a = 0; a < q; ++a) {
        t.neg[a] = static_cast<std::uint8_t>((q - a) % q);
        for (unsigned b = 0; b < q; ++b) {
            t.add[a][b] = static_cast<std::uint8_t>((a + b) % q);
            t.sub[a][b] = static_cast<std::uint8_t>((a + q - b) % q);
            t.mul[a][b] = static_cast<std::uint8_t>((a * b) % q);
            if (a != 0 && (a * b) % q == 1) t.inv[a] = static_cast<std::uint8_t>(b);
        }
    }
    return t;
}

constexpr std::array<fq_tables, max_q + 1> fq_table_set = [] {
    std::array<fq_tables, max_q + 1> s{};
    for (unsigned q : {2u, 3u, 5u, 7u}) s[q] = make_fq_tables(q);
    return s;
}();

} // namespace detail

// Prime field F_q for q in {2,3,5,7}. Elements are canonical residues
// 0..q-1 stored as uint8_t; arithmetic is table-driven. Immutable, one byte,
// safe to copy and share freely.
class field {
public:
    explicit field(unsigned q) : q_(static_cast<std::uint8_t>(q)) {
        if (q != 2 && q != 3 && q != 5 && q != 7)
            fail(errc::param_out_of_range, "unsupported field size q=" + std::to_string(q));
    }

    unsigned q() const { return q_; }

    std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return tab().add[a][b]; }
    std::uint8_t sub(std::uint8_t a, std::uint8_t b) const { return tab().sub[a][b]; }
    std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return tab().mul[a][b]; }
    std::uint8_t neg(std::uint8_t a) const { return tab().neg[a]; }

    std::uint8_t inv(std::uint8_t a) const {
        if (a == 0) fail(errc::division_by_zero, "inverse of 0");
        return tab().inv[a];
    }

    // 2 when q = 2, otherwise 0.
    int epsilon() const { return q_ == 2 ? 2 : 0; }

    bool valid_element(std::uint8_t a) const { return a < q_; }

    bool operator==(const field&) const = default;

private:
    const detail::fq_tables& tab() const { return detail::fq_table_set[q_]; }

    std::uint8_t q_;
};

enum class field_op { add, sub, mul, neg };

inline std::uint8_t field_arith(const field& f, field_op op, std::uint8_t a, std::uint8_t b = 0) {
    switch (op) {
    case field_op::add: return f.add(a, b);
    case field_op::sub: return f.sub(a, b);
    case field_op::mul: return f.mul(a, b);
    case field_op::neg: return f.neg(a);
    }
    fail(errc::param_out_of_range, "bad field op");
}

inline std::uint8_t field_inv(const field& f, std::uint8_t a) { return f.inv(a); }

inline int epsilon(const field& f) { return f.epsilon(); }

} // namespace flanders
