#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "flanders/space.hpp"

#include "json.hpp"

namespace flanders {

struct census_spec {
    unsigned q = 2;
    int n = 0, p = 0, r = 0, dim = 0;
    enum class kind_t { linear, affine } kind = kind_t::linear;
    int workers = 0;          // 0 = auto (min(8, hardware))
    std::uint64_t budget = 0; // cap on enumerated spaces; 0 = default
    bool huge = false;        // proceed past the budget check

    bool operator==(const census_spec&) const = default;
};

// Deterministic: identical spec (and worker count) gives identical class
// tables; wall_ms is the only field excluded from content comparison.
struct census_report {
    census_spec spec;
    std::uint64_t total = 0;     // spaces enumerated
    std::uint64_t survivors = 0; // spaces passing the rank filter
    std::map<std::string, std::uint64_t> classes;
    std::string unclassified_example; // matspace text of the first one, if any
    std::uint64_t wall_ms = 0;

    bool same_content(const census_report& o) const;
    std::string to_text() const;
    nlohmann::json to_json() const;
    static census_report from_json(const nlohmann::json& j);
};

// Enumerates all dim-dimensional subspaces of Mat_{n,p}(F_q) (extended by all
// coset representatives for the affine kind), filters by upper-rank <= r, and
// classifies every survivor: first decomposition witness (splits (s, r-s),
// s ascending), else equivalence to a registered exceptional space, else
// UNCLASSIFIED. Every bucket assignment is certified by re-verifying its
// witness.
census_report run_census(const census_spec& spec);

struct check_options {
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0x5EED0F1A2DE55ULL;
    bool huge = false;
    int workers = 0;
};

struct check_report {
    std::string name;
    bool pass = false;
    std::vector<std::string> lines;   // one line per sub-check
    std::string counterexample;       // payload on failure
    std::uint64_t wall_ms = 0;

    std::string to_text() const;
    nlohmann::json to_json() const;
};

check_report run_check(const std::string& name, const check_options& opts = {});
std::vector<std::string> check_names();

enum class report_format { text, json };

std::string emit_report(const census_report& rep, report_format fmt);
std::string emit_report(const check_report& rep, report_format fmt);
census_report parse_census_report(const std::string& doc); // JSON form only

namespace detail {
// Orbit of a space under the two-sided group action, keyed by canonical form,
// with a witness pair per member. Throws budget_error past the node cap.
struct orbit_table {
    std::map<std::string, std::pair<matrix, matrix>> members;
};
orbit_table orbit_of(const mat_space& s, std::uint64_t node_cap = 2000000);
} // namespace detail

} // namespace flanders
