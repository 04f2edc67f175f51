#include <algorithm>
#include <chrono>
#include <deque>
#include <memory>
#include <thread>

#include "flanders/catalog.hpp"
#include "flanders/decomp.hpp"
#include "flanders/detail/scan.hpp"
#include "flanders/equiv.hpp"
#include "flanders/verify.hpp"

namespace flanders {

namespace detail {

static std::vector<matrix> gl_generators(field f, int m) {
    std::vector<matrix> g;
    if (m >= 2) {
        matrix sw = matrix::identity(f, m);
        sw.set(0, 0, 0);
        sw.set(1, 1, 0);
        sw.set(0, 1, 1);
        sw.set(1, 0, 1);
        g.push_back(sw);
        if (m > 2) {
            matrix cy(f, m, m);
            for (int i = 0; i < m; ++i) cy.set((i + 1) % m, i, 1);
            g.push_back(cy);
        }
        matrix tv = matrix::identity(f, m);
        tv.set(0, 1, 1);
        g.push_back(tv);
    }
    if (f.q() > 2 && m >= 1) {
        matrix sc = matrix::identity(f, m);
        sc.set(0, 0, f.q() == 7 ? 3 : 2); // multiplicative generator
        g.push_back(sc);
    }
    return g;
}

orbit_table orbit_of(const mat_space& s, std::uint64_t node_cap) {
    const field f = s.fld();
    auto left = gl_generators(f, s.n());
    auto right = gl_generators(f, s.p());
    orbit_table tab;
    struct node {
        mat_space sp;
        matrix pm, qm;
    };
    std::deque<node> queue;
    matrix id_n = matrix::identity(f, s.n()), id_p = matrix::identity(f, s.p());
    tab.members.emplace(s.key(), std::make_pair(id_n, id_p));
    queue.push_back({s, id_n, id_p});
    while (!queue.empty()) {
        node cur = std::move(queue.front());
        queue.pop_front();
        auto visit = [&](mat_space sp, matrix pm, matrix qm) {
            std::string k = sp.key();
            if (tab.members.count(k)) return;
            if (tab.members.size() >= node_cap)
                throw budget_error(node_cap + 1, node_cap, "orbit enumeration");
            tab.members.emplace(std::move(k), std::make_pair(pm, qm));
            queue.push_back({std::move(sp), std::move(pm), std::move(qm)});
        };
        for (const auto& g : left)
            visit(cur.sp.apply_equivalence(g, id_p), g * cur.pm, cur.qm);
        for (const auto& g : right)
            visit(cur.sp.apply_equivalence(id_n, g), cur.pm, cur.qm * g);
    }
    return tab;
}

} // namespace detail

namespace {

using detail::f2_scanner;
using detail::generic_scanner;

struct class_key {
    static std::string sub_compression(int s, int t) {
        return "sub-R(" + std::to_string(s) + "," + std::to_string(t) + ")";
    }
};

struct worker_result {
    std::uint64_t total = 0;
    std::uint64_t survivors = 0;
    std::map<std::string, std::uint64_t> classes;
    // (pattern index, sequence) of the first unclassified space + its text
    std::uint64_t unc_pattern = UINT64_MAX, unc_seq = UINT64_MAX;
    std::string unc_text;
};

std::vector<catalog_entry> exceptional_for(const census_spec& cs) {
    std::vector<catalog_entry> out;
    const bool affine = cs.kind == census_spec::kind_t::affine;
    if (cs.n == 2 && cs.p == 2 && cs.r == 1 && cs.q == 2 && affine)
        out.push_back(named_space("U2", field(2)));
    if (cs.n == 3 && cs.p == 3 && cs.r == 2 && cs.q == 2 && !affine)
        out.push_back(named_space("J3", field(2)));
    if (cs.n == 3 && cs.p == 3 && cs.r == 2 && cs.q == 3 && affine)
        out.push_back(named_space("U3", field(3)));
    if (cs.n == 4 && cs.p == 4 && cs.r == 3 && cs.q == 3 && !affine)
        out.push_back(named_space("U4", field(3)));
    return out;
}

} // namespace

bool census_report::same_content(const census_report& o) const {
    return total == o.total && survivors == o.survivors && classes == o.classes &&
           unclassified_example == o.unclassified_example;
}

std::string census_report::to_text() const {
    std::string s;
    s += "census q=" + std::to_string(spec.q) + " n=" + std::to_string(spec.n) +
         " p=" + std::to_string(spec.p) + " r=" + std::to_string(spec.r) +
         " dim=" + std::to_string(spec.dim) +
         " kind=" + (spec.kind == census_spec::kind_t::affine ? "affine" : "linear") +
         " workers=" + std::to_string(spec.workers) + "\n";
    s += "total " + std::to_string(total) + "\n";
    s += "survivors " + std::to_string(survivors) + "\n";
    for (const auto& [k, v] : classes) s += "class " + k + " " + std::to_string(v) + "\n";
    if (!unclassified_example.empty()) s += "unclassified example:\n" + unclassified_example;
    s += "wall_ms " + std::to_string(wall_ms) + "\n";
    return s;
}

nlohmann::json census_report::to_json() const {
    nlohmann::json j;
    j["format"] = "census-report";
    j["version"] = 1;
    j["spec"] = {{"q", spec.q},
                 {"n", spec.n},
                 {"p", spec.p},
                 {"r", spec.r},
                 {"dim", spec.dim},
                 {"kind", spec.kind == census_spec::kind_t::affine ? "affine" : "linear"},
                 {"workers", spec.workers},
                 {"budget", spec.budget},
                 {"huge", spec.huge}};
    j["total"] = total;
    j["survivors"] = survivors;
    j["classes"] = nlohmann::json::object();
    for (const auto& [k, v] : classes) j["classes"][k] = v;
    j["unclassified_example"] = unclassified_example;
    j["wall_ms"] = wall_ms;
    return j;
}

census_report census_report::from_json(const nlohmann::json& j) {
    if (!j.contains("format") || j.at("format") != "census-report")
        fail(errc::format_error, "not a census report document");
    census_report r;
    const auto& s = j.at("spec");
    r.spec.q = s.at("q").get<unsigned>();
    r.spec.n = s.at("n").get<int>();
    r.spec.p = s.at("p").get<int>();
    r.spec.r = s.at("r").get<int>();
    r.spec.dim = s.at("dim").get<int>();
    r.spec.kind = s.at("kind").get<std::string>() == "affine" ? census_spec::kind_t::affine
                                                              : census_spec::kind_t::linear;
    r.spec.workers = s.at("workers").get<int>();
    r.spec.budget = s.at("budget").get<std::uint64_t>();
    r.spec.huge = s.at("huge").get<bool>();
    r.total = j.at("total").get<std::uint64_t>();
    r.survivors = j.at("survivors").get<std::uint64_t>();
    for (auto it = j.at("classes").begin(); it != j.at("classes").end(); ++it)
        r.classes[it.key()] = it.value().get<std::uint64_t>();
    r.unclassified_example = j.at("unclassified_example").get<std::string>();
    r.wall_ms = j.at("wall_ms").get<std::uint64_t>();
    return r;
}

census_report run_census(const census_spec& spec_in) {
    census_spec spec = spec_in;
    const field f{spec.q};
    if (spec.n < 0 || spec.p < 0) fail(errc::param_out_of_range, "census: negative shape");
    if (spec.r < 0 || spec.r > std::min(spec.n, spec.p))
        fail(errc::param_out_of_range, "census: need 0 <= r <= min(n,p)");
    const int m = spec.n * spec.p;
    if (spec.dim < 0 || spec.dim > m) fail(errc::param_out_of_range, "census: bad dim");
    if (spec.workers <= 0)
        spec.workers = std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
    const bool affine = spec.kind == census_spec::kind_t::affine;

    const std::uint64_t spans = gaussian_binomial(m, spec.dim, spec.q);
    const std::uint64_t cosets = affine ? pow_u64(spec.q, m - spec.dim) : 1;
    const std::uint64_t expected_total =
        (spans > UINT64_MAX / cosets) ? UINT64_MAX : spans * cosets;
    std::uint64_t budget = spec.budget ? spec.budget : default_budget(f);
    if (expected_total > budget && !spec.huge)
        throw budget_error(expected_total, budget, "census enumeration");

    auto t0 = std::chrono::steady_clock::now();

    // exceptional classes: orbit tables when they fit, direct equivalence
    // decisions otherwise
    std::vector<catalog_entry> exceptional = exceptional_for(spec);
    std::vector<std::pair<std::string, detail::orbit_table>> tables;
    std::vector<std::pair<std::string, mat_space>> direct;
    for (const auto& e : exceptional) {
        try {
            tables.emplace_back(e.name, detail::orbit_of(e.space));
        } catch (const budget_error&) {
            direct.emplace_back(e.name, e.space);
        }
    }

    const bool use_f2 = spec.q == 2 && m <= 22;
    std::unique_ptr<f2_scanner> f2s;
    std::unique_ptr<generic_scanner> gens;
    if (use_f2)
        f2s = std::make_unique<f2_scanner>(f, spec.n, spec.p);
    else
        gens = std::make_unique<generic_scanner>(f, spec.n, spec.p);

    auto patterns = subspace_iterator::pivot_patterns(m, spec.dim);

    auto classify = [&](const mat_space& sp) -> std::string {
        if (auto w = is_r_decomposable(sp, spec.r)) {
            if (!w->verify(sp)) fail(errc::param_out_of_range, "census: witness failed verification");
            return class_key::sub_compression(w->s, w->t);
        }
        for (const auto& [name, tab] : tables) {
            auto it = tab.members.find(sp.key());
            if (it == tab.members.end()) continue;
            const auto& [pm, qm] = it->second;
            bool ok = false;
            for (const auto& e : exceptional)
                if (e.name == name) ok = (e.space.apply_equivalence(pm, qm) == sp);
            if (!ok) fail(errc::param_out_of_range, "census: equivalence witness failed");
            return name;
        }
        for (const auto& [name, ex] : direct) {
            equiv_result r = are_equivalent(sp, ex);
            if (r.kind == equiv_kind::yes) return name;
            if (r.kind == equiv_kind::inconclusive)
                throw budget_error(0, 0, "census: equivalence decision for a survivor");
        }
        return "UNCLASSIFIED";
    };

    std::vector<worker_result> results(spec.workers);
    auto work = [&](int wid) {
        worker_result& res = results[wid];
        std::vector<int> non_pivots;
        for (std::size_t pi = wid; pi < patterns.size(); pi += spec.workers) {
            const auto& pattern = patterns[pi];
            non_pivots.clear();
            {
                std::vector<bool> is_p(m, false);
                for (int c : pattern) is_p[c] = true;
                for (int k = 0; k < m; ++k)
                    if (!is_p[k]) non_pivots.push_back(k);
            }
            subspace_iterator it(f, m, pattern);
            std::uint64_t seq = 0;
            while (it.next()) {
                const auto& rows = it.rows();
                // coset representatives: all vectors supported on non-pivots
                row_vec rep(m, 0);
                std::vector<std::uint8_t> digits(non_pivots.size(), 0);
                const std::uint64_t reps =
                    affine ? pow_u64(spec.q, static_cast<unsigned>(non_pivots.size())) : 1;
                for (std::uint64_t ri = 0;; ++ri) {
                    ++res.total;
                    ++seq;
                    bool pass = use_f2 ? f2s->rank_bounded(rows, rep, spec.r)
                                       : gens->rank_bounded(rows, rep, spec.r);
                    if (pass) {
                        ++res.survivors;
                        mat_space sp =
                            mat_space::from_canonical_rows(f, spec.n, spec.p, rows, rep);
                        std::string bucket = classify(sp);
                        ++res.classes[bucket];
                        if (bucket == "UNCLASSIFIED" &&
                            (pi < res.unc_pattern ||
                             (pi == res.unc_pattern && seq < res.unc_seq))) {
                            res.unc_pattern = pi;
                            res.unc_seq = seq;
                            res.unc_text = sp.to_text();
                        }
                    }
                    if (ri + 1 >= reps) break;
                    // advance rep odometer
                    std::size_t k = 0;
                    while (digits[k] == spec.q - 1) {
                        digits[k] = 0;
                        rep[non_pivots[k]] = 0;
                        ++k;
                    }
                    ++digits[k];
                    rep[non_pivots[k]] = digits[k];
                }
            }
        }
    };

    if (spec.workers == 1) {
        work(0);
    } else {
        std::vector<std::exception_ptr> errors(spec.workers);
        std::vector<std::thread> threads;
        for (int w = 0; w < spec.workers; ++w)
            threads.emplace_back([&, w] {
                try {
                    work(w);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : threads) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    census_report rep;
    rep.spec = spec;
    rep.classes["UNCLASSIFIED"] = 0;
    std::uint64_t best_pat = UINT64_MAX, best_seq = UINT64_MAX;
    for (const auto& res : results) {
        rep.total += res.total;
        rep.survivors += res.survivors;
        for (const auto& [k, v] : res.classes) rep.classes[k] += v;
        if (res.unc_pattern < best_pat ||
            (res.unc_pattern == best_pat && res.unc_seq < best_seq)) {
            best_pat = res.unc_pattern;
            best_seq = res.unc_seq;
            rep.unclassified_example = res.unc_text;
        }
    }
    if (rep.total != expected_total && expected_total != UINT64_MAX)
        fail(errc::param_out_of_range, "census: enumerated count does not match closed form");
    rep.wall_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                              t0)
            .count());
    return rep;
}

} // namespace flanders
