#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "flanders/catalog.hpp"
#include "flanders/decomp.hpp"
#include "flanders/equiv.hpp"
#include "flanders/rangecompat.hpp"
#include "flanders/verify.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;
constexpr int exit_budget = 3;

flanders::mat_space load_space(const std::string& path) {
    if (path == "-") return flanders::mat_space::parse(std::cin);
    std::ifstream in(path);
    if (!in) flanders::fail(flanders::errc::usage_error, "cannot open " + path);
    return flanders::mat_space::parse(in);
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) flanders::fail(flanders::errc::usage_error, "cannot open " + out_path);
    out << text;
}

std::string witness_text(const flanders::decomposition_witness& w) {
    std::ostringstream os;
    os << "witness split s=" << w.s << " t=" << w.t << "\n";
    os << "G basis (columns, dim " << w.g_cols.cols() << "):\n" << w.g_cols.to_text();
    os << "H basis (columns, dim " << w.h_cols.cols() << "):\n" << w.h_cols.to_text();
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    using namespace flanders;
    CLI::App app{"exact F_q toolkit for bounded-rank matrix spaces"};
    app.require_subcommand(1);

    // --- catalog -------------------------------------------------------------
    auto* cat = app.add_subcommand("catalog", "named spaces and constructions");
    cat->require_subcommand(1);
    cat->add_subcommand("list", "list the named spaces");
    auto* cat_emit = cat->add_subcommand("emit", "write a named space in the matspace format");
    std::string emit_name, out_path;
    unsigned emit_q = 2;
    int emit_n = 0, emit_p = 0;
    bool as_json = false;
    cat_emit->add_option("name", emit_name, "U2|U3|U4|J3|ALT|TRIANG")->required();
    cat_emit->add_option("--q", emit_q, "field size");
    cat_emit->add_option("--n", emit_n, "rows: the size for ALT/TRIANG, a zero-pad target otherwise");
    cat_emit->add_option("--p", emit_p, "columns: values beyond the defining shape zero-pad");
    cat_emit->add_flag("--json", as_json, "emit the JSON mirror");
    cat_emit->add_option("-o,--output", out_path, "output file (default stdout)");

    // --- urank ----------------------------------------------------------------
    auto* urank_cmd = app.add_subcommand("urank", "upper-rank of a space file");
    std::string urank_file;
    urank_cmd->add_option("file", urank_file, "matspace file")->required();

    // --- decomp ----------------------------------------------------------------
    auto* decomp_cmd = app.add_subcommand("decomp", "decomposability witness search");
    std::string decomp_file, split_arg;
    int decomp_r = 0;
    bool decomp_json = false;
    decomp_cmd->add_option("file", decomp_file)->required();
    decomp_cmd->add_option("-r", decomp_r, "target rank bound")->required();
    decomp_cmd->add_option("--split", split_arg, "restrict to one split sigma,tau");
    decomp_cmd->add_flag("--json", decomp_json);

    // --- primitive ---------------------------------------------------------------
    auto* prim_cmd = app.add_subcommand("primitive", "primitivity test and reduction");
    std::string prim_file;
    bool prim_reduce = false;
    prim_cmd->add_option("file", prim_file)->required();
    prim_cmd->add_flag("--reduce", prim_reduce, "also print the primitive-core reduction");

    // --- equiv ----------------------------------------------------------------
    auto* equiv_cmd = app.add_subcommand("equiv", "decide equivalence of two spaces");
    std::string equiv_a, equiv_b;
    std::uint64_t equiv_budget = 100000000ULL;
    bool equiv_json = false;
    equiv_cmd->add_option("a", equiv_a)->required();
    equiv_cmd->add_option("b", equiv_b)->required();
    equiv_cmd->add_option("--budget", equiv_budget, "search node budget");
    equiv_cmd->add_flag("--json", equiv_json);

    // --- rc -------------------------------------------------------------------
    auto* rc_cmd = app.add_subcommand("rc", "range-compatibility of an affine map");
    rc_cmd->require_subcommand(1);
    auto* rc_check = rc_cmd->add_subcommand("check", "analyze a map file");
    std::string rc_file;
    rc_check->add_option("file", rc_file)->required();

    // --- census -----------------------------------------------------------------
    auto* census_cmd = app.add_subcommand("census", "exhaustive subspace census");
    census_spec cs;
    std::string kind_str = "linear";
    bool census_json = false;
    census_cmd->add_option("--q", cs.q, "field size")->required();
    census_cmd->add_option("--n", cs.n)->required();
    census_cmd->add_option("--p", cs.p)->required();
    census_cmd->add_option("--r", cs.r)->required();
    census_cmd->add_option("--dim", cs.dim)->required();
    census_cmd->add_option("--kind", kind_str, "linear|affine");
    census_cmd->add_option("--workers", cs.workers, "0 = auto");
    census_cmd->add_option("--budget", cs.budget, "0 = default");
    census_cmd->add_flag("--huge", cs.huge, "proceed past the enumeration budget");
    census_cmd->add_flag("--json", census_json);

    // --- verify ------------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "run a registered theorem check");
    std::string verify_name;
    check_options opts;
    bool verify_json = false, verify_list = false;
    verify_cmd->add_option("name", verify_name, "check name");
    verify_cmd->add_option("--trials", opts.trials, "randomized trials per configuration");
    verify_cmd->add_option("--seed", opts.seed, "master seed");
    verify_cmd->add_option("--workers", opts.workers, "census workers inside checks");
    verify_cmd->add_flag("--huge", opts.huge, "enable the gated large censuses");
    verify_cmd->add_flag("--list", verify_list, "list registered checks");
    verify_cmd->add_flag("--json", verify_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (cat->parsed()) {
            if (cat->get_subcommand("list")->parsed()) {
                std::cout << "U2      affine 2x2 over F_2, dim 2, upper-rank 1\n"
                          << "U3      affine 3x3 over F_3, dim 4, upper-rank 2\n"
                          << "U4      linear 4x4 over F_3, dim 8, upper-rank 3\n"
                          << "J3      linear 3x3 over F_2 (upper-triangular trace-zero), dim 5, upper-rank 2\n"
                          << "ALT     alternating n x n (--n), dim n(n-1)/2\n"
                          << "TRIANG  upper-triangular n x n (--n), dim n(n+1)/2\n";
                return exit_ok;
            }
            const bool sized = emit_name == "ALT" || emit_name == "TRIANG";
            catalog_entry e = named_space(emit_name, field(emit_q), sized && emit_n ? emit_n : 3);
            mat_space sp = e.space;
            if ((emit_n > 0 && emit_n != sp.n()) || (emit_p > 0 && emit_p != sp.p()))
                sp = sp.padded(emit_n > 0 ? emit_n : sp.n(), emit_p > 0 ? emit_p : sp.p());
            emit(out_path, as_json ? sp.to_json().dump(2) + "\n" : sp.to_text());
            return exit_ok;
        }

        if (urank_cmd->parsed()) {
            mat_space sp = load_space(urank_file);
            std::cout << sp.upper_rank() << "\n";
            return exit_ok;
        }

        if (decomp_cmd->parsed()) {
            mat_space sp = load_space(decomp_file);
            std::optional<decomposition_witness> w;
            if (!split_arg.empty()) {
                auto comma = split_arg.find(',');
                if (comma == std::string::npos)
                    fail(errc::usage_error, "--split expects sigma,tau");
                int s = std::stoi(split_arg.substr(0, comma));
                int t = std::stoi(split_arg.substr(comma + 1));
                w = equiv_sub_compression(sp, s, t);
            } else {
                w = is_r_decomposable(sp, decomp_r);
            }
            if (decomp_json) {
                nlohmann::json j;
                j["format"] = "decomp-result";
                j["version"] = 1;
                j["decomposable"] = w.has_value();
                if (w) {
                    j["s"] = w->s;
                    j["t"] = w->t;
                    j["witness"] = witness_text(*w);
                }
                std::cout << j.dump(2) << "\n";
            } else if (w) {
                std::cout << witness_text(*w);
            } else {
                std::cout << "no witness\n";
            }
            return w ? exit_ok : exit_fail;
        }

        if (prim_cmd->parsed()) {
            mat_space sp = load_space(prim_file);
            primitivity_report rep = is_primitive(sp);
            if (rep.primitive) {
                std::cout << "primitive (upper-rank " << rep.upper_rank << ")\n";
            } else {
                std::cout << "not primitive: condition " << rep.condition << ": " << rep.detail
                          << "\n";
                if (rep.compression_witness) std::cout << witness_text(*rep.compression_witness);
            }
            if (prim_reduce) {
                reduction_result red = primitive_reduction(sp);
                std::cout << "reduction: s=" << red.s << " t=" << red.t << " core "
                          << red.core.n() << "x" << red.core.p() << " upper-rank "
                          << red.core_upper_rank << "\n";
                std::cout << red.core.to_text();
            }
            return rep.primitive ? exit_ok : exit_fail;
        }

        if (equiv_cmd->parsed()) {
            mat_space a = load_space(equiv_a), b = load_space(equiv_b);
            equiv_result r = are_equivalent(a, b, equiv_budget);
            if (equiv_json) {
                nlohmann::json j;
                j["format"] = "equiv-result";
                j["version"] = 1;
                j["result"] = r.kind == equiv_kind::yes
                                  ? "yes"
                                  : (r.kind == equiv_kind::no ? "no" : "inconclusive");
                j["reason"] = r.reason;
                j["nodes"] = r.nodes;
                if (r.witness) {
                    j["P"] = r.witness->pmat.to_text();
                    j["Q"] = r.witness->qmat.to_text();
                }
                std::cout << j.dump(2) << "\n";
            } else if (r.kind == equiv_kind::yes) {
                std::cout << "equivalent\nP:\n"
                          << r.witness->pmat.to_text() << "Q:\n"
                          << r.witness->qmat.to_text();
            } else {
                std::cout << (r.kind == equiv_kind::no ? "not equivalent: " : "inconclusive: ")
                          << r.reason << "\n";
            }
            if (r.kind == equiv_kind::yes) return exit_ok;
            return r.kind == equiv_kind::no ? exit_fail : exit_budget;
        }

        if (rc_cmd->parsed()) {
            std::ifstream in(rc_file);
            if (!in) fail(errc::usage_error, "cannot open " + rc_file);
            affine_map f = affine_map::parse(in);
            bool rc = is_range_compatible(f);
            std::cout << (rc ? "range-compatible" : "not range-compatible") << "\n";
            if (auto x = find_locality_witness(f)) {
                std::cout << "local: x =";
                for (auto v : *x) std::cout << ' ' << static_cast<int>(v);
                std::cout << "\n";
            } else {
                std::cout << "not local\n";
            }
            if (auto d = find_qrc_line(f)) {
                std::cout << "quasi-range-compatible with D = span(";
                for (int i = 0; i < d->length(); ++i)
                    std::cout << (i ? " " : "") << static_cast<int>(d->at(i));
                std::cout << ")\n";
            } else {
                std::cout << "not quasi-range-compatible\n";
            }
            return exit_ok;
        }

        if (census_cmd->parsed()) {
            cs.kind = kind_str == "affine" ? census_spec::kind_t::affine
                                           : census_spec::kind_t::linear;
            census_report rep = run_census(cs);
            std::cout << (census_json ? rep.to_json().dump(2) + "\n" : rep.to_text());
            auto it = rep.classes.find("UNCLASSIFIED");
            bool passed = it == rep.classes.end() || it->second == 0;
            return passed ? exit_ok : exit_fail;
        }

        if (verify_cmd->parsed()) {
            if (verify_list) {
                for (const auto& n : check_names()) std::cout << n << "\n";
                return exit_ok;
            }
            if (verify_name.empty()) fail(errc::usage_error, "verify: missing check name");
            check_report rep = run_check(verify_name, opts);
            std::cout << (verify_json ? rep.to_json().dump(2) + "\n" : rep.to_text());
            return rep.pass ? exit_ok : exit_fail;
        }
    } catch (const budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return exit_budget;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
        case errc::usage_error:
        case errc::unknown_check:
        case errc::format_error:
        case errc::param_out_of_range:
        case errc::wrong_field:
            return exit_usage;
        default:
            return exit_fail;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_fail;
    }
    return exit_usage;
}
