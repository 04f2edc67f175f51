#include "flanders/equiv.hpp"

#include <algorithm>
#include <cassert>

namespace flanders {

rank_profile compute_rank_profile(const mat_space& s, std::uint64_t budget) {
    rank_profile prof;
    const int cap = std::min(s.n(), s.p());
    prof.set_counts.assign(cap + 1, 0);
    prof.translation_counts.assign(cap + 1, 0);
    s.for_each_element([&](const matrix& m) { ++prof.set_counts[m.rank()]; }, budget);
    if (s.is_linear()) {
        prof.translation_counts = prof.set_counts;
    } else {
        s.translation().for_each_element(
            [&](const matrix& m) { ++prof.translation_counts[m.rank()]; }, budget);
    }
    for (const auto& h : projective_points(s.fld(), s.p()))
        prof.sh_dims.push_back(s.stabilizer_kernel(h).dim());
    for (const auto& d : projective_points(s.fld(), s.n()))
        prof.sd_dims.push_back(s.stabilizer_image(d).dim());
    std::sort(prof.sh_dims.begin(), prof.sh_dims.end());
    std::sort(prof.sd_dims.begin(), prof.sd_dims.end());
    return prof;
}

bool equivalence_witness::verify(const mat_space& a, const mat_space& b) const {
    return a.apply_equivalence(pmat, qmat) == b;
}

std::pair<matrix, matrix> rank_normal_form(const matrix& m) {
    echelon_form row = rref_and_rank(m);
    // column-reduce the rref: move pivots to the front, clear the rest
    echelon_form col = rref_and_rank(row.rref.transposed());
    matrix p = row.transform;
    matrix q = col.transform.transposed();
    assert([&] {
        matrix c = p * m * q;
        for (int i = 0; i < c.rows(); ++i)
            for (int j = 0; j < c.cols(); ++j)
                if (c.at(i, j) != ((i == j && i < row.rank) ? 1 : 0)) return false;
        return true;
    }());
    return {p, q};
}

namespace {

// Incremental solver for the bilinear correspondence system: a chosen list
// of pairs (M_j, N_j) constrains (P, R) via  P M_j = N_j R  (R stands for
// Q^{-1}), which is linear in the n^2 + p^2 unknowns. Rows stay in echelon
// form and never mutate earlier rows, so constraints can be pushed per
// search depth and popped on backtrack by truncation.
class pair_system {
public:
    pair_system(field f, int n, int p)
        : f_(f), n_(n), p_(p), un_(n * n + p * p) {}

    std::size_t mark() const { return rows_.size(); }
    void rollback(std::size_t m) {
        rows_.resize(m);
        pivots_.resize(m);
    }

    // add constraints for P M = N R
    void push_pair(const matrix& m, const matrix& n_img) {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < p_; ++j) {
                row_vec row(un_, 0);
                for (int k = 0; k < n_; ++k) row[i * n_ + k] = m.at(k, j); // P[i,k] M[k,j]
                for (int k = 0; k < p_; ++k)
                    row[n_ * n_ + k * p_ + j] = f_.neg(n_img.at(i, k)); // -N[i,k] R[k,j]
                reduce_and_insert(std::move(row));
            }
    }

    int solution_dim() const { return un_ - static_cast<int>(rows_.size()); }

    // basis of the solution space; rows are in echelon form (not fully
    // reduced, so rollback stays a truncation), solved by back-substitution
    std::vector<row_vec> nullspace() const {
        std::vector<bool> is_pivot(un_, false);
        for (int c : pivots_) is_pivot[c] = true;
        std::vector<std::size_t> order(rows_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) { return pivots_[x] > pivots_[y]; });
        std::vector<row_vec> basis;
        for (int j = 0; j < un_; ++j) {
            if (is_pivot[j]) continue;
            row_vec v(un_, 0);
            v[j] = 1;
            for (std::size_t oi : order) {
                const row_vec& row = rows_[oi];
                const int piv = pivots_[oi];
                std::uint8_t acc = 0;
                for (int k = piv + 1; k < un_; ++k)
                    if (v[k] && row[k]) acc = f_.add(acc, f_.mul(row[k], v[k]));
                v[piv] = f_.neg(acc);
            }
            basis.push_back(std::move(v));
        }
        return basis;
    }

    matrix extract_p(const row_vec& sol) const {
        matrix p(f_, n_, n_);
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k) p.set(i, k, sol[i * n_ + k]);
        return p;
    }
    matrix extract_r(const row_vec& sol) const {
        matrix r(f_, p_, p_);
        for (int k = 0; k < p_; ++k)
            for (int j = 0; j < p_; ++j) r.set(k, j, sol[n_ * n_ + k * p_ + j]);
        return r;
    }

private:
    void reduce_and_insert(row_vec row) {
        // eliminate in ascending pivot order; a single pass zeroes every
        // pivot position because each row starts with its own pivot
        std::vector<std::size_t> order(rows_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) { return pivots_[x] < pivots_[y]; });
        for (std::size_t i : order) {
            std::uint8_t c = row[pivots_[i]];
            if (!c) continue;
            for (int k = pivots_[i]; k < un_; ++k)
                row[k] = f_.sub(row[k], f_.mul(c, rows_[i][k]));
        }
        int piv = -1;
        for (int k = 0; k < un_; ++k)
            if (row[k]) { piv = k; break; }
        if (piv < 0) return;
        std::uint8_t s = f_.inv(row[piv]);
        if (s != 1)
            for (int k = piv; k < un_; ++k) row[k] = f_.mul(s, row[k]);
        rows_.push_back(std::move(row));
        pivots_.push_back(piv);
    }

    field f_;
    int n_, p_, un_;
    std::vector<row_vec> rows_;
    std::vector<int> pivots_;
};

struct search_ctx {
    const mat_space& a;
    const mat_space& b;
    field f;
    int n, p, d;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    bool complete = true; // false if any branch was abandoned
    std::optional<equivalence_witness> found;

    std::vector<matrix> src;                       // slot 0 = basepoint when affine
    bool affine = false;
    std::vector<std::vector<matrix>> pools;        // candidate images per slot
    std::vector<const matrix*> img;                // chosen images
    pair_system sys;
    std::uint64_t enum_threshold;

    // source-side combination ranks, independent of any assignment:
    // per depth, ranks of src[depth] + sum c_j src[j] in odometer order,
    // and for affine searches the same with the basepoint mixed in
    std::vector<std::vector<std::uint8_t>> trans_ranks;
    std::vector<std::vector<std::vector<std::uint8_t>>> affine_ranks; // [depth][lambda-1]
    // pairwise invariants: dim(im M_i + im M_j) and dim(row M_i + row M_j)
    std::vector<std::vector<std::pair<std::uint8_t, std::uint8_t>>> pair_dims;

    search_ctx(const mat_space& a_, const mat_space& b_, std::uint64_t budget_)
        : a(a_), b(b_), f(a_.fld()), n(a_.n()), p(a_.p()), d(a_.dim()), budget(budget_),
          sys(a_.fld(), a_.n(), a_.p()) {
        enum_threshold = 1u << 18;
    }
};

// sweep over all coefficient vectors (c_0..c_{k-1}) in odometer order,
// visiting start + sum c_j gens[j]; fn returns false to abort
template <class Fn>
bool sweep_combos(const field& f, matrix start, const matrix* const* gens, std::size_t k,
                  Fn&& fn) {
    const unsigned q = f.q();
    std::uint64_t total = pow_u64(q, static_cast<unsigned>(k));
    std::vector<std::uint8_t> coef(k, 0);
    if (!fn(start)) return false;
    for (std::uint64_t it = 1; it < total; ++it) {
        std::size_t j = 0;
        while (coef[j] == q - 1) {
            coef[j] = 0;
            start.add_in_place(*gens[j]); // -(q-1)x = +x mod q
            ++j;
        }
        ++coef[j];
        start.add_in_place(*gens[j]);
        if (!fn(start)) return false;
    }
    return true;
}

// per-element invariant: dims of {A in V : im A inside im x} and
// {A in V : ker A contains ker x}, both preserved along the group action
std::pair<int, int> element_stab_dims(const mat_space& v, const matrix& x) {
    const field f = v.fld();
    const int d = v.dim();
    if (d == 0) return {0, 0};
    echelon_form ech = rref_and_rank(x);
    // rows of the left annihilator of x
    matrix left(f, x.rows() - ech.rank, x.rows());
    for (int i = ech.rank; i < x.rows(); ++i)
        for (int j = 0; j < x.rows(); ++j) left.set(i - ech.rank, j, ech.transform.at(i, j));
    auto kb = x.kernel_basis();
    matrix right(f, x.cols(), static_cast<int>(kb.size()));
    for (std::size_t j = 0; j < kb.size(); ++j)
        for (int i = 0; i < x.cols(); ++i) right.set(i, static_cast<int>(j), kb[j][i]);

    auto kernel_dim = [&](const std::function<row_vec(const matrix&)>& constraint) {
        std::vector<row_vec> cols;
        for (const auto& g : v.gens()) cols.push_back(constraint(g));
        const std::size_t len = cols[0].size();
        if (len == 0) return d;
        matrix sys(f, static_cast<int>(len), d);
        for (int j = 0; j < d; ++j)
            for (std::size_t i = 0; i < len; ++i)
                sys.set(static_cast<int>(i), j, cols[j][i]);
        return d - sys.rank();
    };
    int im_stab = kernel_dim([&](const matrix& g) { return vectorize(left * g); });
    int ker_stab = kernel_dim([&](const matrix& g) { return vectorize(g * right); });
    return {im_stab, ker_stab};
}

// dim(im A + im B) and dim(row A + row B): both preserved by A -> P A Q
std::pair<std::uint8_t, std::uint8_t> span_dims(const matrix& a, const matrix& b) {
    const field f = a.fld();
    const int n = a.rows(), p = a.cols();
    matrix cols(f, n, 2 * p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) {
            cols.set(i, j, a.at(i, j));
            cols.set(i, p + j, b.at(i, j));
        }
    matrix rows(f, 2 * n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) {
            rows.set(i, j, a.at(i, j));
            rows.set(n + i, j, b.at(i, j));
        }
    return {static_cast<std::uint8_t>(cols.rank()), static_cast<std::uint8_t>(rows.rank())};
}

void precompute_source_ranks(search_ctx& c) {
    const unsigned q = c.f.q();
    const std::size_t lo = c.affine ? 1 : 0;
    c.trans_ranks.resize(c.src.size());
    c.affine_ranks.resize(c.src.size());
    c.pair_dims.resize(c.src.size());
    for (std::size_t depth = 0; depth < c.src.size(); ++depth)
        for (std::size_t j = 0; j < depth; ++j)
            c.pair_dims[depth].push_back(span_dims(c.src[depth], c.src[j]));
    std::vector<const matrix*> gens;
    for (std::size_t depth = lo; depth < c.src.size(); ++depth) {
        gens.clear();
        for (std::size_t j = lo; j < depth; ++j) gens.push_back(&c.src[j]);
        auto& out = c.trans_ranks[depth];
        sweep_combos(c.f, c.src[depth], gens.data(), gens.size(), [&](const matrix& m) {
            out.push_back(static_cast<std::uint8_t>(m.rank()));
            return true;
        });
        if (c.affine && depth >= 1) {
            gens.clear();
            for (std::size_t j = 1; j < depth; ++j) gens.push_back(&c.src[j]);
            auto& slots = c.affine_ranks[depth];
            slots.resize(q - 1);
            for (unsigned lam = 1; lam < q; ++lam) {
                matrix start = c.src[0];
                start.add_scaled_in_place(c.src[depth], static_cast<std::uint8_t>(lam));
                auto& vec = slots[lam - 1];
                sweep_combos(c.f, start, gens.data(), gens.size(), [&](const matrix& m) {
                    vec.push_back(static_cast<std::uint8_t>(m.rank()));
                    return true;
                });
            }
        }
    }
}

// rank-consistency for every combination involving the newly assigned slot
bool combos_consistent(search_ctx& c, std::size_t depth) {
    const unsigned q = c.f.q();
    const std::size_t lo = c.affine ? 1 : 0;
    for (std::size_t j = 0; j < depth; ++j)
        if (span_dims(*c.img[depth], *c.img[j]) != c.pair_dims[depth][j]) return false;
    if (depth >= lo) {
        std::vector<const matrix*> gens;
        for (std::size_t j = lo; j < depth; ++j) gens.push_back(c.img[j]);
        const auto& want = c.trans_ranks[depth];
        std::size_t idx = 0;
        if (!sweep_combos(c.f, *c.img[depth], gens.data(), gens.size(),
                          [&](const matrix& m) { return m.rank() == want[idx++]; }))
            return false;
    }
    if (c.affine && depth >= 1) {
        std::vector<const matrix*> gens;
        for (std::size_t j = 1; j < depth; ++j) gens.push_back(c.img[j]);
        for (unsigned lam = 1; lam < q; ++lam) {
            matrix start = *c.img[0];
            start.add_scaled_in_place(*c.img[depth], static_cast<std::uint8_t>(lam));
            const auto& want = c.affine_ranks[depth][lam - 1];
            std::size_t idx = 0;
            if (!sweep_combos(c.f, start, gens.data(), gens.size(),
                              [&](const matrix& m) { return m.rank() == want[idx++]; }))
                return false;
        }
    }
    return true;
}

// enumerate the current solution space; returns true if a verified witness
// was found, otherwise the subtree can be pruned entirely
bool try_solutions(search_ctx& c) {
    auto basis = c.sys.nullspace();
    const unsigned q = c.f.q();
    const std::size_t e = basis.size();
    std::uint64_t total = pow_u64(q, static_cast<unsigned>(e));
    std::vector<std::uint8_t> coef(e, 0);
    row_vec sol(static_cast<std::size_t>(c.n) * c.n + static_cast<std::size_t>(c.p) * c.p, 0);
    for (std::uint64_t it = 1; it < total; ++it) {
        // odometer over coefficient vectors, skipping zero
        for (std::size_t j = 0; j < e; ++j) {
            if (coef[j] < q - 1) {
                ++coef[j];
                for (std::size_t k = 0; k < sol.size(); ++k)
                    sol[k] = c.f.add(sol[k], basis[j][k]);
                break;
            }
            coef[j] = 0;
            // subtracting (q-1)x equals adding x mod q
            for (std::size_t k = 0; k < sol.size(); ++k) sol[k] = c.f.add(sol[k], basis[j][k]);
        }
        matrix pm = c.sys.extract_p(sol);
        if (!pm.invertible()) continue;
        matrix rm = c.sys.extract_r(sol);
        if (!rm.invertible()) continue;
        matrix qm = rm.inverse();
        if (c.a.apply_equivalence(pm, qm) == c.b) {
            equivalence_witness w{pm, qm};
            assert(w.verify(c.a, c.b));
            c.found = w;
            return true;
        }
    }
    return false;
}

// depth-first assignment of images; returns true when a witness is found
bool dfs(search_ctx& c, std::size_t depth) {
    if (c.found) return true;
    const int dim_l = c.sys.solution_dim();
    if (dim_l == 0) return false; // only the zero solution remains
    std::uint64_t l_count = pow_u64(c.f.q(), static_cast<unsigned>(dim_l));
    if (l_count <= c.enum_threshold || depth == c.src.size()) {
        if (l_count <= (1ULL << 22)) return try_solutions(c);
        c.complete = false; // degenerate: solution space too large to sweep
        return false;
    }
    for (const matrix& cand : c.pools[depth]) {
        if (++c.nodes > c.budget) {
            c.complete = false;
            return false;
        }
        c.img[depth] = &cand;
        if (!combos_consistent(c, depth)) continue;
        std::size_t m = c.sys.mark();
        c.sys.push_pair(c.src[depth], cand);
        if (c.sys.solution_dim() > 0 && dfs(c, depth + 1)) return true;
        c.sys.rollback(m);
        if (!c.complete && c.nodes > c.budget) return false;
    }
    return false;
}

// greedy source basis, minimal-rank elements first; streams the element set
// once per rank class so nothing is stored besides the picks
std::vector<matrix> pick_source_basis(const mat_space& a, std::uint64_t el_budget) {
    std::vector<matrix> basis;
    std::vector<row_vec> span;
    std::vector<int> pivots;
    const int cap = std::min(a.n(), a.p());
    mat_space tr = a.translation();
    for (int k = 1; k <= cap && static_cast<int>(basis.size()) < a.dim(); ++k) {
        tr.for_each_element(
            [&](const matrix& m) {
                if (static_cast<int>(basis.size()) == a.dim()) return;
                if (m.rank() != k) return;
                row_vec red = reduce_mod_rows(a.fld(), vectorize(m), span, pivots);
                for (auto v : red)
                    if (v) {
                        basis.push_back(m);
                        span.push_back(vectorize(m));
                        pivots = rref_rows(a.fld(), span);
                        return;
                    }
            },
            el_budget);
    }
    return basis;
}

} // namespace

namespace detail {

equiv_result search_equivalence(const mat_space& a, const mat_space& b, std::uint64_t budget) {
    equiv_result res;
    if (a == b) {
        res.kind = equiv_kind::yes;
        res.witness = equivalence_witness{matrix::identity(a.fld(), a.n()),
                                          matrix::identity(a.fld(), a.p())};
        res.reason = "identical canonical forms";
        return res;
    }
    const field f = a.fld();
    // dim-0 spaces: single matrices; rank decides, rank normal forms build P, Q
    if (a.dim() == 0) {
        if (a.base().rank() != b.base().rank()) {
            res.kind = equiv_kind::no;
            res.reason = "basepoint rank differs";
            return res;
        }
        auto [pa, qa] = rank_normal_form(a.base());
        auto [pb, qb] = rank_normal_form(b.base());
        equivalence_witness w{pb.inverse() * pa, qa * qb.inverse()};
        if (w.verify(a, b)) {
            res.kind = equiv_kind::yes;
            res.witness = std::move(w);
            return res;
        }
        res.kind = equiv_kind::no; // cannot happen; ranks equal forces equivalence
        res.reason = "rank normal forms disagree";
        return res;
    }

    search_ctx ctx(a, b, budget);
    ctx.affine = !a.is_linear();

    std::uint64_t el_budget = default_budget(f);
    if (a.element_count() > el_budget) {
        res.kind = equiv_kind::inconclusive;
        res.reason = "element pools exceed the enumeration budget";
        return res;
    }
    if (ctx.affine) ctx.src.push_back(a.base());
    auto basis = pick_source_basis(a, el_budget);
    for (auto& m : basis) ctx.src.push_back(std::move(m));

    // candidate pools in enumeration order, collected per needed rank class
    ctx.pools.resize(ctx.src.size());
    ctx.img.assign(ctx.src.size(), nullptr);
    std::size_t slot = 0;
    if (ctx.affine) {
        const int r0 = a.base().rank();
        b.for_each_element(
            [&](const matrix& m) {
                if (m.rank() == r0) ctx.pools[0].push_back(m);
            },
            el_budget);
        slot = 1;
    }
    std::vector<std::vector<matrix>> rank_pool(std::min(a.n(), a.p()) + 1);
    std::vector<std::vector<std::pair<int, int>>> rank_pool_stabs(rank_pool.size());
    std::vector<bool> have_rank(rank_pool.size(), false);
    mat_space b_trans = b.translation();
    for (std::size_t i = slot; i < ctx.src.size(); ++i) {
        int r = ctx.src[i].rank();
        if (!have_rank[r]) {
            have_rank[r] = true;
            b_trans.for_each_element(
                [&](const matrix& m) {
                    if (m.rank() == r) rank_pool[r].push_back(m);
                },
                el_budget);
            for (const auto& m : rank_pool[r])
                rank_pool_stabs[r].push_back(element_stab_dims(b_trans, m));
        }
    }
    mat_space a_trans = a.translation();
    for (; slot < ctx.src.size(); ++slot) {
        const int r = ctx.src[slot].rank();
        auto want = element_stab_dims(a_trans, ctx.src[slot]);
        for (std::size_t k = 0; k < rank_pool[r].size(); ++k)
            if (rank_pool_stabs[r][k] == want) ctx.pools[slot].push_back(rank_pool[r][k]);
    }

    // for a linear target, witnesses come in scalar families (lambda P, Q),
    // so the first translation image may be normalized projectively
    if (a.is_linear() && !ctx.pools.empty() && f.q() > 2) {
        std::vector<matrix> reduced;
        for (const auto& m : ctx.pools[0]) {
            std::uint8_t lead = 0;
            for (std::uint8_t v : m.entries())
                if (v) { lead = v; break; }
            if (lead == 1) reduced.push_back(m);
        }
        ctx.pools[0] = std::move(reduced);
    }

    precompute_source_ranks(ctx);
    bool ok = dfs(ctx, 0);
    res.nodes = ctx.nodes;
    if (ok && ctx.found) {
        res.kind = equiv_kind::yes;
        res.witness = ctx.found;
        res.reason = "witness found";
        return res;
    }
    if (ctx.complete) {
        res.kind = equiv_kind::no;
        res.reason = "exhaustive witness search completed empty";
    } else {
        res.kind = equiv_kind::inconclusive;
        res.reason = ctx.nodes > budget ? "node budget exceeded" : "degenerate branch abandoned";
    }
    return res;
}

} // namespace detail

equiv_result are_equivalent(const mat_space& a, const mat_space& b, std::uint64_t budget) {
    if (a.fld() != b.fld()) fail(errc::field_mismatch, "are_equivalent: field mismatch");
    if (a.n() != b.n() || a.p() != b.p())
        fail(errc::shape_mismatch, "are_equivalent: ambient shapes differ");
    equiv_result res;
    if (a.dim() != b.dim()) {
        res.kind = equiv_kind::no;
        res.reason = "dim differs";
        return res;
    }
    if (a.is_linear() != b.is_linear()) {
        res.kind = equiv_kind::no;
        res.reason = "one space is linear, the other affine";
        return res;
    }
    // invariant screening
    bool counts_known = true;
    rank_profile pa, pb;
    try {
        pa = compute_rank_profile(a);
        pb = compute_rank_profile(b);
    } catch (const budget_error&) {
        counts_known = false;
        for (const auto& h : projective_points(a.fld(), a.p())) {
            pa.sh_dims.push_back(a.stabilizer_kernel(h).dim());
            pb.sh_dims.push_back(b.stabilizer_kernel(h).dim());
        }
        for (const auto& d : projective_points(a.fld(), a.n())) {
            pa.sd_dims.push_back(a.stabilizer_image(d).dim());
            pb.sd_dims.push_back(b.stabilizer_image(d).dim());
        }
        std::sort(pa.sh_dims.begin(), pa.sh_dims.end());
        std::sort(pb.sh_dims.begin(), pb.sh_dims.end());
        std::sort(pa.sd_dims.begin(), pa.sd_dims.end());
        std::sort(pb.sd_dims.begin(), pb.sd_dims.end());
    }
    if (counts_known && pa.set_counts != pb.set_counts) {
        res.kind = equiv_kind::no;
        res.reason = "rank distribution over the affine set differs";
        return res;
    }
    if (counts_known && pa.translation_counts != pb.translation_counts) {
        res.kind = equiv_kind::no;
        res.reason = "rank distribution over the translation space differs";
        return res;
    }
    if (pa.sh_dims != pb.sh_dims) {
        res.kind = equiv_kind::no;
        res.reason = "S_H dimension multiset differs";
        return res;
    }
    if (pa.sd_dims != pb.sd_dims) {
        res.kind = equiv_kind::no;
        res.reason = "S^D dimension multiset differs";
        return res;
    }
    return detail::search_equivalence(a, b, budget);
}

} // namespace flanders
