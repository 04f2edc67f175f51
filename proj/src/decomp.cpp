#include "flanders/decomp.hpp"

#include <algorithm>
#include <cassert>

namespace flanders {

std::uint64_t gaussian_binomial(int m, int k, unsigned q) {
    if (k < 0 || k > m) return 0;
    // partial products are the Gaussian binomials [m-k+i choose i], integers
    unsigned __int128 g = 1;
    for (int i = 1; i <= k; ++i) {
        unsigned __int128 num = 1, den = 1;
        for (int e = 0; e < m - k + i; ++e) num *= q;
        for (int e = 0; e < i; ++e) den *= q;
        g = g * (num - 1) / (den - 1);
        if (g > UINT64_MAX) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(g);
}

// --- subspace iterator --------------------------------------------------

subspace_iterator::subspace_iterator(field f, int m, int k)
    : f_(f), m_(m), k_(k), single_pattern_(false) {
    if (k < 0 || k > m) fail(errc::param_out_of_range, "subspace_iterator: need 0 <= k <= m");
    pattern_.resize(k);
    for (int i = 0; i < k; ++i) pattern_[i] = i;
    enter_pattern();
}

subspace_iterator::subspace_iterator(field f, int m, std::vector<int> pattern)
    : f_(f), m_(m), k_(static_cast<int>(pattern.size())), single_pattern_(true),
      pattern_(std::move(pattern)) {
    for (int i = 0; i < k_; ++i)
        if (pattern_[i] < (i ? pattern_[i - 1] + 1 : 0) || pattern_[i] >= m)
            fail(errc::param_out_of_range, "subspace_iterator: bad pivot pattern");
    enter_pattern();
}

void subspace_iterator::enter_pattern() {
    free_pos_.clear();
    std::vector<bool> is_pivot(m_, false);
    for (int c : pattern_) is_pivot[c] = true;
    for (int i = 0; i < k_; ++i)
        for (int j = pattern_[i] + 1; j < m_; ++j)
            if (!is_pivot[j]) free_pos_.emplace_back(i, j);
    digits_.assign(free_pos_.size(), 0);
    rows_.assign(k_, row_vec(m_, 0));
    for (int i = 0; i < k_; ++i) rows_[i][pattern_[i]] = 1;
}

bool subspace_iterator::advance_pattern() {
    // next k-combination of {0..m-1} in lex order
    int i = k_ - 1;
    while (i >= 0 && pattern_[i] == m_ - k_ + i) --i;
    if (i < 0) return false;
    ++pattern_[i];
    for (int j = i + 1; j < k_; ++j) pattern_[j] = pattern_[j - 1] + 1;
    enter_pattern();
    return true;
}

bool subspace_iterator::next() {
    if (done_) return false;
    if (!started_) {
        started_ = true;
        return true;
    }
    const unsigned q = f_.q();
    for (std::size_t d = 0; d < digits_.size(); ++d) {
        if (digits_[d] < q - 1) {
            ++digits_[d];
            rows_[free_pos_[d].first][free_pos_[d].second] = digits_[d];
            return true;
        }
        digits_[d] = 0;
        rows_[free_pos_[d].first][free_pos_[d].second] = 0;
    }
    if (single_pattern_ || !advance_pattern()) {
        done_ = true;
        return false;
    }
    return true;
}

std::vector<std::vector<int>> subspace_iterator::pivot_patterns(int m, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > m) return out;
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) c[i] = i;
    while (true) {
        out.push_back(c);
        int i = k - 1;
        while (i >= 0 && c[i] == m - k + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

// --- decomposability ------------------------------------------------------

bool decomposition_witness::verify(const mat_space& sp) const {
    const field f = sp.fld();
    if (g_cols.rows() != sp.p() || g_cols.cols() != sp.p() - t) return false;
    if (h_cols.rows() != sp.n() || h_cols.cols() != s) return false;
    if (g_cols.cols() > 0 && g_cols.transposed().rank() != g_cols.cols()) return false;
    if (h_cols.cols() > 0 && h_cols.transposed().rank() != h_cols.cols()) return false;
    const int h_rank = h_cols.transposed().rank();
    std::vector<matrix> to_check = sp.gens();
    to_check.push_back(sp.base());
    for (const auto& m : to_check) {
        matrix img = m * g_cols; // n x (p-t)
        // columns of img must lie in the column span of h_cols
        std::vector<row_vec> rows;
        for (int j = 0; j < h_cols.cols(); ++j) {
            row_vec r(sp.n());
            for (int i = 0; i < sp.n(); ++i) r[i] = h_cols.at(i, j);
            rows.push_back(std::move(r));
        }
        for (int j = 0; j < img.cols(); ++j) {
            row_vec r(sp.n());
            for (int i = 0; i < sp.n(); ++i) r[i] = img.at(i, j);
            rows.push_back(std::move(r));
        }
        if (rank_of_rows(f, rows) != h_rank) return false;
    }
    return true;
}

namespace {

// Extends the RREF rows (dim <= target) to exactly target rows by appending
// unit vectors in ascending index order.
std::vector<row_vec> extend_to_dim(const field& f, std::vector<row_vec> rows, int target, int len) {
    std::vector<int> pivots = rref_rows(f, rows);
    for (int j = 0; j < len && static_cast<int>(rows.size()) < target; ++j) {
        if (std::find(pivots.begin(), pivots.end(), j) != pivots.end()) continue;
        row_vec e(len, 0);
        e[j] = 1;
        rows.push_back(std::move(e));
        pivots = rref_rows(f, rows);
    }
    return rows;
}

matrix rows_to_cols(const field& f, const std::vector<row_vec>& rows, int len) {
    matrix m(f, len, static_cast<int>(rows.size()));
    for (std::size_t j = 0; j < rows.size(); ++j)
        for (int i = 0; i < len; ++i) m.set(i, static_cast<int>(j), rows[j][i]);
    return m;
}

// Core search without the sigma+tau precondition (primitivity needs the
// degenerate splits).
std::optional<decomposition_witness> find_compression_witness(const mat_space& sp, int sigma,
                                                              int tau) {
    const field f = sp.fld();
    const int n = sp.n(), p = sp.p();
    if (sigma < 0 || sigma > n || tau < 0 || tau > p) return std::nullopt;

    std::vector<matrix> mats = sp.gens();
    mats.push_back(sp.base());

    subspace_iterator git(f, p, p - tau);
    while (git.next()) {
        // span of S*G as row vectors over K^n
        std::vector<row_vec> span;
        bool over = false;
        for (const auto& m : mats) {
            for (const auto& g : git.rows()) {
                row_vec img = m.apply(g);
                span.push_back(std::move(img));
            }
            if (static_cast<int>(span.size()) > 4 * (sigma + 1)) {
                rref_rows(f, span);
                if (static_cast<int>(span.size()) > sigma) { over = true; break; }
            }
        }
        if (over) continue;
        rref_rows(f, span);
        if (static_cast<int>(span.size()) > sigma) continue;
        std::vector<row_vec> h_rows = extend_to_dim(f, span, sigma, n);
        decomposition_witness w{sigma, tau, rows_to_cols(f, git.rows(), p),
                                rows_to_cols(f, h_rows, n)};
        assert(w.verify(sp));
        return w;
    }
    return std::nullopt;
}

} // namespace

std::optional<decomposition_witness> equiv_sub_compression(const mat_space& sp, int sigma,
                                                           int tau) {
    if (sigma < 0 || tau < 0 || sigma + tau > std::min(sp.n(), sp.p()))
        fail(errc::param_out_of_range, "equiv_sub_compression: need sigma+tau <= min(n,p)");
    return find_compression_witness(sp, sigma, tau);
}

std::optional<decomposition_witness> is_r_decomposable(const mat_space& sp, int r) {
    if (r < 0 || r > std::min(sp.n(), sp.p()))
        fail(errc::param_out_of_range, "is_r_decomposable: need 0 <= r <= min(n,p)");
    for (int sigma = 0; sigma <= r; ++sigma) {
        auto w = find_compression_witness(sp, sigma, r - sigma);
        if (w) return w;
    }
    return std::nullopt;
}

// --- primitivity ------------------------------------------------------------

namespace {

// unit-column complement of the span of a single canonical vector
matrix complement_cols(const field& f, const row_vec& v) {
    const int m = static_cast<int>(v.size());
    int piv = 0;
    while (piv < m && !v[piv]) ++piv;
    matrix c(f, m, m - 1);
    int col = 0;
    for (int j = 0; j < m; ++j)
        if (j != piv) c.set(j, col++, 1);
    return c;
}

// unit-row projection deleting one coordinate; injective on any subspace
// that avoids the deleted direction
matrix projection_killing(const field& f, int n, int non_pivot) {
    matrix k(f, n - 1, n);
    int row = 0;
    for (int i = 0; i < n; ++i)
        if (i != non_pivot) k.set(row++, i, 1);
    return k;
}

} // namespace

primitivity_report is_primitive(const mat_space& sp, std::uint64_t budget) {
    if (!sp.is_linear()) fail(errc::shape_mismatch, "is_primitive: space must be linear");
    const field f = sp.fld();
    const int n = sp.n(), p = sp.p();
    primitivity_report rep;
    const int r = sp.upper_rank(budget);
    rep.upper_rank = r;

    // (1) common killed line: subspace of R(0, p-1)
    if (auto w = find_compression_witness(sp, 0, p - 1)) {
        rep.condition = 1;
        rep.detail = "equivalent to a subspace of R(0,p-1): a common line is annihilated";
        rep.compression_witness = std::move(w);
        return rep;
    }
    // (2) common image hyperplane: subspace of R(n-1, 0)
    if (auto w = find_compression_witness(sp, n - 1, 0)) {
        rep.condition = 2;
        rep.detail = "equivalent to a subspace of R(n-1,0): all images share a hyperplane";
        rep.compression_witness = std::move(w);
        return rep;
    }
    // (3) a domain hyperplane lowers the upper-rank
    if (r >= 1 && p >= 1) {
        for (const auto& h : projective_points(f, p)) {
            mat_space restr = sp.restrict_cols(h.kernel_cols());
            if (restr.upper_rank(budget) <= r - 1) {
                rep.condition = 3;
                rep.detail = "restriction to a domain hyperplane has upper-rank r-1";
                rep.direction = h;
                return rep;
            }
        }
    }
    // (4) dually, quotienting out a line of K^n lowers the upper-rank
    if (r >= 1 && n >= 1) {
        for (const auto& d : projective_points(f, n)) {
            mat_space proj = sp.project_rows(d.annihilator_rows());
            if (proj.upper_rank(budget) <= r - 1) {
                rep.condition = 4;
                rep.detail = "projection along a line of the target has upper-rank r-1";
                rep.direction = d;
                return rep;
            }
        }
    }
    rep.primitive = true;
    return rep;
}

reduction_result primitive_reduction(const mat_space& sp, std::uint64_t budget) {
    if (!sp.is_linear()) fail(errc::shape_mismatch, "primitive_reduction: space must be linear");
    const field f = sp.fld();
    reduction_result res{0, 0, sp, 0, {}};
    while (true) {
        primitivity_report rep = is_primitive(res.core, budget);
        if (rep.primitive) {
            res.core_upper_rank = rep.upper_rank;
            return res;
        }
        const int n = res.core.n(), p = res.core.p();
        switch (rep.condition) {
        case 1: {
            // drop the annihilated direction
            row_vec g(p, 0);
            const matrix& gc = rep.compression_witness->g_cols;
            for (int i = 0; i < p; ++i) g[i] = gc.at(i, 0);
            res.core = res.core.restrict_cols(complement_cols(f, g));
            res.steps.push_back("deleted a dead column direction");
            break;
        }
        case 2: {
            // project along a direction outside the common image hyperplane
            const matrix& hc = rep.compression_witness->h_cols; // n x (n-1)
            std::vector<row_vec> rows;
            for (int j = 0; j < hc.cols(); ++j) {
                row_vec r(n);
                for (int i = 0; i < n; ++i) r[i] = hc.at(i, j);
                rows.push_back(std::move(r));
            }
            std::vector<int> pivots = rref_rows(f, rows);
            int non_pivot = 0;
            while (std::find(pivots.begin(), pivots.end(), non_pivot) != pivots.end()) ++non_pivot;
            res.core = res.core.project_rows(projection_killing(f, n, non_pivot));
            res.steps.push_back("deleted a dead row direction");
            break;
        }
        case 3:
            res.core = res.core.restrict_cols(rep.direction->kernel_cols());
            res.t += 1;
            res.steps.push_back("peeled a column compression layer");
            break;
        case 4:
            res.core = res.core.project_rows(rep.direction->annihilator_rows());
            res.s += 1;
            res.steps.push_back("peeled a row compression layer");
            break;
        default:
            fail(errc::param_out_of_range, "primitive_reduction: unexpected condition");
        }
    }
}

} // namespace flanders
