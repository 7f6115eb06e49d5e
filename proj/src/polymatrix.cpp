#include "neron/polymatrix.hpp"

#include <algorithm>

namespace neron {

PolyMatrix PolyMatrix::identity(std::size_t n, const VarTablePtr& table) {
    PolyMatrix m(n, n, table);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Polynomial::constant(table, 1);
    return m;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& o) const {
    require_same_table(table_, o.table_);
    if (cols_ != o.rows_) fail(ErrorKind::OutOfRange, "matrix product shape mismatch");
    PolyMatrix r(rows_, o.cols_, table_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < o.cols_; ++j) {
            Polynomial s(table_);
            for (std::size_t k = 0; k < cols_; ++k) s += at(i, k) * o.at(k, j);
            r.at(i, j) = std::move(s);
        }
    return r;
}

PolyMatrix PolyMatrix::scaled(const Polynomial& p) const {
    PolyMatrix r(rows_, cols_, table_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j) * p;
    return r;
}

bool PolyMatrix::operator==(const PolyMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i] != o.entries_[i]) return false;
    return true;
}

PolyMatrix PolyMatrix::submatrix(const std::vector<std::size_t>& rows,
                                 const std::vector<std::size_t>& cols) const {
    PolyMatrix r(rows.size(), cols.size(), table_);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) r.at(i, j) = at(rows[i], cols[j]);
    return r;
}

PolyMatrix jacobian(const std::vector<Polynomial>& f, const std::vector<std::size_t>& vars,
                    const VarTablePtr& table) {
    for (std::size_t a = 0; a < vars.size(); ++a) {
        if (vars[a] >= table->size()) fail(ErrorKind::UnknownVariable, "jacobian: bad variable");
        for (std::size_t b = a + 1; b < vars.size(); ++b)
            if (vars[a] == vars[b]) fail(ErrorKind::Validation, "jacobian: repeated variable");
    }
    PolyMatrix m(f.size(), vars.size(), table);
    for (std::size_t i = 0; i < f.size(); ++i) {
        require_same_table(f[i].table(), table);
        for (std::size_t j = 0; j < vars.size(); ++j) m.at(i, j) = differentiate(f[i], vars[j]);
    }
    return m;
}

Polynomial determinant_cofactor(const PolyMatrix& m) {
    if (m.rows() != m.cols()) fail(ErrorKind::NonSquare, "determinant of non-square matrix");
    std::size_t n = m.rows();
    if (n == 0) return Polynomial::constant(m.table(), 1);
    if (n == 1) return m.at(0, 0);
    if (n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    Polynomial det(m.table());
    std::vector<std::size_t> rest_rows;
    for (std::size_t i = 1; i < n; ++i) rest_rows.push_back(i);
    for (std::size_t j = 0; j < n; ++j) {
        if (m.at(0, j).is_zero()) continue;
        std::vector<std::size_t> cols;
        for (std::size_t k = 0; k < n; ++k)
            if (k != j) cols.push_back(k);
        Polynomial minor = determinant_cofactor(m.submatrix(rest_rows, cols));
        Polynomial contrib = m.at(0, j) * minor;
        det = (j % 2 == 0) ? det + contrib : det - contrib;
    }
    return det;
}

static Polynomial determinant_bareiss(const PolyMatrix& m) {
    std::size_t n = m.rows();
    // working copy
    std::vector<std::vector<Polynomial>> a(n, std::vector<Polynomial>(n, Polynomial(m.table())));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m.at(i, j);
    Polynomial prev = Polynomial::constant(m.table(), 1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k].is_zero()) {
            std::size_t p = k + 1;
            while (p < n && a[p][k].is_zero()) ++p;
            if (p == n) return Polynomial(m.table()); // singular
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Polynomial num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                a[i][j] = exact_divide(num, prev);
            }
            a[i][k] = Polynomial(m.table());
        }
        prev = a[k][k];
    }
    Polynomial det = a[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

Polynomial determinant(const PolyMatrix& m) {
    if (m.rows() != m.cols()) fail(ErrorKind::NonSquare, "determinant of non-square matrix");
    if (m.rows() <= 3) return determinant_cofactor(m);
    return determinant_bareiss(m);
}

namespace {

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t r) {
    std::vector<std::vector<std::size_t>> out;
    if (r > n) return out;
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        std::size_t i = r;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - r) break;
            if (i == 0) return out;
        }
        if (idx[i] == i + n - r) return out;
        ++idx[i];
        for (std::size_t j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::vector<MinorEntry> minors_impl(const PolyMatrix& m, std::size_t r, bool parallel) {
    if (r > std::min(m.rows(), m.cols()))
        fail(ErrorKind::OutOfRange, "minor size exceeds matrix dimensions");
    auto rsets = combinations(m.rows(), r);
    auto csets = combinations(m.cols(), r);
    std::vector<MinorEntry> out(rsets.size() * csets.size());
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(out.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t t = 0; t < total; ++t) {
            std::size_t ri = static_cast<std::size_t>(t) / csets.size();
            std::size_t ci = static_cast<std::size_t>(t) % csets.size();
            out[t] = {rsets[ri], csets[ci], determinant(m.submatrix(rsets[ri], csets[ci]))};
        }
    } else {
        for (std::ptrdiff_t t = 0; t < total; ++t) {
            std::size_t ri = static_cast<std::size_t>(t) / csets.size();
            std::size_t ci = static_cast<std::size_t>(t) % csets.size();
            out[t] = {rsets[ri], csets[ci], determinant(m.submatrix(rsets[ri], csets[ci]))};
        }
    }
    return out;
}

} // namespace

std::vector<MinorEntry> all_minors(const PolyMatrix& m, std::size_t r) {
    return minors_impl(m, r, true);
}

std::vector<MinorEntry> all_minors_serial(const PolyMatrix& m, std::size_t r) {
    return minors_impl(m, r, false);
}

PolyMatrix adjugate(const PolyMatrix& m) {
    if (m.rows() != m.cols()) fail(ErrorKind::NonSquare, "adjugate of non-square matrix");
    std::size_t n = m.rows();
    PolyMatrix adj(n, n, m.table());
    if (n == 0) return adj;
    if (n == 1) {
        adj.at(0, 0) = Polynomial::constant(m.table(), 1);
        return adj;
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> rows;
        for (std::size_t k = 0; k < n; ++k)
            if (k != i) rows.push_back(k);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::size_t> cols;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) cols.push_back(k);
            Polynomial c = determinant(m.submatrix(rows, cols));
            if ((i + j) % 2 == 1) c = -c;
            adj.at(j, i) = std::move(c); // transpose
        }
    }
    return adj;
}

std::vector<std::size_t> border_layout(std::size_t n, const std::vector<std::size_t>& minor_cols) {
    std::vector<bool> in_minor(n, false);
    for (auto c : minor_cols) {
        if (c >= n) fail(ErrorKind::OutOfRange, "minor column out of range");
        in_minor[c] = true;
    }
    if (minor_cols.size() == n) {
        std::vector<std::size_t> id(n);
        for (std::size_t i = 0; i < n; ++i) id[i] = i;
        return id;
    }
    std::vector<std::size_t> layout;
    for (std::size_t i = 0; i < n; ++i)
        if (!in_minor[i]) layout.push_back(i);
    std::vector<std::size_t> sorted_minor(minor_cols);
    std::sort(sorted_minor.begin(), sorted_minor.end());
    for (auto it = sorted_minor.rbegin(); it != sorted_minor.rend(); ++it) layout.push_back(*it);
    return layout;
}

PolyMatrix border(const PolyMatrix& J, const std::vector<std::size_t>& minor_cols,
                  std::vector<std::size_t>* permutation) {
    std::size_t r = J.rows(), n = J.cols();
    if (r > n) fail(ErrorKind::OutOfRange, "border: more rows than columns");
    if (minor_cols.size() != r) fail(ErrorKind::OutOfRange, "border: minor size must equal rows");
    std::vector<std::size_t> layout = border_layout(n, minor_cols);
    if (permutation) *permutation = layout;
    PolyMatrix H(n, n, J.table());
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < n; ++k) H.at(i, k) = J.at(i, layout[k]);
    for (std::size_t i = 0; i + r < n; ++i)
        H.at(r + i, i) = Polynomial::constant(J.table(), 1);
    return H;
}

} // namespace neron
