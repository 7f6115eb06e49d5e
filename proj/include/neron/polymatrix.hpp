#pragma once

#include <vector>

#include "neron/polynomial.hpp"

namespace neron {

// Row-major matrix of polynomials over one table.
class PolyMatrix {
  public:
    PolyMatrix() = default;
    PolyMatrix(std::size_t rows, std::size_t cols, const VarTablePtr& table)
        : rows_(rows), cols_(cols), table_(table),
          entries_(rows * cols, Polynomial::zero(table)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const VarTablePtr& table() const { return table_; }

    const Polynomial& at(std::size_t i, std::size_t j) const { return entries_.at(i * cols_ + j); }
    Polynomial& at(std::size_t i, std::size_t j) { return entries_.at(i * cols_ + j); }

    static PolyMatrix identity(std::size_t n, const VarTablePtr& table);

    PolyMatrix operator*(const PolyMatrix& o) const;
    PolyMatrix scaled(const Polynomial& p) const;
    bool operator==(const PolyMatrix& o) const;

    PolyMatrix submatrix(const std::vector<std::size_t>& rows,
                         const std::vector<std::size_t>& cols) const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    VarTablePtr table_;
    std::vector<Polynomial> entries_;
};

// Entry (i, j) = d f_i / d vars_j.
PolyMatrix jacobian(const std::vector<Polynomial>& f, const std::vector<std::size_t>& vars,
                    const VarTablePtr& table);

// Exact determinant: cofactor expansion up to 3x3, fraction-free Bareiss
// beyond. Cross-checked by tests against plain cofactor expansion.
Polynomial determinant(const PolyMatrix& m);
// Cofactor expansion at any size; reference route for the Bareiss path.
Polynomial determinant_cofactor(const PolyMatrix& m);

struct MinorEntry {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    Polynomial value;
};

// All r x r minors in lexicographic (row-set, col-set) enumeration order.
// The parallel kernel distributes minor positions across threads and merges
// in enumeration order; the serial variant is the reference implementation.
std::vector<MinorEntry> all_minors(const PolyMatrix& m, std::size_t r);
std::vector<MinorEntry> all_minors_serial(const PolyMatrix& m, std::size_t r);

// Transposed cofactor matrix: m * adjugate(m) = determinant(m) * Id.
PolyMatrix adjugate(const PolyMatrix& m);

// Square completion of an r x n Jacobian. Columns are laid out with the
// non-minor variables first (ascending) followed by the minor variables in
// descending order, and the border rows carry the identity on the non-minor
// columns, so det(border(J)) = +/- the chosen minor. When r = n the matrix
// is returned as-is. `permutation` (optional out) receives the column
// layout as original column indices.
PolyMatrix border(const PolyMatrix& J, const std::vector<std::size_t>& minor_cols,
                  std::vector<std::size_t>* permutation = nullptr);

// The column layout used by border().
std::vector<std::size_t> border_layout(std::size_t n, const std::vector<std::size_t>& minor_cols);

} // namespace neron
