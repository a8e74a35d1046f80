#pragma once

#include <string>
#include <vector>

#include "fsi/types.hpp"

namespace fsi {

struct Triplet {
    int row;
    int col;
    double value;
};

/// Compressed sparse rows, finalized from triplets by a stable sort-and-sum
/// so the result is independent of assembly order and thread count.
class SparseMatrix {
public:
    SparseMatrix() = default;

    static SparseMatrix from_triplets(int dim, std::vector<Triplet> triplets);

    int dim() const { return dim_; }
    std::size_t nnz() const { return values_.size(); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& cols() const { return cols_; }
    const std::vector<double>& values() const { return values_; }

    /// y = A x
    void multiply(const Vector& x, Vector& y) const;
    /// y += s A x
    void multiply_add(double s, const Vector& x, Vector& y) const;

    double max_abs() const;
    /// max_ij |A_ij - A_ji|
    double symmetry_residual() const;
    double coeff(int row, int col) const;

    /// this + s * other (sparsity patterns may differ)
    SparseMatrix add_scaled(const SparseMatrix& other, double s) const;

    std::vector<Triplet> to_triplets() const;

    /// MatrixMarket coordinate ASCII export.
    void export_matrix_market(const std::string& path) const;

private:
    int dim_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> cols_;
    std::vector<double> values_;
};

}  // namespace fsi
