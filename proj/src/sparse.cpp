#include "fsi/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace fsi {

SparseMatrix SparseMatrix::from_triplets(int dim, std::vector<Triplet> triplets) {
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m;
    m.dim_ = dim;
    m.row_ptr_.assign(dim + 1, 0);
    m.cols_.reserve(triplets.size());
    m.values_.reserve(triplets.size());

    std::size_t i = 0;
    while (i < triplets.size()) {
        const int r = triplets[i].row, c = triplets[i].col;
        double sum = 0.0;
        while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c)
            sum += triplets[i++].value;
        m.cols_.push_back(c);
        m.values_.push_back(sum);
        m.row_ptr_[r + 1] += 1;
    }
    for (int r = 0; r < dim; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
}

void SparseMatrix::multiply(const Vector& x, Vector& y) const {
    y.assign(dim_, 0.0);
    multiply_add(1.0, x, y);
}

void SparseMatrix::multiply_add(double s, const Vector& x, Vector& y) const {
    for (int r = 0; r < dim_; ++r) {
        double sum = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) sum += values_[k] * x[cols_[k]];
        y[r] += s * sum;
    }
}

double SparseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double SparseMatrix::coeff(int row, int col) const {
    for (int k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
        if (cols_[k] == col) return values_[k];
    return 0.0;
}

double SparseMatrix::symmetry_residual() const {
    double res = 0.0;
    for (int r = 0; r < dim_; ++r)
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            res = std::max(res, std::abs(values_[k] - coeff(cols_[k], r)));
    return res;
}

SparseMatrix SparseMatrix::add_scaled(const SparseMatrix& other, double s) const {
    std::vector<Triplet> t = to_triplets();
    for (const Triplet& o : other.to_triplets()) t.push_back({o.row, o.col, s * o.value});
    return from_triplets(dim_, std::move(t));
}

std::vector<Triplet> SparseMatrix::to_triplets() const {
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (int r = 0; r < dim_; ++r)
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            t.push_back({r, cols_[k], values_[k]});
    return t;
}

void SparseMatrix::export_matrix_market(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("export_matrix_market: cannot open '" + path + "'");
    out.precision(17);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << dim_ << " " << dim_ << " " << nnz() << "\n";
    for (int r = 0; r < dim_; ++r)
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            out << (r + 1) << " " << (cols_[k] + 1) << " " << values_[k] << "\n";
}

}  // namespace fsi
