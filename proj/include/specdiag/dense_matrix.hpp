#pragma once

#include <cstddef>
#include <vector>

#include "specdiag/seqspec.hpp"

namespace specdiag {

enum class FieldTag { Real, Complex };

/// Dense row-major matrix over R or C. field() == Real guarantees every
/// stored imaginary part is exactly zero.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, FieldTag field = FieldTag::Real)
        : rows_(rows), cols_(cols), field_(field), data_(rows * cols, Complex(0.0, 0.0)) {}

    static DenseMatrix identity(std::size_t n, FieldTag field = FieldTag::Real);
    static DenseMatrix diagonal(const std::vector<double>& d);
    static DenseMatrix diagonal(const std::vector<Complex>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    FieldTag field() const { return field_; }
    bool is_real() const { return field_ == FieldTag::Real; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<Complex>& entries() const { return data_; }
    std::vector<Complex>& entries() { return data_; }

    /// Recompute the field tag from the stored entries.
    void normalize_field();
    /// Force the tag to Complex (e.g. after writing complex entries).
    void mark_complex() { field_ = FieldTag::Complex; }

    std::vector<Complex> diagonal_entries() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    FieldTag field_ = FieldTag::Real;
    std::vector<Complex> data_;
};

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix adjoint(const DenseMatrix& a);
DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);

double frobenius_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);

/// ||A*A - I||_F
double unitary_residual(const DenseMatrix& a);
/// ||A - A*||_F
double selfadjoint_residual(const DenseMatrix& a);
/// ||A^2 - A||_F
double idempotency_residual(const DenseMatrix& a);

/// result(i, j) = a(perm[i], perm[j]); simultaneous row/column reorder, which
/// preserves singular values and permutes the diagonal.
DenseMatrix permute_conjugate(const DenseMatrix& a, const std::vector<std::size_t>& perm);

/// Block-diagonal direct sum.
DenseMatrix direct_sum(const DenseMatrix& a, const DenseMatrix& b);

} // namespace specdiag
