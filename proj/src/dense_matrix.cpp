#include "specdiag/dense_matrix.hpp"

#include <cmath>

namespace specdiag {

DenseMatrix DenseMatrix::identity(std::size_t n, FieldTag field) {
    DenseMatrix m(n, n, field);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1.0, 0.0);
    return m;
}

DenseMatrix DenseMatrix::diagonal(const std::vector<double>& d) {
    DenseMatrix m(d.size(), d.size(), FieldTag::Real);
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = Complex(d[i], 0.0);
    return m;
}

DenseMatrix DenseMatrix::diagonal(const std::vector<Complex>& d) {
    DenseMatrix m(d.size(), d.size(), FieldTag::Complex);
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    m.normalize_field();
    return m;
}

void DenseMatrix::normalize_field() {
    for (const Complex& z : data_) {
        if (z.imag() != 0.0) {
            field_ = FieldTag::Complex;
            return;
        }
    }
    field_ = FieldTag::Real;
}

std::vector<Complex> DenseMatrix::diagonal_entries() const {
    std::size_t n = std::min(rows_, cols_);
    std::vector<Complex> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = (*this)(i, i);
    return d;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) raise(Errc::DimensionMismatch, "multiply: inner dimensions differ");
    DenseMatrix out(a.rows(), b.cols(), FieldTag::Complex);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    out.normalize_field();
    return out;
}

DenseMatrix adjoint(const DenseMatrix& a) {
    DenseMatrix out(a.cols(), a.rows(), a.field());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix out(a.cols(), a.rows(), a.field());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        raise(Errc::DimensionMismatch, "subtract: shapes differ");
    DenseMatrix out(a.rows(), a.cols(), FieldTag::Complex);
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        out.entries()[i] = a.entries()[i] - b.entries()[i];
    out.normalize_field();
    return out;
}

double frobenius_norm(const DenseMatrix& a) {
    double s = 0.0;
    for (const Complex& z : a.entries()) s += std::norm(z);
    return std::sqrt(s);
}

double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (const Complex& z : a.entries()) m = std::max(m, std::abs(z));
    return m;
}

double unitary_residual(const DenseMatrix& a) {
    DenseMatrix g = multiply(adjoint(a), a);
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    return frobenius_norm(g);
}

double selfadjoint_residual(const DenseMatrix& a) {
    return frobenius_norm(subtract(a, adjoint(a)));
}

double idempotency_residual(const DenseMatrix& a) {
    return frobenius_norm(subtract(multiply(a, a), a));
}

DenseMatrix permute_conjugate(const DenseMatrix& a, const std::vector<std::size_t>& perm) {
    if (!a.square() || perm.size() != a.rows())
        raise(Errc::DimensionMismatch, "permute_conjugate: square matrix and full permutation required");
    DenseMatrix out(a.rows(), a.cols(), a.field());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(perm[i], perm[j]);
    return out;
}

DenseMatrix direct_sum(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows() + b.rows(), a.cols() + b.cols(),
                    (a.is_real() && b.is_real()) ? FieldTag::Real : FieldTag::Complex);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
    return out;
}

} // namespace specdiag
