#include "qbc/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "qbc/kernels.hpp"

namespace qbc {

namespace {

void require_positive(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    require_positive(rows, cols);
    data_.assign(rows * cols, cplx{});
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require_positive(rows, cols);
    if (data_.size() != rows * cols) throw DimensionError("entry count does not match rows*cols");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    require_positive(rows_, cols_);
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("ragged initializer list");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) m(k, k) = diag[k];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) m(k, k) = diag[k];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix out = *this;
    for (auto& z : out.data_) z = std::conj(z);
    return out;
}

cplx ComplexMatrix::trace() const {
    if (!is_square()) throw DimensionError("trace of non-square matrix");
    cplx t{};
    for (std::size_t k = 0; k < rows_; ++k) t += (*this)(k, k);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    return std::sqrt(kernels::active().norm2(data_.data(), data_.size()));
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator+=");
    kernels::active().axpy(1.0, other.data_.data(), data_.data(), data_.size());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator-=");
    kernels::active().axpy(-1.0, other.data_.data(), data_.data(), data_.size());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    kernels::active().scal(s, data_.data(), data_.size());
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
    const auto& k = kernels::active();
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx* ci = c.row(i).data();
        for (std::size_t p = 0; p < a.cols(); ++p) {
            const cplx aip = a(i, p);
            if (aip == cplx{}) continue;
            k.axpy(aip, b.row(p).data(), ci, b.cols());
        }
    }
    return c;
}

ComplexMatrix adjoint_times(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionError("adjoint_times: row counts differ");
    const auto& k = kernels::active();
    ComplexMatrix c(a.cols(), b.cols());
    for (std::size_t p = 0; p < a.rows(); ++p) {
        const cplx* bp = b.row(p).data();
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const cplx api = a(p, i);
            if (api == cplx{}) continue;
            k.axpy(std::conj(api), bp, c.row(i).data(), b.cols());
        }
    }
    return c;
}

ComplexMatrix times_adjoint(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.cols()) throw DimensionError("times_adjoint: column counts differ");
    const auto& k = kernels::active();
    ComplexMatrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.rows(); ++j)
            c(i, j) = std::conj(k.dotc(a.row(i).data(), b.row(j).data(), a.cols()));
    return c;
}

std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> x) {
    if (a.cols() != x.size()) throw DimensionError("matvec: dimension mismatch");
    std::vector<cplx> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx acc{};
        const auto r = a.row(i);
        for (std::size_t j = 0; j < x.size(); ++j) acc += r[j] * x[j];
        y[i] = acc;
    }
    return y;
}

std::vector<cplx> adjoint_matvec(const ComplexMatrix& a, std::span<const cplx> x) {
    if (a.rows() != x.size()) throw DimensionError("adjoint_matvec: dimension mismatch");
    const auto& k = kernels::active();
    std::vector<cplx> y(a.cols());
    for (std::size_t p = 0; p < a.rows(); ++p) {
        if (x[p] == cplx{}) continue;
        // accumulate conj(y) += conj(x_p) row_p
        k.axpy(std::conj(x[p]), a.row(p).data(), y.data(), y.size());
    }
    for (auto& z : y) z = std::conj(z);
    return y;
}

cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
    if (x.size() != y.size()) throw DimensionError("inner: dimension mismatch");
    return kernels::active().dotc(x.data(), y.data(), x.size());
}

double norm(std::span<const cplx> x) { return std::sqrt(kernels::active().norm2(x.data(), x.size())); }

StateVector::StateVector(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) throw DimensionError("state dimension must be positive");
    const double n = norm(amps_);
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("cannot normalize a zero or non-finite state");
    kernels::active().scal(1.0 / n, amps_.data(), amps_.size());
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw DimensionError("basis index out of range");
    std::vector<cplx> v(dim);
    v[index] = 1.0;
    return StateVector(std::move(v));
}

ComplexMatrix StateVector::projector() const {
    const std::size_t d = amps_.size();
    ComplexMatrix p(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) p(i, j) = amps_[i] * std::conj(amps_[j]);
    return p;
}

StateVector StateVector::phase_fixed() const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < amps_.size(); ++k)
        if (std::abs(amps_[k]) > std::abs(amps_[best]) + 1e-12) best = k;
    const cplx phase = std::conj(amps_[best]) / std::abs(amps_[best]);
    std::vector<cplx> out(amps_);
    for (auto& z : out) z *= phase;
    out[best] = std::abs(amps_[best]);
    return StateVector(std::move(out));
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
    std::vector<cplx> v;
    v.reserve(a.dim() * b.dim());
    for (const auto& x : a.amplitudes())
        for (const auto& y : b.amplitudes()) v.push_back(x * y);
    return StateVector(std::move(v));
}

}  // namespace qbc
