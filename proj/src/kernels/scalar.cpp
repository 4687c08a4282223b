#include "qbc/kernels.hpp"

namespace qbc::kernels {
namespace {

void axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t k = 0; k < n; ++k) {
        const double xr = x[k].real(), xi = x[k].imag();
        y[k] = {y[k].real() + (ar * xr - ai * xi), y[k].imag() + (ar * xi + ai * xr)};
    }
}

cplx dotc_scalar(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double xr = x[k].real(), xi = x[k].imag();
        const double yr = y[k].real(), yi = y[k].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

void rot_scalar(double c, double s, cplx* x, cplx* y, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const cplx xk = x[k];
        const cplx yk = y[k];
        x[k] = c * xk - s * yk;
        y[k] = s * xk + c * yk;
    }
}

double norm2_scalar(const cplx* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += x[k].real() * x[k].real() + x[k].imag() * x[k].imag();
    return acc;
}

void scal_scalar(cplx a, cplx* x, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) x[k] *= a;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{"scalar", axpy_scalar, dotc_scalar, rot_scalar, norm2_scalar, scal_scalar};
    return table;
}

}  // namespace qbc::kernels
