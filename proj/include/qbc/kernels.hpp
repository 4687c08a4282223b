#pragma once

// Data-parallel inner loops over interleaved complex<double> storage.
//
// Every kernel has a scalar reference implementation. Vectorized variants
// are compiled in separate translation units and selected once at runtime
// according to the CPU; `QBC_KERNELS=scalar` in the environment forces the
// reference path.

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace qbc::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    const char* name;
    // y += a * x
    void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
    // sum_k conj(x_k) * y_k
    cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
    // (x, y) <- (c x - s y, s x + c y)
    void (*rot)(double c, double s, cplx* x, cplx* y, std::size_t n);
    // sum_k |x_k|^2
    double (*norm2)(const cplx* x, std::size_t n);
    // x *= a
    void (*scal)(cplx a, cplx* x, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_table();

// Kernel table chosen at first use.
const KernelTable& active();

// Force a table by name ("scalar", "avx2"). Returns false if unavailable.
// Intended for tests and benchmarks; not thread-safe against concurrent use.
bool select(std::string_view name);

std::vector<std::string_view> available();

}  // namespace qbc::kernels
