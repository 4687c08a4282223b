#include <cmath>
#include <random>

#include "qbc/kernels.hpp"
#include "qbc/linalg.hpp"

namespace qbc {

namespace {

std::vector<cplx> gaussian_vector(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& z : v) {
        const double re = normal(rng);
        const double im = normal(rng);
        z = {re, im};
    }
    return v;
}

}  // namespace

StateVector random_state(std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw DimensionError("random_state: dimension must be positive");
    std::mt19937_64 rng(seed);
    auto v = gaussian_vector(dim, rng);
    // first amplitude real and nonnegative
    const double a0 = std::abs(v[0]);
    if (a0 > 0.0) {
        const cplx ph = std::conj(v[0]) / a0;
        for (auto& z : v) z *= ph;
        v[0] = a0;
    }
    return StateVector(std::move(v));
}

ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw DimensionError("random_unitary: dimension must be positive");
    std::mt19937_64 rng(seed);
    const auto& kern = kernels::active();
    // Gram-Schmidt on Gaussian columns equals QR with a positive diagonal R.
    std::vector<std::vector<cplx>> cols;
    while (cols.size() < dim) {
        auto v = gaussian_vector(dim, rng);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : cols) kern.axpy(-kern.dotc(q.data(), v.data(), dim), q.data(), v.data(), dim);
        const double nv = std::sqrt(kern.norm2(v.data(), dim));
        if (nv < 1e-8) continue;
        kern.scal(1.0 / nv, v.data(), dim);
        cols.push_back(std::move(v));
    }
    ComplexMatrix u(dim, dim);
    for (std::size_t c = 0; c < dim; ++c)
        for (std::size_t r = 0; r < dim; ++r) u(r, c) = cols[c][r];
    return u;
}

}  // namespace qbc
