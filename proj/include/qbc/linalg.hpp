#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qbc/matrix.hpp"

namespace qbc {

inline constexpr std::size_t kDefaultMaxEntries = std::size_t{1} << 20;

// Kronecker product; the first factor is the slow (big-endian) index.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             std::size_t max_entries = kDefaultMaxEntries);

// Trace out `traced_slots` of a square matrix on the tensor product of spaces
// with dimensions `dims` (slot 0 slowest). Untraced slots keep their order.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> traced_slots);

struct HermitianEigen {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // eigenvector k in column k
    int iterations = 0;
};

// Eigendecomposition of the Hermitian part of `m` by Householder reduction to
// real tridiagonal form followed by implicit QL. Throws NumericalError when QL
// fails to converge.
HermitianEigen eigh(const ComplexMatrix& m);

ComplexMatrix hermitian_part(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol);

double trace_norm(const ComplexMatrix& m);
double operator_norm(const ComplexMatrix& m);

// ||v^dagger v - I|| in operator norm.
double unitarity_residual(const ComplexMatrix& v);

// exp(i h) for Hermitian h.
ComplexMatrix unitary_from_generator(const ComplexMatrix& h);

// Hermitian generator from m^2 real parameters: the first m are the diagonal,
// followed by (re, im) pairs of the strict upper triangle in row-major order.
ComplexMatrix hermitian_from_params(std::span<const double> params);
std::vector<double> params_from_hermitian(const ComplexMatrix& h);
ComplexMatrix unitary_from_params(std::span<const double> params);

// Extends orthonormal columns to a full unitary; columns beyond `given`
// are filled by Gram-Schmidt against the standard basis.
ComplexMatrix complete_to_unitary(const ComplexMatrix& columns, std::size_t given);

// Unitary factor U of the polar decomposition t = U P. For rank-deficient t
// the factor on the kernel is completed arbitrarily (deterministically).
ComplexMatrix polar_unitary(const ComplexMatrix& t);

StateVector random_state(std::size_t dim, std::uint64_t seed);
ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed);

// Independent 64-bit seed for stream `index` of `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0);

}  // namespace qbc
