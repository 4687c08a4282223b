#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>

#include "qbc/kernels.hpp"
#include "qbc/linalg.hpp"

namespace qbc {

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t max_entries) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    if (rows / b.rows() != a.rows() || cols / b.cols() != a.cols() || rows > max_entries / cols) {
        throw DimensionError("tensor_product: result exceeds " + std::to_string(max_entries) + " entries");
    }
    ComplexMatrix out(rows, cols);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> traced_slots) {
    if (!m.is_square()) throw DimensionError("partial_trace: matrix must be square");
    if (dims.empty()) throw DimensionError("partial_trace: empty dims");
    std::size_t total = 1;
    for (auto d : dims) {
        if (d == 0) throw DimensionError("partial_trace: zero slot dimension");
        total *= d;
    }
    if (total != m.rows()) throw DimensionError("partial_trace: product of dims does not match matrix size");
    std::vector<bool> traced(dims.size(), false);
    for (auto s : traced_slots) {
        if (s >= dims.size()) throw DimensionError("partial_trace: slot index out of range");
        traced[s] = true;
    }

    // strides of each slot in the full index (slot 0 slowest)
    std::vector<std::size_t> stride(dims.size());
    std::size_t acc = 1;
    for (std::size_t s = dims.size(); s-- > 0;) {
        stride[s] = acc;
        acc *= dims[s];
    }
    // offsets of kept-index and traced-index combinations
    auto offsets = [&](bool want_traced) {
        std::vector<std::size_t> offs{0};
        for (std::size_t s = 0; s < dims.size(); ++s) {
            if (traced[s] != want_traced) continue;
            std::vector<std::size_t> next;
            next.reserve(offs.size() * dims[s]);
            for (auto o : offs)
                for (std::size_t x = 0; x < dims[s]; ++x) next.push_back(o + x * stride[s]);
            offs = std::move(next);
        }
        return offs;
    };
    const auto kept = offsets(false);
    const auto env = offsets(true);

    ComplexMatrix out(kept.size(), kept.size());
    for (std::size_t r = 0; r < kept.size(); ++r)
        for (std::size_t c = 0; c < kept.size(); ++c) {
            cplx sum{};
            for (auto t : env) sum += m(kept[r] + t, kept[c] + t);
            out(r, c) = sum;
        }
    return out;
}

namespace {

// Eigenvalues of the Hermitian dilation [[0, m], [m^dagger, 0]] are +/- the
// singular values of m.
std::vector<double> singular_values(const ComplexMatrix& m) {
    if (is_hermitian(m, 1e-14 * std::max(1.0, m.max_abs()))) {
        auto ev = eigh(m).values;
        for (auto& x : ev) x = std::abs(x);
        return ev;
    }
    const std::size_t r = m.rows(), c = m.cols();
    ComplexMatrix dil(r + c, r + c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            dil(i, r + j) = m(i, j);
            dil(r + j, i) = std::conj(m(i, j));
        }
    auto ev = eigh(dil).values;
    std::vector<double> sv(ev.end() - static_cast<std::ptrdiff_t>(std::min(r, c)), ev.end());
    for (auto& x : sv) x = std::max(x, 0.0);
    return sv;
}

}  // namespace

double trace_norm(const ComplexMatrix& m) {
    if (!m.is_square()) throw DimensionError("trace_norm: matrix must be square");
    const auto sv = singular_values(m);
    return std::accumulate(sv.begin(), sv.end(), 0.0);
}

double operator_norm(const ComplexMatrix& m) {
    if (!m.is_square()) throw DimensionError("operator_norm: matrix must be square");
    const auto sv = singular_values(m);
    return *std::max_element(sv.begin(), sv.end());
}

double unitarity_residual(const ComplexMatrix& v) {
    if (!v.is_square()) return std::numeric_limits<double>::infinity();
    return operator_norm(adjoint_times(v, v) - ComplexMatrix::identity(v.rows()));
}

ComplexMatrix unitary_from_generator(const ComplexMatrix& h) {
    const auto eig = eigh(h);
    const std::size_t n = h.rows();
    ComplexMatrix scaled = eig.vectors;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx ph = std::polar(1.0, eig.values[k]);
        for (std::size_t r = 0; r < n; ++r) scaled(r, k) *= ph;
    }
    return times_adjoint(scaled, eig.vectors);
}

ComplexMatrix hermitian_from_params(std::span<const double> params) {
    const auto m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(params.size()))));
    if (m == 0 || m * m != params.size()) throw DimensionError("unitary parameters must have perfect-square length");
    ComplexMatrix h(m, m);
    std::size_t p = 0;
    for (std::size_t k = 0; k < m; ++k) h(k, k) = params[p++];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const cplx z{params[p], params[p + 1]};
            p += 2;
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    return h;
}

std::vector<double> params_from_hermitian(const ComplexMatrix& h) {
    if (!h.is_square()) throw DimensionError("params_from_hermitian: matrix must be square");
    const std::size_t m = h.rows();
    std::vector<double> params;
    params.reserve(m * m);
    for (std::size_t k = 0; k < m; ++k) params.push_back(h(k, k).real());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const cplx z = 0.5 * (h(i, j) + std::conj(h(j, i)));
            params.push_back(z.real());
            params.push_back(z.imag());
        }
    return params;
}

ComplexMatrix unitary_from_params(std::span<const double> params) {
    return unitary_from_generator(hermitian_from_params(params));
}

namespace {

// Orthogonalize `v` against `basis` twice and normalize; returns the norm
// before normalization.
double orthonormalize_against(std::vector<cplx>& v, const std::vector<std::vector<cplx>>& basis) {
    const auto& kern = kernels::active();
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) kern.axpy(-kern.dotc(q.data(), v.data(), v.size()), q.data(), v.data(), v.size());
    const double nv = std::sqrt(kern.norm2(v.data(), v.size()));
    if (nv > 0.0) kern.scal(1.0 / nv, v.data(), v.size());
    return nv;
}

ComplexMatrix from_columns(const std::vector<std::vector<cplx>>& cols) {
    const std::size_t n = cols.front().size();
    ComplexMatrix out(n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < n; ++r) out(r, c) = cols[c][r];
    return out;
}

void fill_from_standard_basis(std::vector<std::vector<cplx>>& cols, std::size_t n) {
    while (cols.size() < n) {
        // pick the basis vector with the largest component outside span(cols)
        std::size_t best = 0;
        double best_res = -1.0;
        for (std::size_t b = 0; b < n; ++b) {
            double inside = 0.0;
            for (const auto& q : cols) inside += std::norm(q[b]);
            if (1.0 - inside > best_res + 1e-12) {
                best_res = 1.0 - inside;
                best = b;
            }
        }
        std::vector<cplx> v(n);
        v[best] = 1.0;
        orthonormalize_against(v, cols);
        cols.push_back(std::move(v));
    }
}

}  // namespace

ComplexMatrix complete_to_unitary(const ComplexMatrix& columns, std::size_t given) {
    const std::size_t n = columns.rows();
    if (given > columns.cols() || given > n) throw DimensionError("complete_to_unitary: too many given columns");
    std::vector<std::vector<cplx>> cols;
    cols.reserve(n);
    for (std::size_t c = 0; c < given; ++c) {
        std::vector<cplx> v(n);
        for (std::size_t r = 0; r < n; ++r) v[r] = columns(r, c);
        if (orthonormalize_against(v, cols) < 1e-8) throw NumericalError("complete_to_unitary: given columns are dependent");
        cols.push_back(std::move(v));
    }
    fill_from_standard_basis(cols, n);
    return from_columns(cols);
}

ComplexMatrix polar_unitary(const ComplexMatrix& t) {
    if (!t.is_square()) throw DimensionError("polar_unitary: matrix must be square");
    const std::size_t n = t.rows();
    const auto eig = eigh(adjoint_times(t, t));
    const double smax = std::sqrt(std::max(eig.values.back(), 0.0));

    // descending singular values
    std::vector<std::vector<cplx>> left;
    std::vector<std::vector<cplx>> right;
    for (std::size_t kk = n; kk-- > 0;) {
        std::vector<cplx> w(n);
        for (std::size_t r = 0; r < n; ++r) w[r] = eig.vectors(r, kk);
        const double sigma = std::sqrt(std::max(eig.values[kk], 0.0));
        if (sigma > 1e-10 * smax && sigma > 1e-300) {
            auto u = matvec(t, w);
            if (orthonormalize_against(u, left) > 1e-8 * sigma) {
                left.push_back(std::move(u));
                right.push_back(std::move(w));
                continue;
            }
        }
        right.push_back(std::move(w));
    }
    fill_from_standard_basis(left, n);
    return times_adjoint(from_columns(left), from_columns(right));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(base) ^ stream) ^ (index * 0xd1b54a32d192ed03ULL));
}

}  // namespace qbc
