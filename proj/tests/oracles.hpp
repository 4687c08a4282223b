#pragma once

// Independent reference computations for tests. Nothing here calls into the
// library's numerical routines; only the value types are shared.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qbc/matrix.hpp"
#include "qbc/protocol.hpp"

namespace oracle {

using qbc::ComplexMatrix;
using qbc::cplx;

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> g;
    ComplexMatrix m(rows, cols);
    for (auto& z : m.entries()) z = {g(rng), g(rng)};
    return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
    auto a = random_matrix(rng, n, n);
    ComplexMatrix h(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) h(r, c) = a(r, c) + std::conj(a(c, r));
    return h;
}

inline std::vector<cplx> random_vector(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto& z : v) z = {g(rng), g(rng)};
    return v;
}

inline ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            cplx s{};
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline ComplexMatrix dagger(const ComplexMatrix& a) {
    ComplexMatrix d(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) d(j, i) = std::conj(a(i, j));
    return d;
}

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double d = 0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a.entries()[k] - b.entries()[k]));
    return d;
}

// Gram-Schmidt on the columns of a Gaussian matrix: a random isometry.
inline ComplexMatrix random_isometry(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    auto m = random_matrix(rng, rows, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t p = 0; p < c; ++p) {
                cplx ip{};
                for (std::size_t r = 0; r < rows; ++r) ip += std::conj(m(r, p)) * m(r, c);
                for (std::size_t r = 0; r < rows; ++r) m(r, c) -= ip * m(r, p);
            }
        double n = 0;
        for (std::size_t r = 0; r < rows; ++r) n += std::norm(m(r, c));
        n = std::sqrt(n);
        for (std::size_t r = 0; r < rows; ++r) m(r, c) /= n;
    }
    return m;
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t n) { return random_isometry(rng, n, n); }

// Kraus operators cut from a random isometry C^din -> C^(m dout). Needs
// m * dout >= din; `feasible_m` raises m to the smallest workable count.
inline std::size_t feasible_m(std::size_t din, std::size_t dout, std::size_t m) {
    return std::max(m, (din + dout - 1) / dout);
}

inline qbc::KrausFamily random_family(std::mt19937_64& rng, std::size_t din, std::size_t dout, std::size_t m) {
    m = feasible_m(din, dout, m);
    const auto w = random_isometry(rng, m * dout, din);
    std::vector<ComplexMatrix> ops;
    for (std::size_t j = 0; j < m; ++j) {
        ComplexMatrix e(dout, din);
        for (std::size_t r = 0; r < dout; ++r)
            for (std::size_t c = 0; c < din; ++c) e(r, c) = w(j * dout + r, c);
        ops.push_back(e);
    }
    return {din, dout, ops};
}

inline ComplexMatrix random_density(std::mt19937_64& rng, std::size_t n) {
    auto a = random_matrix(rng, n, n);
    auto rho = mul(a, dagger(a));
    cplx tr{};
    for (std::size_t k = 0; k < n; ++k) tr += rho(k, k);
    for (auto& z : rho.entries()) z /= tr.real();
    return rho;
}

// Cyclic Jacobi on the real symmetric embedding [[A, -B], [B, A]] of H = A + iB.
// Every eigenvalue of H appears twice; the doubled list is halved.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
    const std::size_t n = h.rows(), N = 2 * n;
    std::vector<double> a(N * N);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * N + j]; };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const cplx z = 0.5 * (h(i, j) + std::conj(h(j, i)));
            at(i, j) = z.real();
            at(i + n, j + n) = z.real();
            at(i, j + n) = -z.imag();
            at(i + n, j) = z.imag();
        }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i + 1; j < N; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) {
                if (std::abs(at(p, q)) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2 * at(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (std::size_t k = 0; k < N; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(N);
    for (std::size_t i = 0; i < N; ++i) ev[i] = at(i, i);
    std::sort(ev.begin(), ev.end());
    std::vector<double> out;
    for (std::size_t i = 0; i < N; i += 2) out.push_back(0.5 * (ev[i] + ev[i + 1]));
    return out;
}

inline double trace_norm_hermitian(const ComplexMatrix& h) {
    double s = 0;
    for (double x : hermitian_eigenvalues(h)) s += std::abs(x);
    return s;
}

inline double largest_eigenvalue(const ComplexMatrix& h) { return hermitian_eigenvalues(h).back(); }

inline double operator_norm(const ComplexMatrix& a) { return std::sqrt(std::max(0.0, largest_eigenvalue(mul(dagger(a), a)))); }

// Tr over the second factor of an (a*b) x (a*b) matrix.
inline ComplexMatrix trace_second(const ComplexMatrix& m, std::size_t a, std::size_t b) {
    ComplexMatrix out(a, a);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < a; ++j)
            for (std::size_t k = 0; k < b; ++k) out(i, j) += m(i * b + k, j * b + k);
    return out;
}

inline ComplexMatrix trace_first(const ComplexMatrix& m, std::size_t a, std::size_t b) {
    ComplexMatrix out(b, b);
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j)
            for (std::size_t k = 0; k < a; ++k) out(i, j) += m(k * b + i, k * b + j);
    return out;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

inline ComplexMatrix channel(const qbc::KrausFamily& fam, const ComplexMatrix& rho) {
    ComplexMatrix out(fam.dim_out(), fam.dim_out());
    for (const auto& e : fam.ops()) {
        const auto t = mul(mul(e, rho), dagger(e));
        for (std::size_t k = 0; k < out.size(); ++k) out.entries()[k] += t.entries()[k];
    }
    return out;
}

inline ComplexMatrix choi(const qbc::KrausFamily& fam) {
    const std::size_t din = fam.dim_in(), dout = fam.dim_out();
    ComplexMatrix j(din * dout, din * dout);
    for (std::size_t k = 0; k < din; ++k)
        for (std::size_t l = 0; l < din; ++l) {
            ComplexMatrix e(din, din);
            e(k, l) = 1.0;
            const auto out = channel(fam, e);
            for (std::size_t r = 0; r < dout; ++r)
                for (std::size_t c = 0; c < dout; ++c) j(k * dout + r, l * dout + c) = out(r, c);
        }
    return j;
}

// Term-by-term evaluation of
//   sum_J |<phi| (sum_L V_JL E0_L)^dagger E1_J |phi>|^2 / ||E1_J phi||^2.
inline double cheat_prob(const qbc::KrausFamily& bit0, const qbc::KrausFamily& bit1, const ComplexMatrix& v,
                         std::span<const cplx> phi) {
    const std::size_t m = bit0.cardinality(), din = bit0.dim_in(), dout = bit0.dim_out();
    double total = 0;
    for (std::size_t J = 0; J < m; ++J) {
        std::vector<cplx> a(dout), b(dout);
        for (std::size_t r = 0; r < dout; ++r)
            for (std::size_t c = 0; c < din; ++c) {
                b[r] += bit1[J](r, c) * phi[c];
                for (std::size_t L = 0; L < m; ++L) a[r] += v(J, L) * bit0[L](r, c) * phi[c];
            }
        double nb = 0;
        cplx overlap{};
        for (std::size_t r = 0; r < dout; ++r) {
            nb += std::norm(b[r]);
            overlap += std::conj(a[r]) * b[r];
        }
        if (nb > 1e-14) total += std::norm(overlap) / nb;
    }
    return total;
}

// || sum_J (E0_J(V) - E1_J)^dagger (E0_J(V) - E1_J) || computed entrywise.
inline double kraus_gap(const qbc::KrausFamily& bit0, const qbc::KrausFamily& bit1, const ComplexMatrix& v) {
    const std::size_t m = bit0.cardinality(), din = bit0.dim_in(), dout = bit0.dim_out();
    ComplexMatrix sum(din, din);
    for (std::size_t J = 0; J < m; ++J) {
        ComplexMatrix d(dout, din);
        for (std::size_t r = 0; r < dout; ++r)
            for (std::size_t c = 0; c < din; ++c) {
                cplx s = -bit1[J](r, c);
                for (std::size_t L = 0; L < m; ++L) s += v(J, L) * bit0[L](r, c);
                d(r, c) = s;
            }
        const auto dd = mul(dagger(d), d);
        for (std::size_t k = 0; k < sum.size(); ++k) sum.entries()[k] += dd.entries()[k];
    }
    return largest_eigenvalue(sum);
}

}  // namespace oracle
