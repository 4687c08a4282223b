#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qbc/kernels.hpp"
#include "qbc/linalg.hpp"

namespace qbc {

namespace {

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Householder reduction of a Hermitian matrix to tridiagonal form.
// On exit `a` is tridiagonal and `qh` holds Q^dagger with a_in = Q a_out Q^dagger.
void tridiagonalize(ComplexMatrix& a, ComplexMatrix& qh) {
    const auto& kern = kernels::active();
    const std::size_t n = a.rows();
    std::vector<cplx> v(n), z(n), p(n), w(n), cv(n), cw(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double tail2 = 0.0;
        for (std::size_t i = k + 2; i < n; ++i) tail2 += std::norm(a(i, k));
        if (tail2 == 0.0) continue;
        const cplx x0 = a(k + 1, k);
        const double xnorm = std::sqrt(tail2 + std::norm(x0));
        const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0, 0.0};
        const cplx alpha = -phase * xnorm;

        std::fill(v.begin(), v.end(), cplx{});
        v[k + 1] = x0 - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
        const double tau = 2.0 / kern.norm2(v.data() + k + 1, n - k - 1);

        // p = tau * A v, using A v = conj(v^dagger A) for Hermitian A
        std::fill(z.begin(), z.end(), cplx{});
        for (std::size_t i = k + 1; i < n; ++i) kern.axpy(std::conj(v[i]), a.row(i).data(), z.data(), n);
        for (std::size_t j = 0; j < n; ++j) p[j] = tau * std::conj(z[j]);
        const double vp = kern.dotc(v.data(), p.data(), n).real();
        const double half = 0.5 * tau * vp;
        for (std::size_t j = 0; j < n; ++j) {
            w[j] = p[j] - half * v[j];
            cw[j] = std::conj(w[j]);
            cv[j] = std::conj(v[j]);
        }
        // A <- A - v w^dagger - w v^dagger
        for (std::size_t i = k; i < n; ++i) {
            cplx* row = a.row(i).data();
            if (v[i] != cplx{}) kern.axpy(-v[i], cw.data(), row, n);
            if (w[i] != cplx{}) kern.axpy(-w[i], cv.data(), row, n);
        }
        a(k + 1, k) = alpha;
        a(k, k + 1) = std::conj(alpha);
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = a(k, i) = cplx{};
        // Q^dagger <- H Q^dagger
        std::fill(z.begin(), z.end(), cplx{});
        for (std::size_t i = k + 1; i < n; ++i) kern.axpy(std::conj(v[i]), qh.row(i).data(), z.data(), n);
        for (std::size_t i = k + 1; i < n; ++i) kern.axpy(-tau * v[i], z.data(), qh.row(i).data(), n);
    }
}

// Implicit QL with Wilkinson-style shifts on a real symmetric tridiagonal
// matrix. Rotations are applied to the rows of `zt`.
int tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& zt) {
    const auto& kern = kernels::active();
    const int n = static_cast<int>(d.size());
    const int max_iter = 60;
    const double eps = std::numeric_limits<double>::epsilon();
    int total = 0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == max_iter) {
                    throw NumericalError("eigh: QL iteration did not converge after " + std::to_string(total) +
                                         " iterations (index " + std::to_string(l) + ")");
                }
                ++total;
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + sign_of(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    kern.rot(c, s, zt.row(i).data(), zt.row(i + 1).data(), zt.cols());
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    return total;
}

}  // namespace

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
    if (!m.is_square()) throw DimensionError("hermitian_part: matrix must be square");
    ComplexMatrix h(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return h;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (!m.is_square()) return false;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    return true;
}

HermitianEigen eigh(const ComplexMatrix& m) {
    if (!m.is_square()) throw DimensionError("eigh: matrix must be square");
    if (!m.all_finite()) throw NumericalError("eigh: non-finite entries");
    const std::size_t n = m.rows();
    ComplexMatrix a = hermitian_part(m);
    ComplexMatrix qh = ComplexMatrix::identity(n);
    tridiagonalize(a, qh);

    // Diagonal phases make the subdiagonal real and nonnegative.
    std::vector<double> d(n), e(n, 0.0);
    std::vector<cplx> phase(n, cplx{1.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) d[k] = a(k, k).real();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const cplx sub = a(k + 1, k);
        const double mag = std::abs(sub);
        e[k] = mag;
        phase[k + 1] = mag > 0.0 ? phase[k] * (sub / mag) : phase[k];
    }

    // Rows of zt are the columns of Q D.
    ComplexMatrix zt(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < n; ++r) zt(j, r) = std::conj(qh(j, r)) * phase[j];

    HermitianEigen out;
    out.iterations = tridiagonal_ql(d, e, zt);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = d[order[k]];
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = zt(order[k], r);
    }
    return out;
}

}  // namespace qbc
