#include "qbc/bounds.hpp"
#include "qbc/kernels.hpp"
#include "unitary_search.hpp"

namespace qbc {

namespace {

constexpr std::uint64_t kGapStream = 0x6A;

void require_match(const ProtocolSpec& spec, const ComplexMatrix& v) {
    if (!v.is_square() || v.rows() != spec.cardinality())
        throw DimensionError("cheat unitary size differs from Kraus cardinality");
    if (spec.bit1.cardinality() != spec.cardinality() || spec.bit1.dim_in() != spec.dim_in() ||
        spec.bit1.dim_out() != spec.dim_out())
        throw DimensionError("bit families have mismatched shapes");
}

std::vector<ComplexMatrix> differences(const ProtocolSpec& spec, const ComplexMatrix& v) {
    const auto& kern = kernels::active();
    const std::size_t m = spec.cardinality();
    std::vector<ComplexMatrix> d;
    d.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        ComplexMatrix dj = -1.0 * spec.bit1[j];
        for (std::size_t l = 0; l < m; ++l) {
            const cplx c = v(j, l);
            if (c != cplx{}) kern.axpy(c, spec.bit0[l].entries().data(), dj.entries().data(), dj.size());
        }
        d.push_back(std::move(dj));
    }
    return d;
}

ComplexMatrix gram_sum(const std::vector<ComplexMatrix>& d, std::size_t dim_in) {
    ComplexMatrix s(dim_in, dim_in);
    for (const auto& dj : d) s += adjoint_times(dj, dj);
    return s;
}

}  // namespace

double kraus_gap(const ProtocolSpec& spec, const CheatUnitary& v) {
    require_match(spec, v.matrix());
    const auto eig = eigh(gram_sum(differences(spec, v.matrix()), spec.dim_in()));
    return std::max(eig.values.back(), 0.0);
}

std::pair<double, ComplexMatrix> kraus_gap_with_gradient(const ProtocolSpec& spec, const ComplexMatrix& v) {
    require_match(spec, v);
    const auto d = differences(spec, v);
    const auto eig = eigh(gram_sum(d, spec.dim_in()));
    const std::size_t n = spec.dim_in(), m = spec.cardinality();
    std::vector<cplx> u(n);
    for (std::size_t r = 0; r < n; ++r) u[r] = eig.vectors(r, n - 1);

    // r_{JL} = <D_J u, E0_L u>
    std::vector<std::vector<cplx>> w(m), y(m);
    for (std::size_t j = 0; j < m; ++j) {
        w[j] = matvec(d[j], u);
        y[j] = matvec(spec.bit0[j], u);
    }
    ComplexMatrix rt(m, m);  // transpose of r
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < m; ++l) rt(l, j) = inner(w[j], y[l]);
    ComplexMatrix q = rt * v;
    // gradient 2 herm(i q)
    ComplexMatrix g(m, m);
    const cplx i1{0.0, 1.0};
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) g(a, b) = i1 * q(a, b) + std::conj(i1 * q(b, a));
    return {std::max(eig.values.back(), 0.0), std::move(g)};
}

KrausGapSearch minimize_kraus_gap(const ProtocolSpec& spec, int restarts, std::uint64_t seed, double tol,
                                  int max_iterations) {
    const std::size_t m = spec.cardinality();
    restarts = std::max(1, restarts);
    detail::UnitarySearchOptions opt;
    opt.max_iterations = max_iterations;
    opt.grad_tol = tol;

    const detail::ValueFn value = [&](const ComplexMatrix& v) {
        return std::max(eigh(gram_sum(differences(spec, v), spec.dim_in())).values.back(), 0.0);
    };
    const detail::ValueGradFn value_grad = [&](const ComplexMatrix& v) { return kraus_gap_with_gradient(spec, v); };

    std::vector<detail::UnitarySearchResult> runs(static_cast<std::size_t>(restarts));
    for (std::size_t r = 0; r < runs.size(); ++r) {
        ComplexMatrix start = r == 0   ? ComplexMatrix::identity(m)
                              : r == 1 ? procrustes_alignment(spec).matrix()
                                       : random_unitary(m, derive_seed(seed, kGapStream, r));
        runs[r] = detail::unitary_line_search(std::move(start), value, value_grad, false, opt);
    }

    KrausGapSearch res;
    res.trace.seed = seed;
    res.trace.restarts = restarts;
    res.trace.max_iterations = max_iterations;
    res.trace.tol = tol;
    std::size_t best = 0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        res.trace.iterations += runs[r].iterations;
        if (runs[r].converged) ++res.trace.converged_restarts;
        if (runs[r].value < runs[best].value) best = r;
    }
    res.trace.best_restart = static_cast<int>(best);
    res.value = runs[best].value;
    res.v = CheatUnitary(runs[best].v);
    return res;
}

}  // namespace qbc
