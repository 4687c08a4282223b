#include "qbc/concealment.hpp"

#include <algorithm>
#include <cmath>

#include "qbc/bounds.hpp"
#include "qbc/kernels.hpp"
#include "qbc/parallel.hpp"

namespace qbc {

namespace {

constexpr std::uint64_t kConcealStream = 0xC0;

std::size_t infer_ref_dim(const ProtocolSpec& spec, const StateVector& input) {
    if (input.dim() % spec.dim_in() != 0)
        throw DimensionError("input dimension " + std::to_string(input.dim()) + " is not a multiple of dim_in " +
                             std::to_string(spec.dim_in()));
    return input.dim() / spec.dim_in();
}

// Extended Kraus operators E_J (x) I_R for both bits.
struct ExtendedPair {
    std::vector<ComplexMatrix> bit0;
    std::vector<ComplexMatrix> bit1;
};

ExtendedPair extend(const ProtocolSpec& spec, std::size_t ref_dim) {
    ExtendedPair p;
    const auto id = ComplexMatrix::identity(ref_dim);
    for (const auto& e : spec.bit0.ops()) p.bit0.push_back(tensor_product(e, id));
    for (const auto& e : spec.bit1.ops()) p.bit1.push_back(tensor_product(e, id));
    return p;
}

// ((M1 - M0) (x) id)(|psi><psi|) = sum_J y1_J y1_J^dagger - y0_J y0_J^dagger.
ComplexMatrix difference_output(const ExtendedPair& ext, std::span<const cplx> psi) {
    const std::size_t n = ext.bit0.front().rows();
    ComplexMatrix x(n, n);
    auto accumulate = [&](const std::vector<ComplexMatrix>& ops, double sign) {
        for (const auto& f : ops) {
            const auto y = matvec(f, psi);
            for (std::size_t r = 0; r < n; ++r) {
                if (y[r] == cplx{}) continue;
                const cplx yr = sign * y[r];
                for (std::size_t c = 0; c < n; ++c) x(r, c) += yr * std::conj(y[c]);
            }
        }
    };
    accumulate(ext.bit1, 1.0);
    accumulate(ext.bit0, -1.0);
    return x;
}

// Adjoint of the difference map applied to s.
ComplexMatrix adjoint_difference(const ExtendedPair& ext, const ComplexMatrix& s) {
    const std::size_t n = ext.bit0.front().cols();
    ComplexMatrix g(n, n);
    for (const auto& f : ext.bit1) g += adjoint_times(f, s * f);
    for (const auto& f : ext.bit0) g -= adjoint_times(f, s * f);
    return g;
}

struct AscentOutcome {
    double value = 0.0;
    std::vector<cplx> psi;
    int iterations = 0;
    bool converged = false;
};

// Each step moves to the top eigenvector of the adjoint map evaluated at the
// sign of the current output, which maximizes the linearized objective; the
// trace norm never decreases along the way.
AscentOutcome ascend(const ExtendedPair& ext, std::vector<cplx> psi, double tol, int max_iterations) {
    const auto& kern = kernels::active();
    AscentOutcome out;
    for (;; ++out.iterations) {
        const auto eig = eigh(difference_output(ext, psi));
        const double scale = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
        const std::size_t n = eig.values.size();
        double value = 0.0;
        ComplexMatrix signed_vecs = eig.vectors;
        for (std::size_t k = 0; k < n; ++k) {
            value += std::abs(eig.values[k]);
            const double sg = std::abs(eig.values[k]) <= 1e-14 * scale ? 0.0 : (eig.values[k] > 0 ? 1.0 : -1.0);
            for (std::size_t r = 0; r < n; ++r) signed_vecs(r, k) *= sg;
        }
        out.value = value;
        out.psi = psi;
        if (out.iterations >= max_iterations) break;

        const ComplexMatrix sign_op = times_adjoint(signed_vecs, eig.vectors);
        const ComplexMatrix g = adjoint_difference(ext, sign_op);
        // tangent gradient 2 (G psi - <psi|G|psi> psi)
        auto gpsi = matvec(g, psi);
        const cplx rayleigh = kern.dotc(psi.data(), gpsi.data(), psi.size());
        kern.axpy(-rayleigh, psi.data(), gpsi.data(), psi.size());
        const double grad = 2.0 * std::sqrt(kern.norm2(gpsi.data(), gpsi.size()));
        if (grad <= tol) {
            out.converged = true;
            break;
        }
        const auto geig = eigh(g);
        std::vector<cplx> next(psi.size());
        for (std::size_t r = 0; r < next.size(); ++r) next[r] = geig.vectors(r, next.size() - 1);
        if (geig.values.back() <= rayleigh.real() + 1e-15 * std::max(1.0, value)) {
            // the linearization offers no further increase
            out.converged = true;
            break;
        }
        psi = std::move(next);
    }
    return out;
}

std::vector<cplx> maximally_entangled(std::size_t din, std::size_t ref) {
    std::vector<cplx> v(din * ref);
    const std::size_t k = std::min(din, ref);
    for (std::size_t i = 0; i < k; ++i) v[i * ref + i] = 1.0 / std::sqrt(static_cast<double>(k));
    return v;
}

}  // namespace

double extended_output_distance(const ProtocolSpec& spec, const StateVector& input) {
    const std::size_t ref = infer_ref_dim(spec, input);
    const auto ext = extend(spec, ref);
    return trace_norm(difference_output(ext, input.amplitudes()));
}

double helstrom_prob(const ProtocolSpec& spec, const StateVector& input) {
    return 0.5 + 0.25 * extended_output_distance(spec, input);
}

CbLowerResult cb_lower_bound(const ProtocolSpec& spec, const ConcealmentOptions& opt) {
    const std::size_t din = spec.dim_in();
    const std::size_t ref = opt.ref_dim.value_or(din);
    if (ref == 0) throw DimensionError("reference dimension must be positive");
    const auto ext = extend(spec, ref);
    const int restarts = std::max(1, opt.restarts);

    std::vector<AscentOutcome> outcomes(static_cast<std::size_t>(restarts));
    parallel_for(outcomes.size(), [&](std::size_t r) {
        std::vector<cplx> start = maximally_entangled(din, ref);
        if (r > 0) {
            const auto rs = random_state(din * ref, derive_seed(opt.seed, kConcealStream, r));
            start.assign(rs.amplitudes().begin(), rs.amplitudes().end());
        }
        outcomes[r] = ascend(ext, std::move(start), opt.tol, opt.max_iterations);
    });

    CbLowerResult res;
    res.trace.seed = opt.seed;
    res.trace.restarts = restarts;
    res.trace.max_iterations = opt.max_iterations;
    res.trace.tol = opt.tol;
    std::size_t best = 0;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        res.trace.iterations += outcomes[r].iterations;
        if (outcomes[r].converged) ++res.trace.converged_restarts;
        if (outcomes[r].value > outcomes[best].value) best = r;
    }
    res.trace.best_restart = static_cast<int>(best);
    res.value = std::min(outcomes[best].value, 2.0);
    res.witness = StateVector(outcomes[best].psi);
    if (res.trace.converged_restarts < restarts)
        res.trace.note = "some restarts stopped at the iteration budget";
    return res;
}

CbUpperResult cb_upper_bound(const ProtocolSpec& spec, const std::optional<CheatUnitary>& v) {
    CbUpperResult res;
    res.choi_route = trace_norm(choi(spec.bit1) - choi(spec.bit0));
    double gap = std::min(kraus_gap(spec, CheatUnitary::identity(spec.cardinality())),
                          kraus_gap(spec, procrustes_alignment(spec)));
    if (v) gap = std::min(gap, kraus_gap(spec, *v));
    res.kraus_route = 2.0 * std::sqrt(gap);
    res.value = std::min({2.0, res.choi_route, res.kraus_route});
    return res;
}

ConcealmentReport analyze_concealment(const ProtocolSpec& spec, const ConcealmentOptions& opt) {
    auto lower = cb_lower_bound(spec, opt);
    const auto upper = cb_upper_bound(spec);
    if (lower.value > upper.value + 1e-8) {
        throw BracketInversion("concealment bracket inverted: lower " + std::to_string(lower.value) + " > upper " +
                               std::to_string(upper.value));
    }
    ConcealmentReport rep;
    rep.cb_upper = upper.value;
    rep.cb_lower = std::min(lower.value, upper.value);
    rep.bob_cheat_lower = 0.5 + 0.25 * rep.cb_lower;
    rep.bob_cheat_upper = 0.5 + 0.25 * rep.cb_upper;
    rep.witness_state = std::move(lower.witness);
    rep.ref_dim = opt.ref_dim.value_or(spec.dim_in());
    rep.upper_choi = upper.choi_route;
    rep.upper_kraus = upper.kraus_route;
    rep.solver_trace = std::move(lower.trace);
    return rep;
}

}  // namespace qbc
