#include "qbc/binding.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "qbc/kernels.hpp"
#include "qbc/parallel.hpp"
#include "unitary_search.hpp"

namespace qbc {

namespace {

constexpr std::uint64_t kInnerStream = 0x1A;
constexpr std::uint64_t kOuterStream = 0x0B;
constexpr std::uint64_t kWarmStream = 0x3C;
constexpr std::uint64_t kKernelStream = 0x4D;

// Per-phi quantities shared by the payoff and both gradients.
struct PayoffTerms {
    std::vector<std::vector<cplx>> a;  // E0_L phi
    std::vector<std::vector<cplx>> b;  // E1_J phi
    ComplexMatrix gram;                // gram(L, J) = <a_L, b_J>
    std::vector<cplx> overlap;         // s_J = sum_L conj(V_JL) gram(L, J)
    std::vector<double> weight;        // ||b_J||^2
    std::vector<bool> active;
    double value = 0.0;
};

const ProtocolSpec& oriented(const ProtocolSpec& spec, CheatDirection dir, std::optional<ProtocolSpec>& storage) {
    if (dir == CheatDirection::ZeroToOne) return spec;
    storage = spec.swapped();
    return *storage;
}

void check_inputs(const ProtocolSpec& spec, const ComplexMatrix& v, std::span<const cplx> phi) {
    if (phi.size() != spec.dim_in()) throw DimensionError("anonymous state dimension differs from dim_in");
    if (!v.is_square() || v.rows() != spec.cardinality())
        throw DimensionError("cheat unitary size differs from Kraus cardinality");
    if (spec.bit1.cardinality() != spec.cardinality()) throw DimensionError("bit families differ in cardinality");
}

PayoffTerms payoff_terms(const ProtocolSpec& spec, const ComplexMatrix& v, std::span<const cplx> phi) {
    const auto& kern = kernels::active();
    const std::size_t m = spec.cardinality();
    PayoffTerms t;
    t.a.reserve(m);
    t.b.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        t.a.push_back(matvec(spec.bit0[j], phi));
        t.b.push_back(matvec(spec.bit1[j], phi));
    }
    const std::size_t dout = spec.dim_out();
    t.gram = ComplexMatrix(m, m);
    for (std::size_t l = 0; l < m; ++l)
        for (std::size_t j = 0; j < m; ++j) t.gram(l, j) = kern.dotc(t.a[l].data(), t.b[j].data(), dout);
    t.overlap.assign(m, cplx{});
    t.weight.assign(m, 0.0);
    t.active.assign(m, false);
    for (std::size_t j = 0; j < m; ++j) {
        t.weight[j] = kern.norm2(t.b[j].data(), dout);
        if (t.weight[j] <= kZeroOutcomeThreshold) continue;
        t.active[j] = true;
        cplx s{};
        for (std::size_t l = 0; l < m; ++l) s += std::conj(v(j, l)) * t.gram(l, j);
        t.overlap[j] = s;
        t.value += std::norm(s) / t.weight[j];
    }
    return t;
}

double payoff(const ProtocolSpec& spec, const ComplexMatrix& v, std::span<const cplx> phi) {
    return payoff_terms(spec, v, phi).value;
}

// Real gradient 2 dP/d(conj phi), projected onto the tangent space of the sphere.
std::vector<cplx> state_gradient(const ProtocolSpec& spec, const ComplexMatrix& v, std::span<const cplx> phi,
                                 const PayoffTerms& t) {
    const auto& kern = kernels::active();
    const std::size_t m = spec.cardinality(), din = spec.dim_in(), dout = spec.dim_out();
    std::vector<cplx> grad(din);
    std::vector<cplx> fphi(dout);
    for (std::size_t j = 0; j < m; ++j) {
        if (!t.active[j]) continue;
        const double n = t.weight[j];
        const cplx s = t.overlap[j];
        // F_J phi = sum_L V_JL a_L
        std::fill(fphi.begin(), fphi.end(), cplx{});
        for (std::size_t l = 0; l < m; ++l)
            if (v(j, l) != cplx{}) kern.axpy(v(j, l), t.a[l].data(), fphi.data(), dout);
        // A_J phi = F_J^dagger b_J = sum_L conj(V_JL) E0_L^dagger b_J
        std::vector<cplx> a_phi(din);
        for (std::size_t l = 0; l < m; ++l) {
            if (v(j, l) == cplx{}) continue;
            const auto tmp = adjoint_matvec(spec.bit0[l], t.b[j]);
            kern.axpy(std::conj(v(j, l)), tmp.data(), a_phi.data(), din);
        }
        const auto ad_phi = adjoint_matvec(spec.bit1[j], fphi);   // A_J^dagger phi
        const auto n_phi = adjoint_matvec(spec.bit1[j], t.b[j]);  // N_J phi
        const double inv_n = 1.0 / n;
        kern.axpy(2.0 * std::conj(s) * inv_n, a_phi.data(), grad.data(), din);
        kern.axpy(2.0 * s * inv_n, ad_phi.data(), grad.data(), din);
        kern.axpy(-2.0 * std::norm(s) * inv_n * inv_n, n_phi.data(), grad.data(), din);
    }
    const double radial = kern.dotc(phi.data(), grad.data(), din).real();
    kern.axpy(-radial, phi.data(), grad.data(), din);
    return grad;
}

ComplexMatrix unitary_gradient(const ProtocolSpec& spec, const ComplexMatrix& v, const PayoffTerms& t) {
    const std::size_t m = spec.cardinality();
    // mt(L, J) = s_J conj(gram(L, J)) / n_J, the transpose of M_JL
    ComplexMatrix mt(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        if (!t.active[j]) continue;
        for (std::size_t l = 0; l < m; ++l) mt(l, j) = t.overlap[j] * std::conj(t.gram(l, j)) / t.weight[j];
    }
    const ComplexMatrix q = mt * v;
    ComplexMatrix g(m, m);
    const cplx i1{0.0, 1.0};
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) g(a, b) = i1 * q(a, b) + std::conj(i1 * q(b, a));
    return g;
}

struct DescentOutcome {
    double value = 1.0;
    std::vector<cplx> phi;
    int iterations = 0;
    bool converged = false;
};

// With `proj` set, the search stays on the unit sphere of that subspace.
DescentOutcome descend(const ProtocolSpec& spec, const ComplexMatrix& v, std::vector<cplx> phi, double tol,
                       int max_iterations, const ComplexMatrix* proj = nullptr) {
    const auto& kern = kernels::active();
    const std::size_t din = phi.size();
    DescentOutcome out;
    auto terms = payoff_terms(spec, v, phi);
    double f = terms.value;
    double step = 0.25;
    for (; out.iterations < max_iterations; ++out.iterations) {
        auto g = state_gradient(spec, v, phi, terms);
        if (proj) {
            g = matvec(*proj, g);
            const double radial = kern.dotc(phi.data(), g.data(), din).real();
            kern.axpy(-radial, phi.data(), g.data(), din);
        }
        const double gn2 = kern.norm2(g.data(), din);
        if (std::sqrt(gn2) <= tol) {
            out.converged = true;
            break;
        }
        bool accepted = false;
        std::vector<cplx> trial(din);
        for (double t = step; t >= 1e-14; t *= 0.5) {
            trial = phi;
            kern.axpy(-t, g.data(), trial.data(), din);
            if (proj) trial = matvec(*proj, trial);
            const double nt = std::sqrt(kern.norm2(trial.data(), din));
            kern.scal(1.0 / nt, trial.data(), din);
            auto tt = payoff_terms(spec, v, trial);
            if (f - tt.value >= 1e-4 * t * gn2) {
                accepted = true;
                phi = std::move(trial);
                terms = std::move(tt);
                f = terms.value;
                step = std::min(2.0 * t, 4.0);
                break;
            }
        }
        if (!accepted) break;
    }
    out.value = f;
    out.phi = std::move(phi);
    return out;
}

// Projectors onto ker(E1_J) for the rank-deficient bit-1 operators, without
// duplicates. On these subspaces outcome J is impossible for the receiver, the
// J term of the payoff drops to zero, and the payoff can sit strictly below
// its limit from outside.
std::vector<ComplexMatrix> outcome_kernels(const ProtocolSpec& spec) {
    std::vector<ComplexMatrix> out;
    const std::size_t din = spec.dim_in();
    for (const auto& e : spec.bit1.ops()) {
        const auto eig = eigh(adjoint_times(e, e));
        const double cut = 1e-12 * std::max(1.0, eig.values.back());
        ComplexMatrix p(din, din);
        std::size_t rank_null = 0;
        for (std::size_t k = 0; k < din; ++k) {
            if (eig.values[k] > cut) continue;
            ++rank_null;
            for (std::size_t r = 0; r < din; ++r)
                for (std::size_t c = 0; c < din; ++c) p(r, c) += eig.vectors(r, k) * std::conj(eig.vectors(c, k));
        }
        if (rank_null == 0 || rank_null == din) continue;
        const bool seen = std::any_of(out.begin(), out.end(), [&](const ComplexMatrix& q) { return (q - p).max_abs() < 1e-10; });
        if (!seen) out.push_back(std::move(p));
    }
    return out;
}

StateSearchResult search_states(const ProtocolSpec& spec, const ComplexMatrix& v, const StateSearchOptions& opt,
                                std::span<const StateVector> warm, std::span<const ComplexMatrix> kernel_projectors = {}) {
    const std::size_t din = spec.dim_in();
    const std::size_t n_random = static_cast<std::size_t>(std::max(0, opt.restarts));
    const std::size_t total = warm.size() + n_random;
    std::vector<DescentOutcome> outcomes(std::max<std::size_t>(total, 1));
    auto start_of = [&](std::size_t r) {
        if (r < warm.size()) return std::vector<cplx>(warm[r].amplitudes().begin(), warm[r].amplitudes().end());
        const auto rs = random_state(din, derive_seed(opt.seed, kInnerStream, r - warm.size()));
        return std::vector<cplx>(rs.amplitudes().begin(), rs.amplitudes().end());
    };
    if (total == 0) {
        outcomes[0] = descend(spec, v, start_of(warm.size()), opt.tol, opt.max_iterations);
    } else {
        parallel_for(total, [&](std::size_t r) { outcomes[r] = descend(spec, v, start_of(r), opt.tol, opt.max_iterations); });
    }
    StateSearchResult res;
    res.trace.seed = opt.seed;
    res.trace.restarts = static_cast<int>(outcomes.size());
    res.trace.max_iterations = opt.max_iterations;
    res.trace.tol = opt.tol;
    std::size_t best = 0;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        res.trace.iterations += outcomes[r].iterations;
        if (outcomes[r].converged) ++res.trace.converged_restarts;
        if (outcomes[r].value < outcomes[best].value) best = r;
    }
    // Second stage: descend inside each outcome kernel from the projection of
    // the best state found so far.
    if (!kernel_projectors.empty()) {
        const auto& anchor = outcomes[best].phi;
        std::vector<DescentOutcome> sub(kernel_projectors.size());
        parallel_for(sub.size(), [&](std::size_t k) {
            const auto& p = kernel_projectors[k];
            auto start = matvec(p, anchor);
            if (norm(start) < 1e-6) {
                const auto rs = random_state(din, derive_seed(opt.seed, kKernelStream, k));
                start = matvec(p, rs.amplitudes());
            }
            const double n = norm(start);
            for (auto& z : start) z /= n;
            sub[k] = descend(spec, v, std::move(start), opt.tol, opt.max_iterations, &p);
        });
        for (auto& o : sub) {
            res.trace.iterations += o.iterations;
            if (o.value < outcomes[best].value) {
                outcomes.push_back(std::move(o));
                best = outcomes.size() - 1;
            }
        }
    }
    res.trace.best_restart = static_cast<int>(best);
    res.value = outcomes[best].value;
    res.state = StateVector(outcomes[best].phi).phase_fixed();
    res.trace.note = "value is achieved; the true minimum is at most this";
    return res;
}

}  // namespace

const char* to_string(CheatDirection d) { return d == CheatDirection::ZeroToOne ? "01" : "10"; }

double alice_cheat_prob(const ProtocolSpec& spec, const CheatUnitary& v, const StateVector& phi, CheatDirection dir) {
    std::optional<ProtocolSpec> storage;
    const auto& s = oriented(spec, dir, storage);
    check_inputs(s, v.matrix(), phi.amplitudes());
    return payoff(s, v.matrix(), phi.amplitudes());
}

std::vector<cplx> cheat_prob_state_gradient(const ProtocolSpec& spec, const ComplexMatrix& v, const StateVector& phi,
                                            CheatDirection dir) {
    std::optional<ProtocolSpec> storage;
    const auto& s = oriented(spec, dir, storage);
    check_inputs(s, v, phi.amplitudes());
    return state_gradient(s, v, phi.amplitudes(), payoff_terms(s, v, phi.amplitudes()));
}

ComplexMatrix cheat_prob_unitary_gradient(const ProtocolSpec& spec, const ComplexMatrix& v, const StateVector& phi,
                                          CheatDirection dir) {
    std::optional<ProtocolSpec> storage;
    const auto& s = oriented(spec, dir, storage);
    check_inputs(s, v, phi.amplitudes());
    return unitary_gradient(s, v, payoff_terms(s, v, phi.amplitudes()));
}

StateSearchResult min_over_states(const ProtocolSpec& spec, const CheatUnitary& v, const StateSearchOptions& opt,
                                  std::span<const StateVector> warm, CheatDirection dir) {
    std::optional<ProtocolSpec> storage;
    const auto& s = oriented(spec, dir, storage);
    check_inputs(s, v.matrix(), std::vector<cplx>(s.dim_in()));
    for (const auto& w : warm)
        if (w.dim() != s.dim_in()) throw DimensionError("warm-start state dimension differs from dim_in");
    const auto kernels = outcome_kernels(s);
    return search_states(s, v.matrix(), opt, warm, kernels);
}

BindingReport minimax_cheat(const ProtocolSpec& spec, const BindingOptions& opt, CheatDirection dir) {
    std::optional<ProtocolSpec> storage;
    const auto& s = oriented(spec, dir, storage);
    const std::size_t m = s.cardinality();
    check_inputs(s, ComplexMatrix::identity(m), std::vector<cplx>(s.dim_in()));
    const int outer = std::max(1, opt.outer_restarts);
    constexpr double kSaturated = 1.0 - 1e-12;

    StateSearchOptions full{opt.inner_restarts, opt.seed, opt.tol, opt.inner_iterations};
    const auto kernels = outcome_kernels(s);

    struct RestartOutcome {
        double value = -1.0;
        ComplexMatrix v;
        StateVector worst;
        int steps = 0;
    };

    auto run_restart = [&](std::size_t r) {
        ComplexMatrix start = r == 0   ? procrustes_alignment(s).matrix()
                              : r == 1 ? ComplexMatrix::identity(m)
                                       : random_unitary(m, derive_seed(opt.seed, kOuterStream, r));
        // States that were worst somewhere along the path seed later inner searches.
        std::deque<StateVector> active;
        int evaluations = 0;
        auto inner = [&](const ComplexMatrix& v) {
            StateSearchOptions warm_opt{2, derive_seed(opt.seed, kWarmStream, r * 1000003u + evaluations++), opt.tol,
                                        opt.inner_iterations};
            std::vector<StateVector> warm(active.begin(), active.end());
            if (active.empty()) return search_states(s, v, full, warm, kernels);
            return search_states(s, v, warm_opt, warm);
        };
        const detail::ValueFn value = [&](const ComplexMatrix& v) { return inner(v).value; };
        const detail::ValueGradFn value_grad = [&](const ComplexMatrix& v) {
            auto res = inner(v);
            active.push_back(res.state);
            if (active.size() > 6) active.pop_front();
            return std::pair{res.value, unitary_gradient(s, v, payoff_terms(s, v, res.state.amplitudes()))};
        };
        detail::UnitarySearchOptions uopt;
        uopt.max_iterations = opt.outer_iterations;
        uopt.grad_tol = opt.tol;
        auto path = detail::unitary_line_search(std::move(start), value, value_grad, true, uopt);

        // Final evaluation with the full inner budget plus the collected states.
        std::vector<StateVector> warm(active.begin(), active.end());
        auto final_inner = search_states(s, path.v, full, warm, kernels);
        return RestartOutcome{final_inner.value, std::move(path.v), std::move(final_inner.state), path.iterations};
    };

    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(outer));
    const std::size_t batch = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    std::size_t ran = 0;
    bool saturated = false;
    while (ran < outcomes.size() && !saturated) {
        std::size_t n = std::min(batch, outcomes.size() - ran);
        parallel_for(n, [&](std::size_t k) { outcomes[ran + k] = run_restart(ran + k); });
        // Restarts past the first saturated one are discarded so the report
        // does not depend on the batch size.
        for (std::size_t k = 0; k < n && !saturated; ++k) {
            saturated = outcomes[ran + k].value >= kSaturated;
            if (saturated) n = k + 1;
        }
        ran += n;
    }

    // Lowest saturated restart if any, otherwise the maximum (lowest index on ties).
    std::size_t best = 0;
    bool found_saturated = false;
    for (std::size_t r = 0; r < ran; ++r) {
        if (outcomes[r].value >= kSaturated) {
            best = r;
            found_saturated = true;
            break;
        }
    }
    if (!found_saturated)
        for (std::size_t r = 1; r < ran; ++r)
            if (outcomes[r].value > outcomes[best].value) best = r;

    BindingReport rep;
    rep.direction = dir;
    rep.minimax_estimate = std::clamp(outcomes[best].value, 0.0, 1.0);
    rep.best_v = CheatUnitary(outcomes[best].v);
    rep.worst_state = outcomes[best].worst;
    rep.payoff_at_saddle = payoff(s, rep.best_v.matrix(), rep.worst_state.amplitudes());
    auto& tr = rep.solver_trace;
    tr.seed = opt.seed;
    tr.outer_restarts = outer;
    tr.outer_restarts_run = static_cast<int>(ran);
    tr.outer_iterations = opt.outer_iterations;
    tr.inner_restarts = opt.inner_restarts;
    tr.inner_iterations = opt.inner_iterations;
    tr.tol = opt.tol;
    tr.best_restart = static_cast<int>(best);
    for (std::size_t r = 0; r < ran; ++r) {
        tr.total_outer_steps += outcomes[r].steps;
        tr.restart_values.push_back(outcomes[r].value);
    }
    tr.note = "max-min estimate; each inner minimum is an achieved value, so the estimate may exceed the true "
              "max-min by the inner solver's gap";
    if (saturated && ran < outcomes.size()) tr.note += "; stopped early at payoff 1";
    return rep;
}

std::vector<std::vector<double>> payoff_matrix_sample(const ProtocolSpec& spec, std::span<const CheatUnitary> vs,
                                                      std::span<const StateVector> phis, CheatDirection dir) {
    std::optional<ProtocolSpec> storage;
    const auto& s = oriented(spec, dir, storage);
    std::vector<std::vector<double>> out;
    out.reserve(vs.size());
    for (const auto& v : vs) {
        std::vector<double> row;
        row.reserve(phis.size());
        for (const auto& phi : phis) {
            check_inputs(s, v.matrix(), phi.amplitudes());
            row.push_back(payoff(s, v.matrix(), phi.amplitudes()));
        }
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace qbc
