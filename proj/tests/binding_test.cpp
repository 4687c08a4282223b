#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "qbc/binding.hpp"
#include "qbc/linalg.hpp"

namespace {

using namespace qbc;

ProtocolSpec zx_dephasing() {
    return {"Z vs X",
            KrausFamily(2, 2, {ComplexMatrix{{1, 0}, {0, 0}}, ComplexMatrix{{0, 0}, {0, 1}}}),
            KrausFamily(2, 2, {ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}}, ComplexMatrix{{0.5, -0.5}, {-0.5, 0.5}}}),
            std::nullopt};
}

ProtocolSpec random_spec(std::mt19937_64& rng, std::size_t din, std::size_t dout, std::size_t m) {
    m = oracle::feasible_m(din, dout, m);
    return {"random", oracle::random_family(rng, din, dout, m), oracle::random_family(rng, din, dout, m), std::nullopt};
}

ProtocolSpec perfectly_concealing(std::mt19937_64& rng, std::size_t m, ComplexMatrix* w_out = nullptr) {
    const auto bit0 = oracle::random_family(rng, 2, 2, m);
    const auto w = oracle::random_unitary(rng, m);
    if (w_out) *w_out = w;
    return {"pc", bit0, apply_cheat_unitary(bit0, CheatUnitary(w)), std::nullopt};
}

StateVector bloch(double theta, double phi) {
    return StateVector({std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)});
}

TEST(AliceCheatProb, AnalyticCases) {
    std::mt19937_64 rng(60);
    const auto fam = oracle::random_family(rng, 3, 2, 3);
    const ProtocolSpec same{"same", fam, fam, std::nullopt};
    for (int k = 0; k < 10; ++k)
        EXPECT_NEAR(alice_cheat_prob(same, CheatUnitary::identity(3), random_state(3, k)), 1.0, 1e-12);

    EXPECT_NEAR(alice_cheat_prob(zx_dephasing(), CheatUnitary::identity(2), StateVector::basis(2, 0)), 0.5, 1e-15);
}

TEST(AliceCheatProb, MatchesTermByTermOracle) {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t din = 1 + trial % 3, dout = 1 + (trial / 3) % 3, m = 1 + (trial / 9) % 3;
        const auto spec = random_spec(rng, din, dout, m);
        const auto v = oracle::random_unitary(rng, spec.cardinality());
        const auto phi = oracle::random_vector(rng, din);
        const StateVector s(phi);
        const double p = alice_cheat_prob(spec, CheatUnitary(v), s);
        EXPECT_NEAR(p, oracle::cheat_prob(spec.bit0, spec.bit1, v, s.amplitudes()), 1e-12);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0 + 1e-12);
        const double q = alice_cheat_prob(spec, CheatUnitary(v), s, CheatDirection::OneToZero);
        EXPECT_NEAR(q, oracle::cheat_prob(spec.bit1, spec.bit0, v, s.amplitudes()), 1e-12);
    }
}

TEST(AliceCheatProb, ZeroProbabilityOutcomesContributeNothing) {
    // bit1 = Z dephasing; on |0> the outcome J = 1 has probability zero.
    const KrausFamily z(2, 2, {ComplexMatrix{{1, 0}, {0, 0}}, ComplexMatrix{{0, 0}, {0, 1}}});
    const ProtocolSpec spec{"", z, z, std::nullopt};
    const std::size_t swap_perm[] = {1, 0};
    ComplexMatrix swap(2, 2);
    for (std::size_t j = 0; j < 2; ++j) swap(j, swap_perm[j]) = 1.0;
    EXPECT_EQ(alice_cheat_prob(spec, CheatUnitary(swap), StateVector::basis(2, 0)), 0.0);
    EXPECT_TRUE(std::isfinite(alice_cheat_prob(spec, CheatUnitary::identity(2), StateVector::basis(2, 1))));
}

TEST(AliceCheatProb, PhaseInvariances) {
    std::mt19937_64 rng(62);
    for (int trial = 0; trial < 30; ++trial) {
        const auto spec = random_spec(rng, 2, 2, 3);
        const auto v = oracle::random_unitary(rng, 3);
        const auto phi = oracle::random_vector(rng, 2);
        const double base = alice_cheat_prob(spec, CheatUnitary(v), StateVector(phi));
        const cplx ph = std::polar(1.0, 0.37 * (trial + 1));
        std::vector<cplx> rotated;
        for (auto z : phi) rotated.push_back(ph * z);
        EXPECT_NEAR(alice_cheat_prob(spec, CheatUnitary(v), StateVector(rotated)), base, 1e-12);
        EXPECT_NEAR(alice_cheat_prob(spec, CheatUnitary(ph * v), StateVector(phi)), base, 1e-12);
    }
}

TEST(AliceCheatProb, PermutationEquivariance) {
    // Relabel bit0 by P (E'_L = E_{p(L)}) and use V' = V P^T, so that
    // E'_J(V') = E_J(V) and the payoff is unchanged.
    std::mt19937_64 rng(63);
    const std::size_t perm[] = {2, 0, 1};
    ComplexMatrix p(3, 3);
    for (std::size_t l = 0; l < 3; ++l) p(perm[l], l) = 1.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto spec = random_spec(rng, 2, 2, 3);
        std::vector<ComplexMatrix> relabeled;
        for (std::size_t l = 0; l < 3; ++l) relabeled.push_back(spec.bit0[perm[l]]);
        const ProtocolSpec moved{"", KrausFamily(2, 2, relabeled), spec.bit1, std::nullopt};
        const auto v = oracle::random_unitary(rng, 3);
        const auto phi = random_state(2, trial);
        EXPECT_NEAR(alice_cheat_prob(moved, CheatUnitary(v * p), phi), alice_cheat_prob(spec, CheatUnitary(v), phi), 1e-12);
    }
}

TEST(AliceCheatProb, RejectsBadInputs) {
    const auto spec = zx_dephasing();
    EXPECT_THROW(alice_cheat_prob(spec, CheatUnitary::identity(3), StateVector::basis(2, 0)), DimensionError);
    EXPECT_THROW(alice_cheat_prob(spec, CheatUnitary::identity(2), StateVector::basis(3, 0)), DimensionError);
}

TEST(Gradients, StateGradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(64);
    for (int trial = 0; trial < 20; ++trial) {
        const auto spec = random_spec(rng, 3, 2, 2);
        const auto v = oracle::random_unitary(rng, spec.cardinality());
        const StateVector phi(oracle::random_vector(rng, 3));
        const auto g = cheat_prob_state_gradient(spec, v, phi);
        const auto dir = oracle::random_vector(rng, 3);
        auto at = [&](double t) {
            std::vector<cplx> x(3);
            for (std::size_t k = 0; k < 3; ++k) x[k] = phi[k] + t * dir[k];
            return alice_cheat_prob(spec, CheatUnitary(v), StateVector(x));
        };
        const double h = 1e-6;
        const double fd = (at(h) - at(-h)) / (2 * h);
        double analytic = 0;
        // The gradient is tangent, so the radial part of dir does not matter.
        for (std::size_t k = 0; k < 3; ++k) analytic += (std::conj(g[k]) * dir[k]).real();
        EXPECT_NEAR(analytic, fd, 1e-6 * (1 + std::abs(fd)));
    }
}

TEST(Gradients, UnitaryGradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(65);
    for (int trial = 0; trial < 20; ++trial) {
        const auto spec = random_spec(rng, 2, 2, 3);
        const auto v = oracle::random_unitary(rng, 3);
        const auto phi = random_state(2, trial);
        const auto g = cheat_prob_unitary_gradient(spec, v, phi);
        EXPECT_TRUE(is_hermitian(g, 1e-12));
        const auto h = oracle::random_hermitian(rng, 3);
        auto at = [&](double t) {
            return alice_cheat_prob(spec, CheatUnitary(v * unitary_from_generator(cplx{t, 0} * h)), phi);
        };
        const double step = 1e-6;
        const double fd = (at(step) - at(-step)) / (2 * step);
        double analytic = 0;
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) analytic += (std::conj(g(a, b)) * h(a, b)).real();
        EXPECT_NEAR(analytic, fd, 1e-6 * (1 + std::abs(fd)));
    }
}

TEST(MinOverStates, IdenticalFamiliesGiveOne) {
    std::mt19937_64 rng(66);
    const auto fam = oracle::random_family(rng, 2, 2, 2);
    const auto r = min_over_states({"", fam, fam, std::nullopt}, CheatUnitary::identity(2));
    EXPECT_NEAR(r.value, 1.0, 1e-12);
}

double bloch_grid_min(const ProtocolSpec& spec, const ComplexMatrix& v) {
    double best = 2;
    for (int i = 0; i <= 180; ++i)
        for (int j = 0; j <= 360; ++j) {
            const auto s = bloch(std::numbers::pi * i / 180, 2 * std::numbers::pi * j / 360);
            best = std::min(best, oracle::cheat_prob(spec.bit0, spec.bit1, v, s.amplitudes()));
        }
    return best;
}

TEST(MinOverStates, ZxDephasingAgainstBlochGrid) {
    const auto spec = zx_dephasing();
    const auto id = ComplexMatrix::identity(2);
    const double grid = bloch_grid_min(spec, id);
    const auto r = min_over_states(spec, CheatUnitary(id));
    EXPECT_LE(r.value, grid + 1e-6);
    // P = |phi_0|^2 / 2 + |phi_1|^2 / 2 off the two states |+>, |->, where one
    // bit-1 outcome is impossible and its term drops out, leaving 1/4.
    EXPECT_NEAR(grid, 0.25, 1e-12);
    EXPECT_NEAR(r.value, 0.25, 1e-9);
    EXPECT_NEAR(alice_cheat_prob(spec, CheatUnitary(id), bloch(0.3, 1.0)), 0.5, 1e-12);
}

TEST(MinOverStates, RandomQubitProtocolsAgainstBlochGrid) {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 4; ++trial) {
        const auto spec = random_spec(rng, 2, 2, 2);
        const auto v = oracle::random_unitary(rng, 2);
        const double grid = bloch_grid_min(spec, v);
        const auto r = min_over_states(spec, CheatUnitary(v), {16, static_cast<std::uint64_t>(trial), 1e-10, 500});
        EXPECT_LE(r.value, grid + 1e-6);
        EXPECT_NEAR(alice_cheat_prob(spec, CheatUnitary(v), r.state), r.value, 1e-12);
    }
}

TEST(MinOverStates, DeterministicAndPhaseFree) {
    std::mt19937_64 rng(68);
    const auto spec = random_spec(rng, 3, 2, 3);
    const CheatUnitary v(oracle::random_unitary(rng, 3));
    const auto a = min_over_states(spec, v, {8, 4, 1e-8, 500});
    const auto b = min_over_states(spec, v, {8, 4, 1e-8, 500});
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.state, b.state);
    std::vector<cplx> rotated;
    for (auto z : a.state.amplitudes()) rotated.push_back(std::polar(1.0, 1.1) * z);
    EXPECT_NEAR(alice_cheat_prob(spec, v, StateVector(rotated)), a.value, 1e-12);
}

TEST(MinimaxCheat, IdenticalFamiliesGiveOneAtIdentity) {
    std::mt19937_64 rng(69);
    const auto fam = oracle::random_family(rng, 2, 2, 2);
    const auto rep = minimax_cheat({"", fam, fam, std::nullopt});
    EXPECT_NEAR(rep.minimax_estimate, 1.0, 1e-12);
    EXPECT_LT(oracle::max_diff(rep.best_v.matrix(), ComplexMatrix::identity(2)), 1e-9);
}

TEST(MinimaxCheat, PerfectlyConcealingRecoversRelatingUnitary) {
    std::mt19937_64 rng(70);
    for (std::size_t m : {2u, 3u}) {
        ComplexMatrix w;
        const auto spec = perfectly_concealing(rng, m, &w);
        const auto rep = minimax_cheat(spec);
        EXPECT_GE(rep.minimax_estimate, 0.999);
        // E0(best_V) reproduces bit1 up to a global phase.
        const auto moved = apply_cheat_unitary(spec.bit0, rep.best_v);
        EXPECT_LT(choi_distance(moved, spec.bit1), 1e-8);
        cplx phase{};
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < 4; ++k) phase += std::conj(moved[j].entries()[k]) * spec.bit1[j].entries()[k];
        EXPECT_NEAR(std::abs(phase), 2.0, 1e-6);
    }
}

TEST(MinimaxCheat, ZxDephasingIsBelowOneAndSaddleConsistent) {
    const auto spec = zx_dephasing();
    const auto rep = minimax_cheat(spec);
    EXPECT_LT(rep.minimax_estimate, 1.0 - 1e-3);
    EXPECT_GE(rep.minimax_estimate, 0.25 - 1e-9);
    EXPECT_NEAR(rep.payoff_at_saddle, alice_cheat_prob(spec, rep.best_v, rep.worst_state), 1e-10);
    EXPECT_LE(unitarity_residual(rep.best_v.matrix()), 1e-10);
}

TEST(MinimaxCheat, ReportInvariantsAndDeterminism) {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 3; ++trial) {
        const auto spec = random_spec(rng, 2, 2, 2);
        const BindingOptions opt{3, 60, 6, 300, static_cast<std::uint64_t>(trial), 1e-8};
        for (auto dir : {CheatDirection::ZeroToOne, CheatDirection::OneToZero}) {
            const auto a = minimax_cheat(spec, opt, dir);
            const auto b = minimax_cheat(spec, opt, dir);
            EXPECT_EQ(a.minimax_estimate, b.minimax_estimate);
            EXPECT_EQ(a.best_v.matrix(), b.best_v.matrix());
            EXPECT_EQ(a.solver_trace.restart_values, b.solver_trace.restart_values);
            EXPECT_GE(a.minimax_estimate, 0.0);
            EXPECT_LE(a.minimax_estimate, 1.0 + 1e-12);
            EXPECT_NEAR(a.payoff_at_saddle, alice_cheat_prob(spec, a.best_v, a.worst_state, dir), 1e-10);
            EXPECT_EQ(a.direction, dir);
        }
    }
}

TEST(PayoffMatrix, PointwiseAndStructure) {
    std::mt19937_64 rng(72);
    const auto fam = oracle::random_family(rng, 2, 2, 1);
    const ProtocolSpec same{"", fam, fam, std::nullopt};
    const CheatUnitary one = CheatUnitary::identity(1);
    const StateVector phi0 = random_state(2, 0);
    const auto single = payoff_matrix_sample(same, std::span(&one, 1), std::span(&phi0, 1));
    ASSERT_EQ(single.size(), 1u);
    EXPECT_NEAR(single[0][0], 1.0, 1e-12);

    const auto spec = random_spec(rng, 2, 2, 2);
    const CheatUnitary va(oracle::random_unitary(rng, 2)), vb(oracle::random_unitary(rng, 2));
    const std::vector<CheatUnitary> vs{va, vb, va};
    std::vector<StateVector> phis;
    for (int k = 0; k < 5; ++k) phis.push_back(random_state(2, 100 + k));
    const auto mat = payoff_matrix_sample(spec, vs, phis);
    EXPECT_EQ(mat[0], mat[2]);
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = 0; j < phis.size(); ++j)
            EXPECT_NEAR(mat[i][j], alice_cheat_prob(spec, vs[i], phis[j]), 1e-14);
}

}  // namespace
