#pragma once

// The committer's EPR attack. After sending the commitment she applies a
// unitary V on her secret register, reindexing the Kraus operators of the
// committed bit; the payoff is the probability that the opening of the other
// bit passes verification on the receiver's anonymous state phi:
//
//   P(V, phi) = sum_J |<phi| E0_J(V)^dagger E1_J |phi>|^2 / ||E1_J phi||^2
//
// Terms with ||E1_J phi||^2 <= 1e-14 contribute 0.

#include <span>
#include <vector>

#include "qbc/protocol.hpp"
#include "qbc/solver_trace.hpp"

namespace qbc {

inline constexpr double kZeroOutcomeThreshold = 1e-14;

enum class CheatDirection {
    ZeroToOne,  // committed 0, opens as 1
    OneToZero,  // committed 1, opens as 0
};

const char* to_string(CheatDirection d);

double alice_cheat_prob(const ProtocolSpec& spec, const CheatUnitary& v, const StateVector& phi,
                        CheatDirection dir = CheatDirection::ZeroToOne);

struct StateSearchOptions {
    int restarts = 16;
    std::uint64_t seed = 0;
    double tol = 1e-8;
    int max_iterations = 500;
};

struct StateSearchResult {
    double value = 1.0;  // achieved, hence an upper bound on the minimum
    StateVector state;
    SolverTrace trace;
};

// min over phi of P(V, phi) by multi-start projected descent on the unit
// sphere. `warm` states are tried before the seeded random starts.
StateSearchResult min_over_states(const ProtocolSpec& spec, const CheatUnitary& v, const StateSearchOptions& opt = {},
                                  std::span<const StateVector> warm = {},
                                  CheatDirection dir = CheatDirection::ZeroToOne);

struct BindingOptions {
    int outer_restarts = 8;
    int outer_iterations = 200;
    int inner_restarts = 16;
    int inner_iterations = 500;
    std::uint64_t seed = 0;
    double tol = 1e-8;
};

struct BindingTrace {
    std::uint64_t seed = 0;
    int outer_restarts = 0;
    int outer_restarts_run = 0;
    int outer_iterations = 0;  // per-restart budget
    int inner_restarts = 0;
    int inner_iterations = 0;
    double tol = 0.0;
    int total_outer_steps = 0;
    int best_restart = 0;
    std::vector<double> restart_values;
    std::string note;
};

struct BindingReport {
    CheatDirection direction = CheatDirection::ZeroToOne;
    double minimax_estimate = 0.0;
    CheatUnitary best_v;
    StateVector worst_state;
    double payoff_at_saddle = 0.0;
    BindingTrace solver_trace;
};

// Estimate of max_V min_phi P(V, phi). The inner minimum is an achieved value,
// so the estimate may overstate the true max-min by the inner solver's gap.
BindingReport minimax_cheat(const ProtocolSpec& spec, const BindingOptions& opt = {},
                            CheatDirection dir = CheatDirection::ZeroToOne);

std::vector<std::vector<double>> payoff_matrix_sample(const ProtocolSpec& spec, std::span<const CheatUnitary> vs,
                                                      std::span<const StateVector> phis,
                                                      CheatDirection dir = CheatDirection::ZeroToOne);

// Gradients used by the searches; exposed for finite-difference tests.
// Tangent (real) gradient of P with respect to phi on the sphere.
std::vector<cplx> cheat_prob_state_gradient(const ProtocolSpec& spec, const ComplexMatrix& v, const StateVector& phi,
                                            CheatDirection dir = CheatDirection::ZeroToOne);
// Hermitian gradient of P with respect to H in V exp(iH) at H = 0.
ComplexMatrix cheat_prob_unitary_gradient(const ProtocolSpec& spec, const ComplexMatrix& v, const StateVector& phi,
                                          CheatDirection dir = CheatDirection::ZeroToOne);

}  // namespace qbc
