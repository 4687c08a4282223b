#pragma once

// How well a protocol hides the committed bit: brackets on the completely
// bounded norm of M1 - M0 and the receiver's optimal guessing probability
// 1/2 + ||M1 - M0||_cb / 4 for equiprobable bits.

#include <optional>
#include <stdexcept>

#include "qbc/protocol.hpp"
#include "qbc/solver_trace.hpp"

namespace qbc {

struct ConcealmentOptions {
    int restarts = 16;
    std::uint64_t seed = 0;
    double tol = 1e-8;
    int max_iterations = 500;
    std::optional<std::size_t> ref_dim;  // defaults to dim_in
};

struct ConcealmentReport {
    double cb_lower = 0.0;
    double cb_upper = 2.0;
    double bob_cheat_lower = 0.5;
    double bob_cheat_upper = 1.0;
    StateVector witness_state;  // on H (x) R, attains cb_lower
    std::size_t ref_dim = 1;
    double upper_choi = 2.0;   // ||J1 - J0||_1
    double upper_kraus = 2.0;  // 2 sqrt(kraus_gap) at the best heuristic V
    SolverTrace solver_trace;
};

class BracketInversion : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// 1/2 + 1/4 ||((M1 - M0) (x) id)(|psi><psi|)||_1 with the reference dimension
// inferred from input.dim() / dim_in.
double helstrom_prob(const ProtocolSpec& spec, const StateVector& input);

// ||((M1 - M0) (x) id_R)(|psi><psi|)||_1.
double extended_output_distance(const ProtocolSpec& spec, const StateVector& input);

struct CbLowerResult {
    double value = 0.0;
    StateVector witness;
    SolverTrace trace;
};

// Best achieved objective over pure inputs on H (x) R (a certified lower bound).
CbLowerResult cb_lower_bound(const ProtocolSpec& spec, const ConcealmentOptions& opt = {});

struct CbUpperResult {
    double value = 2.0;
    double choi_route = 2.0;
    double kraus_route = 2.0;
};

// min(2, ||J1 - J0||_1, 2 sqrt(kraus_gap(V))) with V ranging over the
// identity, the Procrustes alignment, and `v` when given.
CbUpperResult cb_upper_bound(const ProtocolSpec& spec, const std::optional<CheatUnitary>& v = std::nullopt);

ConcealmentReport analyze_concealment(const ProtocolSpec& spec, const ConcealmentOptions& opt = {});

}  // namespace qbc
