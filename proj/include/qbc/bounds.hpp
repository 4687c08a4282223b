#pragma once

// Inequalities tying concealment to binding through the distance between
// Kraus families:
//   gap(V) = || sum_J |E0_J(V) - E1_J|^2 ||   (operator norm)
//   ||M1 - M0||_cb / 4      <= sqrt(gap) / 2
//   P_cheat(V, phi)         >= [1 - gap / 2]^2    (right side clamped at 0)

#include <string>
#include <vector>

#include "qbc/concealment.hpp"
#include "qbc/protocol.hpp"
#include "qbc/solver_trace.hpp"

namespace qbc {

inline constexpr double kBoundTol = 1e-9;

double kraus_gap(const ProtocolSpec& spec, const CheatUnitary& v);

// Gap and its Hermitian gradient with respect to the generator H of
// V exp(iH) at H = 0 (subgradient at degenerate top eigenvalues).
std::pair<double, ComplexMatrix> kraus_gap_with_gradient(const ProtocolSpec& spec, const ComplexMatrix& v);

struct KrausGapSearch {
    double value = 0.0;
    CheatUnitary v;
    SolverTrace trace;
};

// Restart 0 starts at the identity, restart 1 at the Procrustes alignment,
// the rest at seeded random unitaries.
KrausGapSearch minimize_kraus_gap(const ProtocolSpec& spec, int restarts = 8, std::uint64_t seed = 0,
                                  double tol = 1e-10, int max_iterations = 500);

struct BoundFinding {
    std::string inequality;  // "eq8" or "eq9"
    double lhs = 0.0;
    double rhs = 0.0;
    int phi_index = -1;
};

struct BoundCheck {
    std::string protocol_label;
    CheatUnitary v_used;
    double kraus_gap = 0.0;
    double eq8_lhs = 0.0;        // cb_lower / 4
    double eq8_lhs_upper = 0.0;  // cb_upper / 4
    double eq8_rhs = 0.0;        // sqrt(gap) / 2
    double eq8_margin = 0.0;     // rhs - lhs
    double eq9_rhs = 0.0;        // max(0, 1 - gap/2)^2
    std::vector<StateVector> phis;
    std::vector<double> eq9_lhs;  // P_cheat(V, phi_k)
    double eq9_margin = 0.0;      // min_k lhs_k - rhs
    std::vector<BoundFinding> findings;
    double tolerance = kBoundTol;

    bool violated() const noexcept { return !findings.empty(); }
};

BoundCheck check_bounds(const ProtocolSpec& spec, const CheatUnitary& v, std::vector<StateVector> phis,
                        double cb_lower, double cb_upper);

// Samples `phi_samples` seeded random states and runs the concealment
// analysis with `conceal` to obtain the cb bracket.
BoundCheck check_bounds(const ProtocolSpec& spec, const CheatUnitary& v, int phi_samples, std::uint64_t seed,
                        const ConcealmentOptions& conceal = {});

}  // namespace qbc
