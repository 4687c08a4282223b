#pragma once

// Concealment/binding trade-off across a parameterized family of protocols:
// one (epsilon, delta) point per parameter, epsilon = ||M1 - M0||_cb bracket and
// delta = 1 - minimax cheating estimate.

#include <functional>
#include <string>
#include <vector>

#include "qbc/binding.hpp"
#include "qbc/concealment.hpp"

namespace qbc {

struct ProtocolFamily {
    std::string name;
    std::function<ProtocolSpec(double param)> generate;
};

// Signal qubit dephased in the computational basis (bit 0) or in a basis
// rotated by `angle` (bit 1), hidden at a secret uniformly random position
// among k maximally mixed decoy qubits; the parameter is k.
ProtocolFamily decoy_family(double angle);
ProtocolSpec decoy_protocol(std::size_t decoys, double angle);

// The same protocol for every parameter.
ProtocolFamily constant_family(ProtocolSpec spec);

struct ScanBudgets {
    ConcealmentOptions conceal{8, 0, 1e-8, 300, std::nullopt};
    BindingOptions bind{2, 60, 4, 300, 0, 1e-8};
};

struct EpsilonDeltaPoint {
    double param = 0.0;
    double eps_lo = 0.0;
    double eps_hi = 0.0;
    double epsilon = 0.0;  // bracket midpoint
    double width = 0.0;    // eps_hi - eps_lo
    double minimax = 0.0;
    double delta = 0.0;    // 1 - minimax
    int budget_outer = 0;
    int budget_inner = 0;
    std::uint64_t seed = 0;
};

struct SkippedPoint {
    double param = 0.0;
    std::string reason;
};

struct ScanResult {
    std::string family;
    std::vector<EpsilonDeltaPoint> points;
    std::vector<SkippedPoint> skipped;
};

ScanResult epsilon_delta_scan(const ProtocolFamily& family, const std::vector<double>& params,
                              const ScanBudgets& budgets, std::uint64_t seed);

inline constexpr const char* kScanCsvHeader = "param,eps_lo,eps_hi,delta,minimax,budget_outer,budget_inner,seed";

std::string scan_csv(const ScanResult& scan);

// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

}  // namespace qbc
