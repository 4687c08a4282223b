#include "qbc/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "qbc/binding.hpp"

namespace qbc {

namespace {
constexpr std::uint64_t kPhiStream = 0x9F;
}

BoundCheck check_bounds(const ProtocolSpec& spec, const CheatUnitary& v, std::vector<StateVector> phis,
                        double cb_lower, double cb_upper) {
    BoundCheck bc;
    bc.protocol_label = spec.label;
    bc.v_used = v;
    bc.kraus_gap = kraus_gap(spec, v);
    bc.eq8_lhs = 0.25 * cb_lower;
    bc.eq8_lhs_upper = 0.25 * cb_upper;
    bc.eq8_rhs = 0.5 * std::sqrt(bc.kraus_gap);
    bc.eq8_margin = bc.eq8_rhs - bc.eq8_lhs;
    if (bc.eq8_lhs > bc.eq8_rhs + bc.tolerance) bc.findings.push_back({"eq8", bc.eq8_lhs, bc.eq8_rhs, -1});

    const double base = std::max(0.0, 1.0 - 0.5 * bc.kraus_gap);
    bc.eq9_rhs = base * base;
    bc.eq9_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < phis.size(); ++k) {
        const double p = alice_cheat_prob(spec, v, phis[k]);
        bc.eq9_lhs.push_back(p);
        bc.eq9_margin = std::min(bc.eq9_margin, p - bc.eq9_rhs);
        if (p < bc.eq9_rhs - bc.tolerance) bc.findings.push_back({"eq9", p, bc.eq9_rhs, static_cast<int>(k)});
    }
    if (phis.empty()) bc.eq9_margin = 0.0;
    bc.phis = std::move(phis);
    return bc;
}

BoundCheck check_bounds(const ProtocolSpec& spec, const CheatUnitary& v, int phi_samples, std::uint64_t seed,
                        const ConcealmentOptions& conceal) {
    std::vector<StateVector> phis;
    for (int k = 0; k < phi_samples; ++k)
        phis.push_back(random_state(spec.dim_in(), derive_seed(seed, kPhiStream, static_cast<std::uint64_t>(k))));
    const auto rep = analyze_concealment(spec, conceal);
    return check_bounds(spec, v, std::move(phis), rep.cb_lower, rep.cb_upper);
}

}  // namespace qbc
