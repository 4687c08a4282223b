#include <charconv>
#include <cmath>
#include <sstream>

#include "qbc/parallel.hpp"
#include "qbc/scan.hpp"

namespace qbc {

ProtocolSpec decoy_protocol(std::size_t decoys, double angle) {
    if (decoys > 8) throw DimensionError("decoy count above 8 is outside the supported size");
    const std::size_t qubits = decoys + 1;
    const std::size_t dout = std::size_t{1} << qubits;
    const std::size_t ndecoy_states = std::size_t{1} << decoys;
    const double amp = 1.0 / std::sqrt(static_cast<double>(qubits * ndecoy_states));

    // output index with `signal` at qubit `pos` (qubit 0 most significant)
    // and the decoy bits of `a` filling the other qubits in order
    auto index_of = [&](std::size_t pos, std::size_t signal, std::size_t a) {
        std::size_t idx = 0;
        std::size_t next_decoy = 0;
        for (std::size_t q = 0; q < qubits; ++q) {
            std::size_t bit;
            if (q == pos) {
                bit = signal;
            } else {
                bit = (a >> (decoys - 1 - next_decoy)) & 1u;
                ++next_decoy;
            }
            idx = (idx << 1) | bit;
        }
        return idx;
    };

    auto family_for = [&](double theta) {
        const double c = std::cos(theta), s = std::sin(theta);
        const cplx basis[2][2] = {{c, s}, {-s, c}};
        std::vector<ComplexMatrix> ops;
        for (std::size_t pos = 0; pos < qubits; ++pos)
            for (std::size_t a = 0; a < ndecoy_states; ++a)
                for (std::size_t i = 0; i < 2; ++i) {
                    // amp |e_i at pos, a> <e_i|
                    ComplexMatrix e(dout, 2);
                    for (std::size_t sig = 0; sig < 2; ++sig)
                        for (std::size_t col = 0; col < 2; ++col)
                            e(index_of(pos, sig, a), col) = amp * basis[i][sig] * std::conj(basis[i][col]);
                    ops.push_back(std::move(e));
                }
        return KrausFamily(2, dout, std::move(ops));
    };

    SecretStructure secret;
    for (std::size_t g = 0; g < qubits * ndecoy_states; ++g)
        secret.groups.push_back({1.0 / static_cast<double>(qubits * ndecoy_states), 2});
    double psum = 0.0;
    for (const auto& g : secret.groups) psum += g.probability;
    // absorb rounding so the probabilities sum to 1 exactly
    secret.groups.back().probability += 1.0 - psum;

    std::ostringstream label;
    label << "decoy k=" << decoys << " angle=" << format_double(angle);
    return make_protocol(label.str(), family_for(0.0), family_for(angle), std::move(secret));
}

ProtocolFamily decoy_family(double angle) {
    return {"decoy", [angle](double param) {
                if (param < 0 || param != std::floor(param))
                    throw std::invalid_argument("decoy count must be a nonnegative integer, got " + format_double(param));
                return decoy_protocol(static_cast<std::size_t>(param), angle);
            }};
}

ProtocolFamily constant_family(ProtocolSpec spec) {
    return {"constant", [spec = std::move(spec)](double) { return spec; }};
}

ScanResult epsilon_delta_scan(const ProtocolFamily& family, const std::vector<double>& params,
                              const ScanBudgets& budgets, std::uint64_t seed) {
    struct Slot {
        std::optional<EpsilonDeltaPoint> point;
        std::string reason;
    };
    std::vector<Slot> slots(params.size());
    parallel_for(params.size(), [&](std::size_t k) {
        std::optional<ProtocolSpec> spec;
        try {
            spec = family.generate(params[k]);
        } catch (const std::exception& e) {
            slots[k].reason = e.what();
            return;
        }
        auto copt = budgets.conceal;
        copt.seed = seed;
        auto bopt = budgets.bind;
        bopt.seed = seed;
        const auto conceal = analyze_concealment(*spec, copt);
        const auto bind = minimax_cheat(*spec, bopt);
        EpsilonDeltaPoint p;
        p.param = params[k];
        p.eps_lo = conceal.cb_lower;
        p.eps_hi = conceal.cb_upper;
        p.epsilon = 0.5 * (p.eps_lo + p.eps_hi);
        p.width = p.eps_hi - p.eps_lo;
        p.minimax = bind.minimax_estimate;
        p.delta = 1.0 - p.minimax;
        p.budget_outer = bopt.outer_restarts;
        p.budget_inner = bopt.inner_restarts;
        p.seed = seed;
        slots[k].point = p;
    });
    ScanResult res;
    res.family = family.name;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        if (slots[k].point)
            res.points.push_back(*slots[k].point);
        else
            res.skipped.push_back({params[k], slots[k].reason});
    }
    return res;
}

std::string format_double(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string scan_csv(const ScanResult& scan) {
    std::string out = kScanCsvHeader;
    out += '\n';
    for (const auto& p : scan.points) {
        out += format_double(p.param) + ',' + format_double(p.eps_lo) + ',' + format_double(p.eps_hi) + ',' +
               format_double(p.delta) + ',' + format_double(p.minimax) + ',' + std::to_string(p.budget_outer) + ',' +
               std::to_string(p.budget_inner) + ',' + std::to_string(p.seed) + '\n';
    }
    return out;
}

}  // namespace qbc
