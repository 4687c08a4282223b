// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qbc/binding.hpp"
#include "qbc/bounds.hpp"
#include "qbc/concealment.hpp"
#include "qbc/linalg.hpp"
#include "qbc/scan.hpp"

namespace {

using namespace qbc;

struct Verdict {
    bool pass = true;
    std::string detail;
};

StateVector random_state(std::mt19937_64& rng, std::size_t n) {
    auto a = oracle::random_vector(rng, n);
    double norm = 0;
    for (const auto& x : a) norm += std::norm(x);
    for (auto& x : a) x /= std::sqrt(norm);
    return StateVector(std::move(a));
}

ProtocolSpec random_spec(std::mt19937_64& rng, std::size_t din, std::size_t dout, std::size_t m) {
    m = oracle::feasible_m(din, dout, m);
    return {"random", oracle::random_family(rng, din, dout, m), oracle::random_family(rng, din, dout, m), std::nullopt};
}

ProtocolSpec zx_dephasing() {
    return {"Z vs X",
            KrausFamily(2, 2, {ComplexMatrix{{1, 0}, {0, 0}}, ComplexMatrix{{0, 0}, {0, 1}}}),
            KrausFamily(2, 2, {ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}}, ComplexMatrix{{0.5, -0.5}, {-0.5, 0.5}}}),
            std::nullopt};
}

// Helstrom probability of the extended outputs, built from E (x) I_R directly.
double oracle_helstrom(const ProtocolSpec& spec, const StateVector& psi) {
    const std::size_t r = psi.dim() / spec.dim_in();
    const auto id = ComplexMatrix::identity(r);
    auto extend = [&](const KrausFamily& f) {
        std::vector<ComplexMatrix> ops;
        for (const auto& e : f.ops()) ops.push_back(oracle::kron(e, id));
        return KrausFamily(spec.dim_in() * r, spec.dim_out() * r, ops);
    };
    const auto rho = psi.projector();
    const auto diff = oracle::channel(extend(spec.bit1), rho) - oracle::channel(extend(spec.bit0), rho);
    return 0.5 + 0.25 * oracle::trace_norm_hermitian(diff);
}

struct Campaign {
    ProtocolSpec spec;
    ConcealmentReport conceal;
};

std::vector<Campaign> build_campaign() {
    std::mt19937_64 rng(0xacc2);
    std::vector<Campaign> out;
    for (int t = 0; t < 100; ++t) {
        const std::size_t din = 1 + t % 3, dout = 1 + (t / 3) % 3, m = 1 + (t / 9) % 3;
        auto spec = random_spec(rng, din, dout, m);
        ConcealmentOptions opt;
        opt.seed = static_cast<std::uint64_t>(t);
        auto rep = analyze_concealment(spec, opt);
        out.push_back({std::move(spec), std::move(rep)});
    }
    return out;
}

Verdict ac1() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(0xacc1);
    double worst_bind = 1, worst_bob = 0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t m = 2 + t % 2;
        const auto bit0 = oracle::random_family(rng, 2, 2, m);
        const CheatUnitary w(oracle::random_unitary(rng, m));
        const ProtocolSpec spec{"perfectly concealing", bit0, apply_cheat_unitary(bit0, w), std::nullopt};
        BindingOptions bopt;
        bopt.seed = static_cast<std::uint64_t>(t);
        worst_bind = std::min(worst_bind, minimax_cheat(spec, bopt).minimax_estimate);
        ConcealmentOptions copt;
        copt.seed = static_cast<std::uint64_t>(t);
        worst_bob = std::max(worst_bob, analyze_concealment(spec, copt).bob_cheat_upper);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream d;
    d << "min minimax " << worst_bind << ", max Bob " << worst_bob << ", " << secs << " s";
    return {worst_bind >= 0.999 && worst_bob <= 0.5 + 1e-6 && secs < 300, d.str()};
}

Verdict ac2(const std::vector<Campaign>& campaign) {
    std::mt19937_64 rng(0xacc3);
    int violations = 0, checks = 0;
    std::string first;
    for (const auto& c : campaign) {
        for (int k = 0; k < 5; ++k) {
            const CheatUnitary v(oracle::random_unitary(rng, c.spec.cardinality()));
            std::vector<StateVector> phis;
            for (int j = 0; j < 10; ++j) phis.push_back(random_state(rng, c.spec.dim_in()));
            const auto bc = check_bounds(c.spec, v, phis, c.conceal.cb_lower, c.conceal.cb_upper);
            checks += 1 + 10;
            for (const auto& f : bc.findings) {
                if (first.empty()) {
                    std::ostringstream d;
                    d << "; first: " << f.inequality << " lhs " << f.lhs << " rhs " << f.rhs;
                    first = d.str();
                }
                ++violations;
            }
        }
    }
    return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(checks) + " checks" + first};
}

Verdict ac3() {
    Verdict v;
    std::ostringstream d;
    const ProtocolSpec ivz{"I vs Z", KrausFamily(2, 2, {ComplexMatrix::identity(2)}),
                           KrausFamily(2, 2, {ComplexMatrix{{1, 0}, {0, -1}}}), std::nullopt};
    const auto a = analyze_concealment(ivz);
    const bool a_ok = a.cb_lower <= 2 + 1e-12 && a.cb_upper >= 2 - 1e-12 && a.cb_upper - a.cb_lower <= 1e-4;
    d << "I/Z [" << a.cb_lower << ", " << a.cb_upper << "]";

    std::mt19937_64 rng(0xacc4);
    bool same_ok = true;
    double worst_same = 0;
    for (int t = 0; t < 10; ++t) {
        const auto fam = oracle::random_family(rng, 2, 2, 1 + t % 3);
        const auto r = analyze_concealment({"same", fam, fam, std::nullopt});
        worst_same = std::max(worst_same, r.cb_upper);
        same_ok = same_ok && r.cb_lower == 0.0 && r.cb_upper <= 1e-8;
    }
    d << ", identical upper <= " << worst_same;

    const auto zx = analyze_concealment(zx_dephasing());
    const bool zx_ok = zx.cb_lower >= 1 - 1e-6;
    d << ", Z/X lower " << zx.cb_lower;
    v.pass = a_ok && same_ok && zx_ok;
    v.detail = d.str();
    return v;
}

Verdict ac4(const std::vector<Campaign>& campaign) {
    std::mt19937_64 rng(0xacc5);
    int bad = 0, samples = 0;
    double worst_margin = 1e9, worst_oracle = 0;
    for (const auto& c : campaign) {
        const std::size_t din = c.spec.dim_in();
        std::vector<StateVector> inputs{c.conceal.witness_state};
        for (std::size_t r : {std::size_t{1}, din})
            for (int j = 0; j < 5; ++j) inputs.push_back(random_state(rng, din * r));
        for (const auto& psi : inputs) {
            const double p = helstrom_prob(c.spec, psi);
            worst_oracle = std::max(worst_oracle, std::abs(p - oracle_helstrom(c.spec, psi)));
            const double margin = 0.5 + 0.25 * c.conceal.cb_upper + 1e-8 - p;
            worst_margin = std::min(worst_margin, margin);
            if (margin < 0) ++bad;
            ++samples;
        }
    }
    std::ostringstream d;
    d << bad << " of " << samples << " inputs above the bound, min margin " << worst_margin
      << ", max deviation from oracle " << worst_oracle;
    return {bad == 0 && worst_oracle <= 1e-10, d.str()};
}

Verdict ac5() {
    std::mt19937_64 rng(0xacc6);
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t din = 1 + t % 3, dout = 1 + (t / 3) % 3, m = 1 + (t / 9) % 3;
        const auto spec = random_spec(rng, din, dout, m);
        const auto v = oracle::random_unitary(rng, spec.cardinality());
        const auto phi = random_state(rng, din);
        const double p = alice_cheat_prob(spec, CheatUnitary(v), phi);
        worst = std::max(worst, std::abs(p - oracle::cheat_prob(spec.bit0, spec.bit1, v, phi.amplitudes())));
    }
    const double zx = alice_cheat_prob(zx_dephasing(), CheatUnitary::identity(2), StateVector::basis(2, 0));
    std::ostringstream d;
    d << "max deviation " << worst << " over 1000 triples, Z/X at V=I, |0>: " << zx;
    return {worst <= 1e-12 && std::abs(zx - 0.5) <= 1e-12, d.str()};
}

Verdict ac6() {
    std::mt19937_64 rng(0xacc7);
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t din = 1 + t % 4, dout = 1 + (t / 4) % 4;
        const std::size_t m = oracle::feasible_m(din, dout, 1 + (t / 16) % 4);
        const auto fam = oracle::random_family(rng, din, dout, m);
        worst = std::max(worst, (dilation_choi(dilate(fam)) - oracle::choi(fam)).frobenius_norm());
    }
    std::ostringstream d;
    d << "max Choi distance " << worst;
    return {worst <= 1e-9, d.str()};
}

Verdict ac7() {
    const auto fam = decoy_family(0.7853981633974483);
    const std::vector<double> ks{0, 1, 2, 3};
    const auto a = epsilon_delta_scan(fam, ks, ScanBudgets{}, 7);
    const auto b = epsilon_delta_scan(fam, ks, ScanBudgets{}, 7);
    const auto csv_a = scan_csv(a), csv_b = scan_csv(b);
    const auto rows = std::count(csv_a.begin(), csv_a.end(), '\n') - 1;
    bool monotone = a.points.size() == 4;
    std::ostringstream d;
    d << rows << " rows, " << (csv_a == csv_b ? "identical" : "DIFFERENT") << " across runs, eps";
    for (std::size_t k = 0; k < a.points.size(); ++k) {
        d << ' ' << a.points[k].epsilon;
        if (k > 0) {
            const auto& p = a.points[k - 1];
            const auto& q = a.points[k];
            monotone = monotone && q.epsilon <= p.epsilon + 0.5 * (p.width + q.width);
        }
    }
    return {rows == 4 && csv_a == csv_b && a.skipped.empty() && monotone, d.str()};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](const char* name, const std::function<Verdict()>& f) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = f();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
        std::fflush(stdout);
        if (!v.pass) ++failures;
    };

    report("AC1 perfect concealment gives perfect cheating", ac1);
    const auto campaign = build_campaign();
    report("AC2 cb-norm and cheating bounds on random protocols", [&] { return ac2(campaign); });
    report("AC3 cb-norm brackets on analytic cases", ac3);
    report("AC4 Helstrom probability within the cb upper bound", [&] { return ac4(campaign); });
    report("AC5 cheating probability matches term-by-term oracle", ac5);
    report("AC6 dilation round trip", ac6);
    report("AC7 decoy scan shape and determinism", ac7);
    std::printf("%d of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
