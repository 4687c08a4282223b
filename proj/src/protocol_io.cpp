#include "qbc/protocol_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qbc {

using nlohmann::json;

namespace {

cplx complex_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(where + ": expected a [re, im] pair of numbers");
    const cplx z{j[0].get<double>(), j[1].get<double>()};
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ParseError(where + ": non-finite number");
    return z;
}

std::size_t positive_size(const json& doc, const char* key) {
    if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    const auto& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0) throw ParseError(std::string("'") + key + "' must be a positive integer");
    return v.get<std::size_t>();
}

KrausFamily family_from_json(const json& arr, std::size_t din, std::size_t dout, const char* key) {
    if (!arr.is_array() || arr.empty()) throw ParseError(std::string("'") + key + "' must be a non-empty array of operators");
    std::vector<ComplexMatrix> ops;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string where = std::string(key) + "[" + std::to_string(k) + "]";
        const auto& op = arr[k];
        if (!op.is_array() || op.size() != dout)
            throw ParseError(where + ": expected " + std::to_string(dout) + " rows");
        ComplexMatrix m(dout, din);
        for (std::size_t r = 0; r < dout; ++r) {
            if (!op[r].is_array() || op[r].size() != din)
                throw ParseError(where + " row " + std::to_string(r) + ": expected " + std::to_string(din) + " entries");
            for (std::size_t c = 0; c < din; ++c)
                m(r, c) = complex_from_json(op[r][c], where + "(" + std::to_string(r) + "," + std::to_string(c) + ")");
        }
        ops.push_back(std::move(m));
    }
    return {din, dout, std::move(ops)};
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) throw ParseError("matrix must be a non-empty array of rows");
    const std::size_t rows = j.size(), cols = j[0].size();
    ComplexMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw ParseError("ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c], "matrix entry");
    }
    return m;
}

ProtocolSpec protocol_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("protocol document must be an object");
    const std::size_t din = positive_size(doc, "dim_in");
    const std::size_t dout = positive_size(doc, "dim_out");
    std::string label = doc.value("label", std::string{});
    if (!doc.contains("bit0") || !doc.contains("bit1")) throw ParseError("missing 'bit0' or 'bit1'");
    auto bit0 = family_from_json(doc.at("bit0"), din, dout, "bit0");
    auto bit1 = family_from_json(doc.at("bit1"), din, dout, "bit1");

    std::optional<SecretStructure> secret;
    if (doc.contains("secret")) {
        const auto& s = doc.at("secret");
        if (!s.is_object() || !s.contains("p") || !s.contains("outcome_counts"))
            throw ParseError("'secret' needs 'p' and 'outcome_counts' arrays");
        const auto& p = s.at("p");
        const auto& counts = s.at("outcome_counts");
        if (!p.is_array() || !counts.is_array() || p.size() != counts.size())
            throw ParseError("'secret.p' and 'secret.outcome_counts' must be arrays of equal length");
        SecretStructure ss;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (!p[k].is_number() || !counts[k].is_number_integer() || counts[k].get<long long>() <= 0)
                throw ParseError("malformed secret group " + std::to_string(k));
            ss.groups.push_back({p[k].get<double>(), counts[k].get<std::size_t>()});
        }
        secret = std::move(ss);
    }
    const std::size_t m = std::max(bit0.cardinality(), bit1.cardinality());
    return {std::move(label), bit0.padded_to(m), bit1.padded_to(m), std::move(secret)};
}

json to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const StateVector& s) {
    json out = json::array();
    for (const auto& z : s.amplitudes()) out.push_back({z.real(), z.imag()});
    return out;
}

json protocol_to_json(const ProtocolSpec& spec) {
    json doc;
    doc["label"] = spec.label;
    doc["dim_in"] = spec.dim_in();
    doc["dim_out"] = spec.dim_out();
    auto fam = [](const KrausFamily& f) {
        json arr = json::array();
        for (const auto& op : f.ops()) arr.push_back(to_json(op));
        return arr;
    };
    doc["bit0"] = fam(spec.bit0);
    doc["bit1"] = fam(spec.bit1);
    if (spec.secret) {
        json p = json::array(), counts = json::array();
        for (const auto& g : spec.secret->groups) {
            p.push_back(g.probability);
            counts.push_back(g.outcome_count);
        }
        doc["secret"] = {{"p", p}, {"outcome_counts", counts}};
    }
    return doc;
}

ProtocolSpec parse_protocol_text(const std::string& text, double tol) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed protocol document: ") + e.what());
    }
    auto spec = protocol_from_json(doc);
    auto rep = validate(spec, tol);
    if (!rep.accepted) {
        std::string what = "protocol rejected";
        for (const auto& msg : rep.messages) what += "; " + msg;
        throw ProtocolError(what, std::move(rep));
    }
    return spec;
}

ProtocolSpec parse_protocol_file(const std::filesystem::path& path, double tol) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open protocol file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_protocol_text(ss.str(), tol);
}

std::string serialize_protocol(const ProtocolSpec& spec) { return protocol_to_json(spec).dump(2) + "\n"; }

json to_json(const SolverTrace& t) {
    return {{"seed", t.seed},
            {"restarts", t.restarts},
            {"max_iterations", t.max_iterations},
            {"tol", t.tol},
            {"iterations", t.iterations},
            {"best_restart", t.best_restart},
            {"converged_restarts", t.converged_restarts},
            {"note", t.note}};
}

json to_json(const ValidationReport& r) {
    return {{"accepted", r.accepted},
            {"completeness_residual_bit0", r.completeness_residual_bit0},
            {"completeness_residual_bit1", r.completeness_residual_bit1},
            {"dims_match", r.dims_match},
            {"cardinality_match", r.cardinality_match},
            {"secret_consistent", r.secret_consistent},
            {"tolerance", r.tolerance},
            {"messages", r.messages}};
}

json to_json(const ConcealmentReport& r) {
    return {{"cb_lower", r.cb_lower},
            {"cb_upper", r.cb_upper},
            {"bob_cheat_lower", r.bob_cheat_lower},
            {"bob_cheat_upper", r.bob_cheat_upper},
            {"upper_choi", r.upper_choi},
            {"upper_kraus", r.upper_kraus},
            {"ref_dim", r.ref_dim},
            {"witness_state", to_json(r.witness_state)},
            {"solver_trace", to_json(r.solver_trace)}};
}

json to_json(const BindingReport& r) {
    const auto& t = r.solver_trace;
    return {{"direction", to_string(r.direction)},
            {"minimax_estimate", r.minimax_estimate},
            {"payoff_at_saddle", r.payoff_at_saddle},
            {"best_V", to_json(r.best_v.matrix())},
            {"worst_state", to_json(r.worst_state)},
            {"solver_trace",
             {{"seed", t.seed},
              {"outer_restarts", t.outer_restarts},
              {"outer_restarts_run", t.outer_restarts_run},
              {"outer_iterations", t.outer_iterations},
              {"inner_restarts", t.inner_restarts},
              {"inner_iterations", t.inner_iterations},
              {"tol", t.tol},
              {"total_outer_steps", t.total_outer_steps},
              {"best_restart", t.best_restart},
              {"restart_values", t.restart_values},
              {"note", t.note}}}};
}

json to_json(const BoundCheck& b) {
    json phis = json::array();
    for (const auto& p : b.phis) phis.push_back(to_json(p));
    json findings = json::array();
    for (const auto& f : b.findings)
        findings.push_back({{"inequality", f.inequality}, {"lhs", f.lhs}, {"rhs", f.rhs}, {"phi_index", f.phi_index}});
    return {{"protocol_label", b.protocol_label},
            {"v_used", to_json(b.v_used.matrix())},
            {"kraus_gap", b.kraus_gap},
            {"eq8_lhs", b.eq8_lhs},
            {"eq8_lhs_upper", b.eq8_lhs_upper},
            {"eq8_rhs", b.eq8_rhs},
            {"eq8_margin", b.eq8_margin},
            {"eq9_rhs", b.eq9_rhs},
            {"eq9_lhs", b.eq9_lhs},
            {"eq9_margin", b.eq9_margin},
            {"phis", phis},
            {"findings", findings},
            {"tolerance", b.tolerance}};
}

json to_json(const KrausGapSearch& k) {
    return {{"value", k.value}, {"v", to_json(k.v.matrix())}, {"solver_trace", to_json(k.trace)}};
}

json to_json(const ScanResult& s) {
    json points = json::array();
    for (const auto& p : s.points)
        points.push_back({{"param", p.param},
                          {"eps_lo", p.eps_lo},
                          {"eps_hi", p.eps_hi},
                          {"epsilon", p.epsilon},
                          {"width", p.width},
                          {"delta", p.delta},
                          {"minimax", p.minimax},
                          {"budget_outer", p.budget_outer},
                          {"budget_inner", p.budget_inner},
                          {"seed", p.seed}});
    json skipped = json::array();
    for (const auto& k : s.skipped) skipped.push_back({{"param", k.param}, {"reason", k.reason}});
    return {{"family", s.family}, {"points", points}, {"skipped", skipped}};
}

}  // namespace qbc
