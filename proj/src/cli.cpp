#include "qbc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qbc/binding.hpp"
#include "qbc/bounds.hpp"
#include "qbc/concealment.hpp"
#include "qbc/protocol_io.hpp"
#include "qbc/scan.hpp"

namespace qbc::cli {

using nlohmann::json;

namespace {

const char* format_name(Format f) {
    switch (f) {
        case Format::Text: return "text";
        case Format::Csv: return "csv";
        case Format::Structured: return "structured";
    }
    return "text";
}

ProtocolSpec load(const RunConfig& c) { return parse_protocol_file(c.input_path, c.completeness_tol); }

ConcealmentOptions conceal_options(const RunConfig& c) {
    ConcealmentOptions o;
    o.seed = c.seed;
    if (c.restarts) o.restarts = *c.restarts;
    if (c.iterations) o.max_iterations = *c.iterations;
    if (c.tol) o.tol = *c.tol;
    o.ref_dim = c.ref_dim;
    return o;
}

BindingOptions binding_options(const RunConfig& c) {
    BindingOptions o;
    o.seed = c.seed;
    if (c.restarts) o.outer_restarts = *c.restarts;
    if (c.inner_restarts) o.inner_restarts = *c.inner_restarts;
    if (c.iterations) o.outer_iterations = o.inner_iterations = *c.iterations;
    if (c.tol) o.tol = *c.tol;
    return o;
}

CheatDirection parse_direction(const std::string& s) {
    if (s == "01") return CheatDirection::ZeroToOne;
    if (s == "10") return CheatDirection::OneToZero;
    throw ParseError("direction must be 01 or 10");
}

json provenance(const RunConfig& c) {
    json p = {{"command", c.command},
              {"input_path", c.input_path},
              {"seed", c.seed},
              {"completeness_tol", c.completeness_tol},
              {"format", format_name(c.format)}};
    p["restarts"] = c.restarts ? json(*c.restarts) : json(nullptr);
    p["inner_restarts"] = c.inner_restarts ? json(*c.inner_restarts) : json(nullptr);
    p["iterations"] = c.iterations ? json(*c.iterations) : json(nullptr);
    p["tol"] = c.tol ? json(*c.tol) : json(nullptr);
    p["ref_dim"] = c.ref_dim ? json(*c.ref_dim) : json(nullptr);
    return p;
}

json validate_report(const RunConfig& c) {
    std::ifstream in(c.input_path);
    if (!in) throw ParseError("cannot open protocol file " + c.input_path);
    std::stringstream ss;
    ss << in.rdbuf();
    json doc;
    try {
        doc = json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed protocol document: ") + e.what());
    }
    const auto spec = protocol_from_json(doc);
    const auto rep = validate(spec, c.completeness_tol);
    return {{"protocol_label", spec.label},
            {"dim_in", spec.dim_in()},
            {"dim_out", spec.dim_out()},
            {"cardinality", spec.cardinality()},
            {"validation", to_json(rep)}};
}

json binding_block(const ProtocolSpec& spec, const RunConfig& c) {
    const auto opt = binding_options(c);
    const auto r01 = minimax_cheat(spec, opt, CheatDirection::ZeroToOne);
    const auto r10 = minimax_cheat(spec, opt, CheatDirection::OneToZero);
    const auto headline = c.direction ? parse_direction(*c.direction) : CheatDirection::ZeroToOne;
    const auto& h = headline == CheatDirection::ZeroToOne ? r01 : r10;
    return {{"direction", to_string(headline)},
            {"minimax_estimate", h.minimax_estimate},
            {"directions", {{"01", to_json(r01)}, {"10", to_json(r10)}}}};
}

json scan_report(const RunConfig& c) {
    std::ifstream in(c.input_path);
    if (!in) throw ParseError("cannot open scan config " + c.input_path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed scan config: ") + e.what());
    }
    if (!cfg.is_object() || !cfg.contains("family") || !cfg.contains("params") || !cfg["params"].is_array())
        throw ParseError("scan config needs 'family' and a 'params' array");
    std::vector<double> params;
    for (const auto& p : cfg["params"]) {
        if (!p.is_number()) throw ParseError("scan params must be numbers");
        params.push_back(p.get<double>());
    }
    const auto name = cfg["family"].get<std::string>();
    ProtocolFamily fam;
    if (name == "decoy") {
        fam = decoy_family(cfg.value("angle", 0.7853981633974483));
    } else if (name == "constant") {
        if (!cfg.contains("protocol")) throw ParseError("constant family needs a 'protocol' path");
        std::filesystem::path p = cfg["protocol"].get<std::string>();
        if (p.is_relative()) p = std::filesystem::path(c.input_path).parent_path() / p;
        fam = constant_family(parse_protocol_file(p, c.completeness_tol));
    } else {
        throw ParseError("unknown family '" + name + "'");
    }

    ScanBudgets b;
    b.conceal.seed = b.bind.seed = c.seed;
    if (c.restarts) b.conceal.restarts = b.bind.outer_restarts = *c.restarts;
    if (c.inner_restarts) b.bind.inner_restarts = *c.inner_restarts;
    if (c.iterations) b.conceal.max_iterations = b.bind.outer_iterations = b.bind.inner_iterations = *c.iterations;
    if (c.tol) b.conceal.tol = b.bind.tol = *c.tol;
    b.conceal.ref_dim = c.ref_dim;
    const auto scan = epsilon_delta_scan(fam, params, b, c.seed);
    json out = {{"scan", to_json(scan)}, {"csv", scan_csv(scan)}};
    return out;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows,
             bool scalars_only) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows, scalars_only);
    } else if (j.is_array()) {
        if (scalars_only) return;
        rows.emplace_back(prefix, j.dump());
    } else if (j.is_string()) {
        rows.emplace_back(prefix, j.get<std::string>());
    } else {
        rows.emplace_back(prefix, j.dump());
    }
}

}  // namespace

json build_report(const RunConfig& c) {
    json report;
    if (c.command == "validate") {
        report = validate_report(c);
    } else if (c.command == "scan") {
        report = scan_report(c);
    } else {
        const auto spec = load(c);
        report["protocol_label"] = spec.label;
        if (c.command == "conceal") {
            report["concealment"] = to_json(analyze_concealment(spec, conceal_options(c)));
        } else if (c.command == "bind") {
            report["binding"] = binding_block(spec, c);
        } else if (c.command == "bounds") {
            const auto copt = conceal_options(c);
            const auto conceal = analyze_concealment(spec, copt);
            const int gap_restarts = c.restarts.value_or(8);
            const auto search = minimize_kraus_gap(spec, gap_restarts, c.seed);
            const auto at = [&](const CheatUnitary& v) {
                std::vector<StateVector> phis;
                for (int k = 0; k < c.phi_samples; ++k)
                    phis.push_back(random_state(spec.dim_in(), derive_seed(c.seed, 0xb0, static_cast<std::uint64_t>(k))));
                return to_json(check_bounds(spec, v, std::move(phis), conceal.cb_lower, conceal.cb_upper));
            };
            report["concealment"] = to_json(conceal);
            report["bounds"] = {{"identity", at(CheatUnitary::identity(spec.cardinality()))},
                                {"minimized", at(search.v)},
                                {"kraus_gap_search", to_json(search)}};
        } else {
            throw ParseError("unknown command '" + c.command + "'");
        }
    }
    report["provenance"] = provenance(c);
    return report;
}

std::string render_text(const json& report) {
    std::vector<std::pair<std::string, std::string>> rows;
    json body = report;
    body.erase("csv");
    flatten(body, "", rows, false);
    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.first.size());
    std::ostringstream os;
    for (const auto& [k, v] : rows) os << k << std::string(width - k.size() + 2, ' ') << v << '\n';
    return os.str();
}

std::string render_csv(const json& report) {
    if (report.contains("csv")) return report["csv"].get<std::string>();
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(report, "", rows, true);
    std::ostringstream os;
    os << "field,value\n";
    for (const auto& [k, v] : rows) {
        os << k << ',';
        if (v.find_first_of(",\"\n") != std::string::npos) {
            os << '"';
            for (char ch : v) os << (ch == '"' ? std::string("\"\"") : std::string(1, ch));
            os << '"';
        } else {
            os << v;
        }
        os << '\n';
    }
    return os.str();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    json report;
    int code = kOk;
    try {
        report = build_report(config);
        if (config.command == "validate" && !report["validation"]["accepted"].get<bool>()) code = kInputError;
    } catch (const ProtocolError& e) {
        err << "error: " << e.what() << '\n';
        report = {{"validation", to_json(e.report())}, {"provenance", provenance(config)}};
        code = kInputError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const DimensionError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const BracketInversion& e) {
        err << "error: " << e.what() << '\n';
        return kBracketInversion;
    }

    std::string text;
    switch (config.format) {
        case Format::Text: text = render_text(report); break;
        case Format::Csv: text = render_csv(report); break;
        case Format::Structured: {
            json body = report;
            body.erase("csv");
            text = body.dump(2) + "\n";
            break;
        }
    }
    if (config.output_path) {
        std::ofstream f(*config.output_path, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << *config.output_path << '\n';
            return kInputError;
        }
        f << text;
    } else {
        out << text;
    }
    return code;
}

int main(int argc, char** argv) {
    CLI::App app{"Analyze single-step quantum bit commitment protocols given as Kraus families."};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string format = "text";
    std::map<std::string, Format> formats{{"text", Format::Text}, {"csv", Format::Csv}, {"structured", Format::Structured}};

    const auto add_common = [&](CLI::App* sub, const char* input_help) {
        sub->add_option("input", cfg.input_path, input_help)->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", cfg.seed, "Base seed for every randomized search")->capture_default_str();
        sub->add_option("--output,-o", cfg.output_path, "Write the report here instead of stdout");
        sub->add_option("--format", format, "text, csv or structured (JSON)")
            ->check(CLI::IsMember({"text", "csv", "structured"}))
            ->capture_default_str();
        sub->add_option("--completeness-tol", cfg.completeness_tol, "Tolerance on sum E^dagger E = I")->capture_default_str();
    };
    const auto add_search = [&](CLI::App* sub) {
        sub->add_option("--restarts", cfg.restarts, "Restarts (conceal: state search, default 16; bind: outer, default 8)");
        sub->add_option("--iterations", cfg.iterations, "Iteration cap per restart (default 500; bind outer 200)");
        sub->add_option("--tol", cfg.tol, "Gradient tolerance (default 1e-8)");
        sub->add_option("--ref-dim", cfg.ref_dim, "Reference dimension for the cb search (default dim_in)");
    };

    auto* v = app.add_subcommand("validate", "Check dimensions and completeness of a protocol file");
    add_common(v, "Protocol file");
    auto* c = app.add_subcommand("conceal", "Bracket the cb-norm distance and Bob's guessing probability");
    add_common(c, "Protocol file");
    add_search(c);
    auto* b = app.add_subcommand("bind", "Estimate Alice's max-min cheating probability in both directions");
    add_common(b, "Protocol file");
    add_search(b);
    b->add_option("--inner-restarts", cfg.inner_restarts, "Restarts of the inner state search (default 16)");
    b->add_option("--direction", cfg.direction, "Direction shown as the headline estimate (default 01)")
        ->check(CLI::IsMember({"01", "10"}));
    auto* bd = app.add_subcommand("bounds", "Check the cb-norm and cheating bounds in terms of the Kraus gap");
    add_common(bd, "Protocol file");
    add_search(bd);
    bd->add_option("--phi-samples", cfg.phi_samples, "Random states for the cheating bound")->capture_default_str();
    auto* s = app.add_subcommand("scan", "Epsilon/delta scan over a protocol family");
    add_common(s, "Scan config (JSON: family, params, angle or protocol)");
    add_search(s);
    s->add_option("--inner-restarts", cfg.inner_restarts, "Restarts of the inner state search (default 4)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.format = formats.at(format);
    return run(cfg, std::cout, std::cerr);
}

}  // namespace qbc::cli
