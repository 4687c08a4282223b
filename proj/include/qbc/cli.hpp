#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qbc/protocol.hpp"

namespace qbc::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInputError = 2,
    kBracketInversion = 3,
};

enum class Format { Text, Csv, Structured };

struct RunConfig {
    std::string command;  // validate | conceal | bind | bounds | scan
    std::string input_path;
    std::uint64_t seed = 0;
    std::optional<int> restarts;
    std::optional<int> inner_restarts;
    std::optional<int> iterations;
    std::optional<double> tol;
    std::optional<std::string> output_path;
    Format format = Format::Text;
    std::optional<std::string> direction;  // "01" or "10"
    std::optional<std::size_t> ref_dim;
    double completeness_tol = kCompletenessTol;
    int phi_samples = 10;
};

// Runs one command, writing the report to config.output_path or `out`.
// Diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// The report as a JSON document (the structured format); throws on input errors.
nlohmann::json build_report(const RunConfig& config);

std::string render_text(const nlohmann::json& report);
std::string render_csv(const nlohmann::json& report);

// Command-line entry point: parses argv and calls run().
int main(int argc, char** argv);

}  // namespace qbc::cli
