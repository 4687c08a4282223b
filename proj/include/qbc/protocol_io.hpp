#pragma once

// Protocol files are JSON documents:
//
//   {
//     "label": "Z vs X dephasing",
//     "dim_in": 2, "dim_out": 2,
//     "bit0": [ <op>, ... ], "bit1": [ <op>, ... ],
//     "secret": { "p": [0.5, 0.5], "outcome_counts": [1, 1] }     (optional)
//   }
//
// where <op> is an array of dim_out rows, each an array of dim_in [re, im]
// pairs.

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "qbc/bounds.hpp"
#include "qbc/protocol.hpp"
#include "qbc/scan.hpp"

namespace qbc {

class ParseError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Builds the spec with zero-padding but without the completeness gate.
ProtocolSpec protocol_from_json(const nlohmann::json& doc);
nlohmann::json protocol_to_json(const ProtocolSpec& spec);

// Reads, pads and validates; throws ParseError or ProtocolError.
ProtocolSpec parse_protocol_file(const std::filesystem::path& path, double tol = kCompletenessTol);
ProtocolSpec parse_protocol_text(const std::string& text, double tol = kCompletenessTol);
std::string serialize_protocol(const ProtocolSpec& spec);

nlohmann::json to_json(const ComplexMatrix& m);
nlohmann::json to_json(const StateVector& s);
nlohmann::json to_json(const SolverTrace& t);
nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const ConcealmentReport& r);
nlohmann::json to_json(const BindingReport& r);
nlohmann::json to_json(const BoundCheck& b);
nlohmann::json to_json(const KrausGapSearch& k);
nlohmann::json to_json(const ScanResult& s);

ComplexMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace qbc
