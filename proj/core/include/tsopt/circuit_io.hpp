#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsopt/circuit.hpp"

// Circuit documents are JSON with four sections:
//
//   {
//     "systems":    [ {"name": "A", "dim": 2}, ... ],
//     "operations": [ {"name": "P", "inputs": [], "outputs": ["A"],
//                      "outcomes": [ {"label": "0", "kraus": [matrix, ...]}, ... ]}, ... ],
//     "wiring":     [ {"from": "P.0", "to": "M.0"}, ... ],
//     "roles":      { "P": "preparation", "M": "measurement" }   (optional)
//   }
//
// A matrix is an array of rows; each entry is a [re, im] pair, so the flat
// reading order is row-major. A Kraus operator for an operation with input
// dimension din and output dimension dout has dout rows and din columns.
// Wire endpoints name output ports on the producer ("P.0" is output port 0
// of node P) and input ports on the consumer. Every operation must satisfy
// the weight normalization Tr(M̄(1/din)) = 1 within the parse tolerance.

namespace tsopt {

enum class DiagnosticCode {
  Syntax,         // unparseable JSON or malformed document structure
  Reference,      // unknown system, node, or port name
  Dimension,      // matrix shape or port dimension mismatch
  Normalization,  // operation weight differs from one
  Cycle,          // wiring is not acyclic
  OpenWire,       // port with no wire attached
  PortConflict,   // port with more than one wire attached
  Role,           // role tag inconsistent with the node's ports
};

std::string to_string(DiagnosticCode code);

struct Diagnostic {
  DiagnosticCode code;
  std::string message;
  std::string location;  // JSON-pointer-style path into the document
};

struct ParseResult {
  std::optional<Circuit> circuit;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return circuit.has_value() && diagnostics.empty(); }
};

struct ParseOptions {
  double normalization_tol = kProbabilityTol;
  int max_dim = kDefaultMaxDim;
};

ParseResult parse_circuit(const std::string& text, const ParseOptions& options = {});
ParseResult parse_circuit_file(const std::string& path, const ParseOptions& options = {});

std::string serialize_circuit(const Circuit& c);

// Symmetry document: an invertible matrix per system dimension plus the
// branch flags.
//
//   { "kind": "type-ii", "transpose": true,
//     "s": { "2": matrix, "3": matrix }, "basis": { "2": matrix } }
struct SymmetryDocument {
  bool type_two = true;
  bool transpose = false;
  std::map<Index, Matrix> s;
  std::map<Index, Matrix> basis;
};

struct SymmetryParseResult {
  std::optional<SymmetryDocument> document;
  std::vector<Diagnostic> diagnostics;
};

SymmetryParseResult parse_symmetry_document(const std::string& text);
SymmetryParseResult parse_symmetry_file(const std::string& path);

// Two-state document for distance computations:
//
//   { "dim": 2, "states": [ {"rho": matrix, "rho_bar": matrix}, ... ] }
struct StateDocument {
  Index dim = 0;
  std::vector<std::pair<Matrix, Matrix>> states;  // (rho, rho_bar)
};

struct StateParseResult {
  std::optional<StateDocument> document;
  std::vector<Diagnostic> diagnostics;
};

StateParseResult parse_state_document(const std::string& text);
StateParseResult parse_state_file(const std::string& path);

}  // namespace tsopt
