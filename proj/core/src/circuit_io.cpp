#include "tsopt/circuit_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace tsopt {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::Syntax: return "syntax";
    case DiagnosticCode::Reference: return "reference";
    case DiagnosticCode::Dimension: return "dimension";
    case DiagnosticCode::Normalization: return "normalization";
    case DiagnosticCode::Cycle: return "cycle";
    case DiagnosticCode::OpenWire: return "open-wire";
    case DiagnosticCode::PortConflict: return "port-conflict";
    case DiagnosticCode::Role: return "role";
  }
  return "unknown";
}

namespace {

void emit(std::vector<Diagnostic>& diags, DiagnosticCode code, std::string message,
          std::string location) {
  diags.push_back({code, std::move(message), std::move(location)});
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

// Parses a matrix given as an array of rows of [re, im] pairs.
std::optional<Matrix> parse_matrix(const json& j, std::vector<Diagnostic>& diags,
                                   const std::string& loc) {
  if (!j.is_array() || j.empty()) {
    emit(diags, DiagnosticCode::Syntax, "matrix must be a non-empty array of rows", loc);
    return std::nullopt;
  }
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Matrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.empty()) {
      emit(diags, DiagnosticCode::Syntax, "matrix row must be a non-empty array",
           loc + "/" + std::to_string(r));
      return std::nullopt;
    }
    if (r == 0) {
      cols = row.size();
      m = Matrix::Zero(static_cast<Index>(rows), static_cast<Index>(cols));
    } else if (row.size() != cols) {
      emit(diags, DiagnosticCode::Dimension, "matrix rows have unequal lengths",
           loc + "/" + std::to_string(r));
      return std::nullopt;
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const json& entry = row[c];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number()) {
        emit(diags, DiagnosticCode::Syntax, "matrix entry must be a [re, im] pair",
             loc + "/" + std::to_string(r) + "/" + std::to_string(c));
        return std::nullopt;
      }
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

struct PendingNode {
  std::string name;
  std::vector<std::string> input_systems;
  std::vector<std::string> output_systems;
  std::optional<GeneralizedOperation> op;
  Index dim_in = 1;
  Index dim_out = 1;
};

}  // namespace

ParseResult parse_circuit(const std::string& text, const ParseOptions& options) {
  ParseResult result;
  auto& diags = result.diagnostics;

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    emit(diags, DiagnosticCode::Syntax, e.what(), "byte " + std::to_string(e.byte));
    return result;
  }
  if (!doc.is_object()) {
    emit(diags, DiagnosticCode::Syntax, "document root must be an object", "/");
    return result;
  }

  // systems
  std::vector<SystemLabel> systems;
  std::map<std::string, Index> system_dims;
  if (!doc.contains("systems") || !doc["systems"].is_array()) {
    emit(diags, DiagnosticCode::Syntax, "missing or malformed 'systems' array", "/systems");
    return result;
  }
  for (std::size_t i = 0; i < doc["systems"].size(); ++i) {
    const std::string loc = "/systems/" + std::to_string(i);
    const json& s = doc["systems"][i];
    if (!s.is_object() || !s.contains("name") || !s["name"].is_string() || !s.contains("dim") ||
        !s["dim"].is_number_integer()) {
      emit(diags, DiagnosticCode::Syntax, "system must be {\"name\": ..., \"dim\": ...}", loc);
      continue;
    }
    const std::string name = s["name"].get<std::string>();
    const Index dim = s["dim"].get<Index>();
    if (!valid_name(name)) {
      emit(diags, DiagnosticCode::Syntax, "invalid system name '" + name + "'", loc);
      continue;
    }
    if (system_dims.count(name)) {
      emit(diags, DiagnosticCode::Syntax, "duplicate system '" + name + "'", loc);
      continue;
    }
    if (dim < 1) {
      emit(diags, DiagnosticCode::Dimension, "system '" + name + "' has dimension < 1", loc);
      continue;
    }
    if (dim > options.max_dim) {
      emit(diags, DiagnosticCode::Dimension,
           "system '" + name + "' exceeds the dimension limit " + std::to_string(options.max_dim),
           loc);
      continue;
    }
    systems.push_back({name, dim});
    system_dims[name] = dim;
  }

  // operations
  std::vector<PendingNode> nodes;
  std::map<std::string, int> node_index;
  if (!doc.contains("operations") || !doc["operations"].is_array()) {
    emit(diags, DiagnosticCode::Syntax, "missing or malformed 'operations' array", "/operations");
    return result;
  }
  for (std::size_t i = 0; i < doc["operations"].size(); ++i) {
    const std::string loc = "/operations/" + std::to_string(i);
    const json& o = doc["operations"][i];
    if (!o.is_object() || !o.contains("name") || !o["name"].is_string()) {
      emit(diags, DiagnosticCode::Syntax, "operation must have a string 'name'", loc);
      continue;
    }
    PendingNode node;
    node.name = o["name"].get<std::string>();
    if (!valid_name(node.name)) {
      emit(diags, DiagnosticCode::Syntax, "invalid operation name '" + node.name + "'", loc);
      continue;
    }
    if (node_index.count(node.name)) {
      emit(diags, DiagnosticCode::Syntax, "duplicate operation '" + node.name + "'", loc);
      continue;
    }

    bool ports_ok = true;
    for (const char* key : {"inputs", "outputs"}) {
      if (!o.contains(key) || !o[key].is_array()) {
        emit(diags, DiagnosticCode::Syntax, std::string("operation needs an array '") + key + "'",
             loc);
        ports_ok = false;
        continue;
      }
      for (std::size_t p = 0; p < o[key].size(); ++p) {
        if (!o[key][p].is_string()) {
          emit(diags, DiagnosticCode::Syntax, "port entry must be a system name",
               loc + "/" + key + "/" + std::to_string(p));
          ports_ok = false;
          continue;
        }
        const std::string sys = o[key][p].get<std::string>();
        auto it = system_dims.find(sys);
        if (it == system_dims.end()) {
          emit(diags, DiagnosticCode::Reference, "unknown system '" + sys + "'",
               loc + "/" + key + "/" + std::to_string(p));
          ports_ok = false;
          continue;
        }
        if (std::string(key) == "inputs") {
          node.input_systems.push_back(sys);
          node.dim_in *= it->second;
        } else {
          node.output_systems.push_back(sys);
          node.dim_out *= it->second;
        }
      }
    }
    if (!ports_ok) {
      node_index[node.name] = static_cast<int>(nodes.size());
      nodes.push_back(std::move(node));
      continue;
    }
    if (node.dim_in > options.max_dim || node.dim_out > options.max_dim) {
      emit(diags, DiagnosticCode::Dimension,
           "operation '" + node.name + "' exceeds the dimension limit " +
               std::to_string(options.max_dim),
           loc);
      node_index[node.name] = static_cast<int>(nodes.size());
      nodes.push_back(std::move(node));
      continue;
    }

    if (!o.contains("outcomes") || !o["outcomes"].is_array() || o["outcomes"].empty()) {
      emit(diags, DiagnosticCode::Syntax, "operation needs a non-empty 'outcomes' array", loc);
      node_index[node.name] = static_cast<int>(nodes.size());
      nodes.push_back(std::move(node));
      continue;
    }

    std::vector<CPMap> maps;
    std::vector<std::string> labels;
    bool outcomes_ok = true;
    double total_weight = 0.0;
    for (std::size_t k = 0; k < o["outcomes"].size(); ++k) {
      const std::string oloc = loc + "/outcomes/" + std::to_string(k);
      const json& outcome = o["outcomes"][k];
      if (!outcome.is_object() || !outcome.contains("kraus") || !outcome["kraus"].is_array()) {
        emit(diags, DiagnosticCode::Syntax, "outcome needs a 'kraus' array", oloc);
        outcomes_ok = false;
        continue;
      }
      labels.push_back(outcome.contains("label") && outcome["label"].is_string()
                           ? outcome["label"].get<std::string>()
                           : std::to_string(k));
      std::vector<Matrix> kraus;
      for (std::size_t a = 0; a < outcome["kraus"].size(); ++a) {
        auto m = parse_matrix(outcome["kraus"][a], diags, oloc + "/kraus/" + std::to_string(a));
        if (!m) {
          outcomes_ok = false;
          continue;
        }
        if (m->rows() != node.dim_out || m->cols() != node.dim_in) {
          emit(diags, DiagnosticCode::Dimension,
               "Kraus operator must be " + std::to_string(node.dim_out) + "x" +
                   std::to_string(node.dim_in) + " for operation '" + node.name + "'",
               oloc + "/kraus/" + std::to_string(a));
          outcomes_ok = false;
          continue;
        }
        kraus.push_back(std::move(*m));
      }
      if (outcomes_ok) {
        maps.emplace_back(std::move(kraus), node.dim_in, node.dim_out);
        total_weight += maps.back().weight();
      }
    }
    if (outcomes_ok) {
      if (std::abs(total_weight - 1.0) > options.normalization_tol) {
        std::ostringstream msg;
        msg << "operation '" << node.name << "' has weight " << total_weight
            << " (must be 1 within " << options.normalization_tol << ")";
        emit(diags, DiagnosticCode::Normalization, msg.str(), loc);
      } else {
        node.op.emplace(std::move(maps), std::move(labels));
      }
    }
    node_index[node.name] = static_cast<int>(nodes.size());
    nodes.push_back(std::move(node));
  }

  // wiring
  std::vector<CircuitWire> wires;
  std::set<std::pair<int, int>> used_out, used_in;
  if (!doc.contains("wiring") || !doc["wiring"].is_array()) {
    emit(diags, DiagnosticCode::Syntax, "missing or malformed 'wiring' array", "/wiring");
    return result;
  }
  const auto parse_endpoint = [&](const json& j, const std::string& loc, bool output_side)
      -> std::optional<std::pair<int, int>> {
    if (!j.is_string()) {
      emit(diags, DiagnosticCode::Syntax, "wire endpoint must be a string 'node.port'", loc);
      return std::nullopt;
    }
    const std::string s = j.get<std::string>();
    const auto dot = s.rfind('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 >= s.size()) {
      emit(diags, DiagnosticCode::Syntax, "wire endpoint '" + s + "' must be 'node.port'", loc);
      return std::nullopt;
    }
    const std::string name = s.substr(0, dot);
    int port = -1;
    try {
      std::size_t pos = 0;
      port = std::stoi(s.substr(dot + 1), &pos);
      if (pos != s.size() - dot - 1) port = -1;
    } catch (...) {
      port = -1;
    }
    if (port < 0) {
      emit(diags, DiagnosticCode::Syntax, "wire endpoint '" + s + "' has an invalid port", loc);
      return std::nullopt;
    }
    auto it = node_index.find(name);
    if (it == node_index.end()) {
      emit(diags, DiagnosticCode::Reference, "unknown operation '" + name + "'", loc);
      return std::nullopt;
    }
    const PendingNode& node = nodes[static_cast<std::size_t>(it->second)];
    const std::size_t n_ports =
        output_side ? node.output_systems.size() : node.input_systems.size();
    if (static_cast<std::size_t>(port) >= n_ports) {
      emit(diags, DiagnosticCode::Reference,
           "operation '" + name + "' has no " + (output_side ? "output" : "input") + " port " +
               std::to_string(port),
           loc);
      return std::nullopt;
    }
    return std::make_pair(it->second, port);
  };

  for (std::size_t i = 0; i < doc["wiring"].size(); ++i) {
    const std::string loc = "/wiring/" + std::to_string(i);
    const json& w = doc["wiring"][i];
    if (!w.is_object() || !w.contains("from") || !w.contains("to")) {
      emit(diags, DiagnosticCode::Syntax, "wire must be {\"from\": ..., \"to\": ...}", loc);
      continue;
    }
    const auto from = parse_endpoint(w["from"], loc + "/from", true);
    const auto to = parse_endpoint(w["to"], loc + "/to", false);
    if (!from || !to) continue;
    if (!used_out.insert(*from).second) {
      emit(diags, DiagnosticCode::PortConflict,
           "output port '" + w["from"].get<std::string>() + "' wired more than once",
           loc + "/from");
      continue;
    }
    if (!used_in.insert(*to).second) {
      emit(diags, DiagnosticCode::PortConflict,
           "input port '" + w["to"].get<std::string>() + "' wired more than once", loc + "/to");
      continue;
    }
    const std::string& produced =
        nodes[static_cast<std::size_t>(from->first)].output_systems[static_cast<std::size_t>(from->second)];
    const std::string& consumed =
        nodes[static_cast<std::size_t>(to->first)].input_systems[static_cast<std::size_t>(to->second)];
    if (produced != consumed) {
      emit(diags, DiagnosticCode::Dimension,
           "wire connects system '" + produced + "' to system '" + consumed + "'", loc);
      continue;
    }
    wires.push_back({from->first, from->second, to->first, to->second});
  }

  // Closedness: every declared port must appear in exactly one wire.
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    for (std::size_t p = 0; p < nodes[n].output_systems.size(); ++p) {
      if (!used_out.count({static_cast<int>(n), static_cast<int>(p)})) {
        emit(diags, DiagnosticCode::OpenWire,
             "output port '" + nodes[n].name + "." + std::to_string(p) + "' is not wired",
             "/operations");
      }
    }
    for (std::size_t p = 0; p < nodes[n].input_systems.size(); ++p) {
      if (!used_in.count({static_cast<int>(n), static_cast<int>(p)})) {
        emit(diags, DiagnosticCode::OpenWire,
             "input port '" + nodes[n].name + "." + std::to_string(p) + "' is not wired",
             "/operations");
      }
    }
  }

  // Acyclicity.
  {
    std::vector<int> indegree(nodes.size(), 0);
    for (const CircuitWire& w : wires) indegree[static_cast<std::size_t>(w.to_node)]++;
    std::vector<int> queue;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      if (indegree[n] == 0) queue.push_back(static_cast<int>(n));
    }
    std::size_t processed = 0;
    while (!queue.empty()) {
      const int n = queue.back();
      queue.pop_back();
      ++processed;
      for (const CircuitWire& w : wires) {
        if (w.from_node == n && --indegree[static_cast<std::size_t>(w.to_node)] == 0) {
          queue.push_back(w.to_node);
        }
      }
    }
    if (processed != nodes.size()) {
      emit(diags, DiagnosticCode::Cycle, "wiring contains a cycle", "/wiring");
    }
  }

  // roles
  if (doc.contains("roles")) {
    if (!doc["roles"].is_object()) {
      emit(diags, DiagnosticCode::Syntax, "'roles' must be an object", "/roles");
    } else {
      for (const auto& [name, value] : doc["roles"].items()) {
        const std::string loc = "/roles/" + name;
        auto it = node_index.find(name);
        if (it == node_index.end()) {
          emit(diags, DiagnosticCode::Reference, "role for unknown operation '" + name + "'", loc);
          continue;
        }
        if (!value.is_string()) {
          emit(diags, DiagnosticCode::Syntax, "role must be a string", loc);
          continue;
        }
        const std::string role = value.get<std::string>();
        const PendingNode& node = nodes[static_cast<std::size_t>(it->second)];
        if (role == "preparation") {
          if (!node.input_systems.empty()) {
            emit(diags, DiagnosticCode::Role,
                 "operation '" + name + "' is tagged preparation but has inputs", loc);
          }
        } else if (role == "measurement") {
          if (!node.output_systems.empty()) {
            emit(diags, DiagnosticCode::Role,
                 "operation '" + name + "' is tagged measurement but has outputs", loc);
          }
        } else if (role != "transformation") {
          emit(diags, DiagnosticCode::Syntax, "unknown role '" + role + "'", loc);
        }
      }
    }
  }

  if (!diags.empty()) return result;

  std::vector<CircuitNode> circuit_nodes;
  circuit_nodes.reserve(nodes.size());
  for (PendingNode& n : nodes) {
    circuit_nodes.push_back(
        {std::move(n.name), std::move(n.input_systems), std::move(n.output_systems),
         std::move(*n.op)});
  }
  Circuit circuit(std::move(systems), std::move(circuit_nodes), std::move(wires));
  try {
    circuit.validate();
  } catch (const Error& e) {
    // Anything the section checks above missed surfaces as a generic
    // structural diagnostic rather than an exception.
    emit(diags, DiagnosticCode::Syntax, e.what(), "/");
    return result;
  }
  result.circuit = std::move(circuit);
  return result;
}

namespace {

std::optional<std::string> read_file(const std::string& path, std::vector<Diagnostic>& diags) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    emit(diags, DiagnosticCode::Syntax, "cannot open file '" + path + "'", path);
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ParseResult parse_circuit_file(const std::string& path, const ParseOptions& options) {
  ParseResult result;
  auto text = read_file(path, result.diagnostics);
  if (!text) return result;
  return parse_circuit(*text, options);
}

std::string serialize_circuit(const Circuit& c) {
  ordered_json doc;
  doc["systems"] = ordered_json::array();
  for (const SystemLabel& s : c.systems()) {
    doc["systems"].push_back({{"name", s.name}, {"dim", s.dim}});
  }
  doc["operations"] = ordered_json::array();
  for (const CircuitNode& n : c.nodes()) {
    ordered_json op;
    op["name"] = n.name;
    op["inputs"] = n.input_systems;
    op["outputs"] = n.output_systems;
    op["outcomes"] = ordered_json::array();
    for (Index i = 0; i < n.op.n_outcomes(); ++i) {
      ordered_json outcome;
      outcome["label"] = n.op.labels()[static_cast<std::size_t>(i)];
      outcome["kraus"] = ordered_json::array();
      for (const Matrix& k : n.op.map(i).kraus()) {
        outcome["kraus"].push_back(matrix_to_json(k));
      }
      op["outcomes"].push_back(std::move(outcome));
    }
    doc["operations"].push_back(std::move(op));
  }
  doc["wiring"] = ordered_json::array();
  for (const CircuitWire& w : c.wires()) {
    const std::string from =
        c.nodes()[static_cast<std::size_t>(w.from_node)].name + "." + std::to_string(w.from_port);
    const std::string to =
        c.nodes()[static_cast<std::size_t>(w.to_node)].name + "." + std::to_string(w.to_port);
    doc["wiring"].push_back({{"from", from}, {"to", to}});
  }
  doc["roles"] = ordered_json::object();
  for (const CircuitNode& n : c.nodes()) {
    if (n.input_systems.empty() && !n.output_systems.empty()) {
      doc["roles"][n.name] = "preparation";
    } else if (n.output_systems.empty() && !n.input_systems.empty()) {
      doc["roles"][n.name] = "measurement";
    } else {
      doc["roles"][n.name] = "transformation";
    }
  }
  return doc.dump(2) + "\n";
}

SymmetryParseResult parse_symmetry_document(const std::string& text) {
  SymmetryParseResult result;
  auto& diags = result.diagnostics;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    emit(diags, DiagnosticCode::Syntax, e.what(), "byte " + std::to_string(e.byte));
    return result;
  }
  if (!doc.is_object()) {
    emit(diags, DiagnosticCode::Syntax, "document root must be an object", "/");
    return result;
  }
  SymmetryDocument out;
  if (doc.contains("kind")) {
    if (!doc["kind"].is_string()) {
      emit(diags, DiagnosticCode::Syntax, "'kind' must be a string", "/kind");
    } else {
      const std::string kind = doc["kind"].get<std::string>();
      if (kind == "type-i") {
        out.type_two = false;
      } else if (kind == "type-ii") {
        out.type_two = true;
      } else {
        emit(diags, DiagnosticCode::Syntax, "unknown kind '" + kind + "'", "/kind");
      }
    }
  }
  if (doc.contains("transpose")) {
    if (!doc["transpose"].is_boolean()) {
      emit(diags, DiagnosticCode::Syntax, "'transpose' must be a boolean", "/transpose");
    } else {
      out.transpose = doc["transpose"].get<bool>();
    }
  }
  for (const char* section : {"s", "basis"}) {
    if (!doc.contains(section)) continue;
    if (!doc[section].is_object()) {
      emit(diags, DiagnosticCode::Syntax, std::string("'") + section + "' must be an object",
           std::string("/") + section);
      continue;
    }
    for (const auto& [key, value] : doc[section].items()) {
      const std::string loc = std::string("/") + section + "/" + key;
      Index dim = 0;
      try {
        std::size_t pos = 0;
        dim = std::stol(key, &pos);
        if (pos != key.size()) dim = 0;
      } catch (...) {
        dim = 0;
      }
      if (dim < 1) {
        emit(diags, DiagnosticCode::Syntax, "key must be a positive dimension", loc);
        continue;
      }
      auto m = parse_matrix(value, diags, loc);
      if (!m) continue;
      if (m->rows() != dim || m->cols() != dim) {
        emit(diags, DiagnosticCode::Dimension,
             "matrix for dimension " + key + " is " + std::to_string(m->rows()) + "x" +
                 std::to_string(m->cols()),
             loc);
        continue;
      }
      (std::string(section) == "s" ? out.s : out.basis)[dim] = std::move(*m);
    }
  }
  if (diags.empty()) result.document = std::move(out);
  return result;
}

SymmetryParseResult parse_symmetry_file(const std::string& path) {
  SymmetryParseResult result;
  auto text = read_file(path, result.diagnostics);
  if (!text) return result;
  return parse_symmetry_document(*text);
}

StateParseResult parse_state_document(const std::string& text) {
  StateParseResult result;
  auto& diags = result.diagnostics;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    emit(diags, DiagnosticCode::Syntax, e.what(), "byte " + std::to_string(e.byte));
    return result;
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc["dim"].is_number_integer() ||
      !doc.contains("states") || !doc["states"].is_array()) {
    emit(diags, DiagnosticCode::Syntax, "document must have integer 'dim' and array 'states'",
         "/");
    return result;
  }
  StateDocument out;
  out.dim = doc["dim"].get<Index>();
  if (out.dim < 1) {
    emit(diags, DiagnosticCode::Dimension, "'dim' must be at least 1", "/dim");
    return result;
  }
  for (std::size_t i = 0; i < doc["states"].size(); ++i) {
    const std::string loc = "/states/" + std::to_string(i);
    const json& s = doc["states"][i];
    if (!s.is_object() || !s.contains("rho") || !s.contains("rho_bar")) {
      emit(diags, DiagnosticCode::Syntax, "state must be {\"rho\": ..., \"rho_bar\": ...}", loc);
      continue;
    }
    auto rho = parse_matrix(s["rho"], diags, loc + "/rho");
    auto rho_bar = parse_matrix(s["rho_bar"], diags, loc + "/rho_bar");
    if (!rho || !rho_bar) continue;
    if (rho->rows() != out.dim || rho->cols() != out.dim || rho_bar->rows() != out.dim ||
        rho_bar->cols() != out.dim) {
      emit(diags, DiagnosticCode::Dimension, "state matrices must be dim x dim", loc);
      continue;
    }
    out.states.emplace_back(std::move(*rho), std::move(*rho_bar));
  }
  if (diags.empty()) result.document = std::move(out);
  return result;
}

StateParseResult parse_state_file(const std::string& path) {
  StateParseResult result;
  auto text = read_file(path, result.diagnostics);
  if (!text) return result;
  return parse_state_document(*text);
}

}  // namespace tsopt
