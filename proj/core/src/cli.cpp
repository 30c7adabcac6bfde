#include "tsopt/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsopt/circuit_io.hpp"
#include "tsopt/classical.hpp"
#include "tsopt/metrics.hpp"
#include "tsopt/oracle.hpp"
#include "tsopt/symmetry.hpp"

namespace tsopt {
namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json table_json(const RealMatrix& t) {
  json rows = json::array();
  for (Index i = 0; i < t.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < t.cols(); ++j) row.push_back(t(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void print_matrix(std::ostream& out, const Matrix& m, const std::string& indent) {
  for (Index i = 0; i < m.rows(); ++i) {
    out << indent;
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << "  ";
      out << fmt(m(i, j).real());
      const double im = m(i, j).imag();
      out << (im < 0 ? "-" : "+") << fmt(std::abs(im)) << "i";
    }
    out << "\n";
  }
}

void print_table(std::ostream& out, const RealMatrix& t, const std::string& indent) {
  for (Index i = 0; i < t.rows(); ++i) {
    out << indent;
    for (Index j = 0; j < t.cols(); ++j) {
      if (j > 0) out << "  ";
      out << fmt(t(i, j));
    }
    out << "\n";
  }
}

struct RunConfig {
  unsigned long long seed = kDefaultSeed;
  bool as_json = false;
  double tol = kProbabilityTol;
  int max_dim = kDefaultMaxDim;
};

// TSOPT_MAX_DIM overrides the soft composite-dimension cap.
bool apply_max_dim_env(RunConfig& cfg, std::ostream& err) {
  const char* raw = std::getenv("TSOPT_MAX_DIM");
  if (raw == nullptr || *raw == '\0') return true;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == nullptr || *end != '\0' || v < 1) {
    err << "error: TSOPT_MAX_DIM must be a positive integer, got \"" << raw << "\"\n";
    return false;
  }
  cfg.max_dim = static_cast<int>(v);
  return true;
}

int report_diagnostics(const std::vector<Diagnostic>& diagnostics, const RunConfig& cfg,
                       const std::string& file, const std::string& command,
                       std::ostream& out) {
  if (cfg.as_json) {
    json doc;
    doc["command"] = command;
    doc["file"] = file;
    doc["ok"] = false;
    json list = json::array();
    for (const Diagnostic& d : diagnostics)
      list.push_back({{"code", to_string(d.code)},
                      {"location", d.location},
                      {"message", d.message}});
    doc["diagnostics"] = std::move(list);
    out << doc.dump(2) << "\n";
  } else {
    for (const Diagnostic& d : diagnostics)
      out << to_string(d.code) << " at " << d.location << ": " << d.message << "\n";
  }
  return 2;
}

// Parses the circuit document or reports diagnostics; returns nullopt after
// printing when parsing failed.
std::optional<Circuit> load_circuit(const std::string& file, const RunConfig& cfg,
                                    const std::string& command, std::ostream& out,
                                    int& exit_code) {
  ParseOptions options;
  options.normalization_tol = cfg.tol;
  options.max_dim = cfg.max_dim;
  ParseResult parsed = parse_circuit_file(file, options);
  if (!parsed.ok()) {
    exit_code = report_diagnostics(parsed.diagnostics, cfg, file, command, out);
    return std::nullopt;
  }
  return std::move(parsed.circuit);
}

int eval_command(const std::string& file, const RunConfig& cfg, std::ostream& out) {
  int code = 0;
  const auto circuit = load_circuit(file, cfg, "eval", out, code);
  if (!circuit.has_value()) return code;
  const CircuitDistribution dist = evaluate(*circuit, cfg.max_dim);

  if (cfg.as_json) {
    json doc;
    doc["command"] = "eval";
    doc["file"] = file;
    doc["max_dim"] = cfg.max_dim;
    doc["tolerance"] = {{"normalization", cfg.tol}, {"null_scale", kNullScale}};
    doc["null"] = dist.null;
    doc["nodes"] = dist.node_names;
    doc["outcome_labels"] = dist.outcome_labels;
    doc["probabilities"] = dist.probabilities;
    out << doc.dump(2) << "\n";
  } else {
    out << "file: " << file << "\n";
    out << "status: " << (dist.null ? "null" : "ok") << "\n";
    if (!dist.null) {
      for (Index t = 0; t < dist.n_tuples(); ++t) {
        const std::vector<Index> tuple = dist.tuple(t);
        out << "p(";
        for (std::size_t v = 0; v < dist.node_names.size(); ++v) {
          if (v > 0) out << ", ";
          out << dist.node_names[v] << "="
              << dist.outcome_labels[v][static_cast<std::size_t>(tuple[v])];
        }
        out << ") = " << fmt(dist.probabilities[static_cast<std::size_t>(t)]) << "\n";
      }
    }
  }
  return dist.null ? 3 : 0;
}

int check_command(const std::string& file, const RunConfig& cfg, std::ostream& out) {
  ParseOptions options;
  options.normalization_tol = cfg.tol;
  options.max_dim = cfg.max_dim;
  const ParseResult parsed = parse_circuit_file(file, options);
  if (!parsed.ok()) return report_diagnostics(parsed.diagnostics, cfg, file, "check", out);

  const Circuit& c = *parsed.circuit;
  if (cfg.as_json) {
    json doc;
    doc["command"] = "check";
    doc["file"] = file;
    doc["ok"] = true;
    doc["tolerance"] = {{"normalization", cfg.tol}};
    doc["systems"] = c.systems().size();
    doc["operations"] = c.nodes().size();
    doc["wires"] = c.wires().size();
    out << doc.dump(2) << "\n";
  } else {
    out << "ok: " << c.systems().size() << " systems, " << c.nodes().size()
        << " operations, " << c.wires().size() << " wires (normalization tolerance "
        << fmt(cfg.tol) << ")\n";
  }
  return 0;
}

int classify_command(const std::string& file, const RunConfig& cfg, std::ostream& out) {
  int code = 0;
  const auto circuit = load_circuit(file, cfg, "classify", out, code);
  if (!circuit.has_value()) return code;

  const CircuitDistribution dist = evaluate(*circuit, cfg.max_dim);
  if (cfg.as_json) {
    json doc;
    doc["command"] = "classify";
    doc["file"] = file;
    doc["tolerance"] = {{"standard", cfg.tol}};
    json ops = json::array();
    for (const CircuitNode& n : circuit->nodes())
      ops.push_back({{"name", n.name},
                     {"standard", is_standard(n.op, cfg.tol)},
                     {"outcomes", n.op.n_outcomes()}});
    doc["operations"] = std::move(ops);
    doc["circuit"] = dist.null ? "null" : "ok";
    out << doc.dump(2) << "\n";
  } else {
    for (const CircuitNode& n : circuit->nodes())
      out << n.name << ": " << (is_standard(n.op, cfg.tol) ? "standard" : "non-standard")
          << "\n";
    out << "circuit: " << (dist.null ? "null" : "ok") << "\n";
  }
  return dist.null ? 3 : 0;
}

int reverse_command(const std::string& file, const std::string& s_matrix_path,
                    bool transpose_flag, const RunConfig& cfg, std::ostream& out,
                    std::ostream& err) {
  int code = 0;
  const auto circuit = load_circuit(file, cfg, "reverse", out, code);
  if (!circuit.has_value()) return code;

  bool transpose = transpose_flag;
  std::map<Index, Matrix> s;
  std::map<Index, Matrix> basis;
  bool default_identity = true;
  if (!s_matrix_path.empty()) {
    SymmetryParseResult sym = parse_symmetry_file(s_matrix_path);
    if (!sym.document.has_value())
      return report_diagnostics(sym.diagnostics, cfg, s_matrix_path, "reverse", out);
    if (!sym.document->type_two) {
      err << "error: reversal requires a type-ii symmetry document\n";
      return 2;
    }
    transpose = transpose || sym.document->transpose;
    s = std::move(sym.document->s);
    basis = std::move(sym.document->basis);
    default_identity = false;
  }
  const SymmetryTransform t(SymmetryKind::TypeII, transpose, std::move(s), std::move(basis),
                            default_identity);
  out << serialize_circuit(reverse_circuit(*circuit, t));
  return 0;
}

int classical_demo_command(double p, double q, const RunConfig& cfg, std::ostream& out) {
  const GeneralizedOperation prep = bit_preparation(p).op();
  const GeneralizedOperation meas = distinguishing_measurement(q).op();
  const JointDistribution joint = joint_distribution(prep, meas);
  const auto [b0, b1] = bit_distribution(p, q);
  const BayesUpdateReport bayes = bayes_update_scenario(p, q);

  if (cfg.as_json) {
    json doc;
    doc["command"] = "classical-demo";
    doc["p"] = p;
    doc["q"] = q;
    doc["tolerance"] = {{"bayes", bayes.tolerance}};
    doc["joint"] = table_json(joint.table);
    doc["bit_distribution"] = {b0, b1};
    doc["bayes"] = {{"acceptance", bayes.acceptance},
                    {"consistent", bayes.consistent},
                    {"max_table_deviation", bayes.max_table_deviation},
                    {"measurement_deviation", bayes.measurement_deviation},
                    {"state_deviation", bayes.state_deviation},
                    {"joint3", table_json(bayes.joint3)},
                    {"updated_joint", table_json(bayes.updated_joint)}};
    out << doc.dump(2) << "\n";
  } else {
    out << "p = " << fmt(p) << ", q = " << fmt(q) << "\n";
    out << "joint (rows: preparation outcome, cols: measurement outcome):\n";
    print_table(out, joint.table, "  ");
    out << "bit distribution: p(0) = " << fmt(b0) << ", p(1) = " << fmt(b1) << "\n";
    out << "three-outcome joint:\n";
    print_table(out, bayes.joint3, "  ");
    out << "subset update (acceptance " << fmt(bayes.acceptance) << "):\n";
    print_table(out, bayes.updated_joint, "  ");
    out << "bayes update " << (bayes.consistent ? "consistent" : "INCONSISTENT")
        << " (max table deviation " << fmt(bayes.max_table_deviation)
        << ", measurement deviation " << fmt(bayes.measurement_deviation)
        << ", state deviation " << fmt(bayes.state_deviation) << ", tolerance "
        << fmt(bayes.tolerance) << ")\n";
  }
  return 0;
}

int distance_command(const std::string& file, const RunConfig& cfg, std::ostream& out,
                     std::ostream& err) {
  StateParseResult parsed = parse_state_file(file);
  if (!parsed.document.has_value())
    return report_diagnostics(parsed.diagnostics, cfg, file, "distance", out);
  if (parsed.document->states.size() < 2) {
    err << "error: distance needs a document with at least two states\n";
    return 2;
  }
  const StatePair s1(parsed.document->states[0].first, parsed.document->states[0].second);
  const StatePair s2(parsed.document->states[1].first, parsed.document->states[1].second);
  const DistanceReport report = state_distance(s1, s2, cfg.seed);

  if (cfg.as_json) {
    json doc;
    doc["command"] = "distance";
    doc["file"] = file;
    doc["seed"] = cfg.seed;
    doc["lower_bound"] = report.lower_bound;
    doc["exact"] = report.exact;
    doc["witness_effect"] = {{"effect", matrix_json(report.witness_effect.effect)},
                             {"effect_bar", matrix_json(report.witness_effect.effect_bar)}};
    out << doc.dump(2) << "\n";
  } else {
    out << "distance lower bound = " << fmt(report.lower_bound)
        << (report.exact ? " (exact)" : " (search lower bound)") << ", seed " << cfg.seed
        << "\n";
    out << "witness effect:\n";
    print_matrix(out, report.witness_effect.effect, "  ");
    out << "witness coarse effect:\n";
    print_matrix(out, report.witness_effect.effect_bar, "  ");
  }
  return 0;
}

int oracle_check_command(const std::string& file, const RunConfig& cfg, std::ostream& out,
                         std::ostream& err) {
  int code = 0;
  const auto circuit = load_circuit(file, cfg, "oracle-check", out, code);
  if (!circuit.has_value()) return code;

  const CircuitDistribution engine = evaluate(*circuit, cfg.max_dim);
  const OracleDistribution oracle = enumerate_circuit(*circuit);

  if (engine.null != oracle.null) {
    err << "error: engine and oracle disagree on nullity (engine "
        << (engine.null ? "null" : "ok") << ", oracle " << (oracle.null ? "null" : "ok")
        << ")\n";
    return 2;
  }

  double max_dev = 0.0;
  if (!engine.null) {
    for (std::size_t i = 0; i < engine.probabilities.size(); ++i)
      max_dev = std::max(max_dev,
                         std::abs(engine.probabilities[i] - oracle.probabilities[i]));
  }
  const bool pass = max_dev <= cfg.tol;

  if (cfg.as_json) {
    json doc;
    doc["command"] = "oracle-check";
    doc["file"] = file;
    doc["tolerance"] = {{"comparison", cfg.tol}};
    doc["null"] = engine.null;
    doc["tuples"] = oracle.n_tuples;
    doc["max_deviation"] = max_dev;
    doc["pass"] = pass;
    out << doc.dump(2) << "\n";
  } else {
    out << "file: " << file << "\n";
    if (engine.null) {
      out << "engine and oracle both report the null circuit\n";
    } else {
      out << "tuples: " << oracle.n_tuples << "\n";
      out << "max deviation = " << fmt(max_dev) << " (tolerance " << fmt(cfg.tol) << "): "
          << (pass ? "pass" : "FAIL") << "\n";
    }
  }
  if (engine.null) return 3;
  return pass ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"time-symmetric generalized quantum operations toolkit", "tsopt"};
  app.require_subcommand(1);

  RunConfig cfg;
  if (!apply_max_dim_env(cfg, err)) return 1;

  std::string file;
  std::string s_matrix_path;
  bool transpose_flag = false;
  double p = 0.5;
  double q = 1.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", cfg.as_json, "machine-readable output");
    sub->add_option("--seed", cfg.seed, "seed for randomized procedures");
    sub->add_option("--tol", cfg.tol, "tolerance override");
  };

  CLI::App* eval_sub = app.add_subcommand("eval", "evaluate a circuit's joint distribution");
  eval_sub->add_option("file", file, "circuit document")->required();
  add_common(eval_sub);

  CLI::App* check_sub = app.add_subcommand("check", "validate a circuit document");
  check_sub->add_option("file", file, "circuit document")->required();
  add_common(check_sub);

  CLI::App* classify_sub =
      app.add_subcommand("classify", "label operations standard/non-standard");
  classify_sub->add_option("file", file, "circuit document")->required();
  add_common(classify_sub);

  CLI::App* reverse_sub = app.add_subcommand("reverse", "emit the time-reversed circuit");
  reverse_sub->add_option("file", file, "circuit document")->required();
  reverse_sub->add_option("--s-matrix", s_matrix_path, "symmetry document");
  reverse_sub->add_flag("--transpose", transpose_flag, "use the transpose branch");
  add_common(reverse_sub);

  CLI::App* demo_sub = app.add_subcommand("classical-demo", "run the classical bit example");
  demo_sub->add_option("--p", p, "bit preparation parameter in [0,1]")->required();
  demo_sub->add_option("--q", q, "measurement parameter in (0,2)")->required();
  add_common(demo_sub);

  CLI::App* distance_sub = app.add_subcommand("distance", "operational distance of two states");
  distance_sub->add_option("file", file, "two-state document")->required();
  add_common(distance_sub);

  CLI::App* oracle_sub =
      app.add_subcommand("oracle-check", "compare engine and brute-force oracle");
  oracle_sub->add_option("file", file, "circuit document")->required();
  add_common(oracle_sub);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("tsopt");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (eval_sub->parsed()) return eval_command(file, cfg, out);
    if (check_sub->parsed()) return check_command(file, cfg, out);
    if (classify_sub->parsed()) return classify_command(file, cfg, out);
    if (reverse_sub->parsed())
      return reverse_command(file, s_matrix_path, transpose_flag, cfg, out, err);
    if (demo_sub->parsed()) return classical_demo_command(p, q, cfg, out);
    if (distance_sub->parsed()) return distance_command(file, cfg, out, err);
    if (oracle_sub->parsed()) return oracle_check_command(file, cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "usage error: no command given\n";
  return 1;
}

}  // namespace tsopt
