#include "tsopt/circuit.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include <Eigen/Eigenvalues>

namespace tsopt {

Circuit::Circuit(std::vector<SystemLabel> systems, std::vector<CircuitNode> nodes,
                 std::vector<CircuitWire> wires)
    : systems_(std::move(systems)), nodes_(std::move(nodes)), wires_(std::move(wires)) {}

Index Circuit::system_dim(const std::string& name) const {
  for (const SystemLabel& s : systems_) {
    if (s.name == name) return s.dim;
  }
  throw StructuralError("circuit: unknown system '" + name + "'");
}

void Circuit::validate() const {
  std::set<std::string> seen_systems;
  for (const SystemLabel& s : systems_) {
    if (s.name.empty()) throw StructuralError("circuit: empty system name");
    if (s.dim < 1) throw StructuralError("circuit: system '" + s.name + "' has dimension < 1");
    if (!seen_systems.insert(s.name).second) {
      throw StructuralError("circuit: duplicate system '" + s.name + "'");
    }
  }

  std::set<std::string> seen_nodes;
  for (const CircuitNode& n : nodes_) {
    if (n.name.empty()) throw StructuralError("circuit: empty node name");
    if (!seen_nodes.insert(n.name).second) {
      throw StructuralError("circuit: duplicate node '" + n.name + "'");
    }
    Index din = 1, dout = 1;
    for (const std::string& s : n.input_systems) din *= system_dim(s);
    for (const std::string& s : n.output_systems) dout *= system_dim(s);
    if (n.op.dim_in() != din || n.op.dim_out() != dout) {
      throw StructuralError("circuit: node '" + n.name +
                            "' operation dimensions do not match its ports");
    }
  }

  // Every port carries exactly one wire.
  std::set<std::pair<int, int>> used_out, used_in;
  for (const CircuitWire& w : wires_) {
    if (w.from_node < 0 || w.from_node >= static_cast<int>(nodes_.size()) || w.to_node < 0 ||
        w.to_node >= static_cast<int>(nodes_.size())) {
      throw StructuralError("circuit: wire references an unknown node");
    }
    const CircuitNode& from = nodes_[static_cast<std::size_t>(w.from_node)];
    const CircuitNode& to = nodes_[static_cast<std::size_t>(w.to_node)];
    if (w.from_port < 0 || w.from_port >= static_cast<int>(from.output_systems.size())) {
      throw StructuralError("circuit: wire leaves an unknown port of '" + from.name + "'");
    }
    if (w.to_port < 0 || w.to_port >= static_cast<int>(to.input_systems.size())) {
      throw StructuralError("circuit: wire enters an unknown port of '" + to.name + "'");
    }
    if (!used_out.insert({w.from_node, w.from_port}).second) {
      throw StructuralError("circuit: output port of '" + from.name + "' wired twice");
    }
    if (!used_in.insert({w.to_node, w.to_port}).second) {
      throw StructuralError("circuit: input port of '" + to.name + "' wired twice");
    }
    const std::string& produced = from.output_systems[static_cast<std::size_t>(w.from_port)];
    const std::string& consumed = to.input_systems[static_cast<std::size_t>(w.to_port)];
    if (produced != consumed) {
      throw StructuralError("circuit: wire from '" + from.name + "' to '" + to.name +
                            "' connects systems '" + produced + "' and '" + consumed + "'");
    }
  }
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    for (std::size_t p = 0; p < nodes_[n].output_systems.size(); ++p) {
      if (!used_out.count({static_cast<int>(n), static_cast<int>(p)})) {
        throw StructuralError("circuit: open output port on '" + nodes_[n].name + "'");
      }
    }
    for (std::size_t p = 0; p < nodes_[n].input_systems.size(); ++p) {
      if (!used_in.count({static_cast<int>(n), static_cast<int>(p)})) {
        throw StructuralError("circuit: open input port on '" + nodes_[n].name + "'");
      }
    }
  }

  // Kahn's algorithm; leftovers mean a cycle.
  std::vector<int> indegree(nodes_.size(), 0);
  for (const CircuitWire& w : wires_) indegree[static_cast<std::size_t>(w.to_node)]++;
  std::vector<int> queue;
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    if (indegree[n] == 0) queue.push_back(static_cast<int>(n));
  }
  std::size_t processed = 0;
  while (!queue.empty()) {
    const int n = queue.back();
    queue.pop_back();
    ++processed;
    for (const CircuitWire& w : wires_) {
      if (w.from_node == n && --indegree[static_cast<std::size_t>(w.to_node)] == 0) {
        queue.push_back(w.to_node);
      }
    }
  }
  if (processed != nodes_.size()) throw StructuralError("circuit: wiring contains a cycle");
}

std::vector<int> Foliation::node_order() const {
  std::vector<int> order = preparation.node_indices;
  for (const FoliationStep& s : steps) {
    order.insert(order.end(), s.node_indices.begin(), s.node_indices.end());
  }
  order.insert(order.end(), measurement.node_indices.begin(), measurement.node_indices.end());
  return order;
}

namespace {

GeneralizedOperation identity_operation(Index dim) {
  return GeneralizedOperation({CPMap::identity(dim)});
}

GeneralizedOperation permutation_operation(const std::vector<Index>& dims,
                                           const std::vector<int>& order) {
  return GeneralizedOperation({CPMap::from_unitary(factor_permutation(dims, order))});
}

struct WireRef {
  int wire_id;
  Index dim;
};

}  // namespace

Foliation foliate(const Circuit& c, int max_dim) {
  c.validate();
  if (c.nodes().empty()) throw StructuralError("foliate: circuit has no nodes");

  const auto& nodes = c.nodes();
  const auto& wires = c.wires();

  // Longest path from the sources.
  std::vector<int> depth(nodes.size(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const CircuitWire& w : wires) {
      const int want = depth[static_cast<std::size_t>(w.from_node)] + 1;
      if (depth[static_cast<std::size_t>(w.to_node)] < want) {
        depth[static_cast<std::size_t>(w.to_node)] = want;
        changed = true;
        if (want > static_cast<int>(nodes.size())) {
          throw StructuralError("foliate: wiring contains a cycle");
        }
      }
    }
  }
  const int max_depth = *std::max_element(depth.begin(), depth.end());

  std::vector<std::vector<int>> slices(static_cast<std::size_t>(max_depth) + 1);
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    slices[static_cast<std::size_t>(depth[n])].push_back(static_cast<int>(n));
  }

  // Input wire of (node, port) pairs for quick lookup.
  std::map<std::pair<int, int>, int> in_wire, out_wire;
  for (std::size_t w = 0; w < wires.size(); ++w) {
    in_wire[{wires[w].to_node, wires[w].to_port}] = static_cast<int>(w);
    out_wire[{wires[w].from_node, wires[w].from_port}] = static_cast<int>(w);
  }
  const auto wire_dim = [&](int w) {
    const CircuitWire& wire = wires[static_cast<std::size_t>(w)];
    const CircuitNode& from = nodes[static_cast<std::size_t>(wire.from_node)];
    return c.system_dim(from.output_systems[static_cast<std::size_t>(wire.from_port)]);
  };
  const auto check_dim = [max_dim](Index d) {
    if (d > max_dim) {
      throw StructuralError("foliate: composite dimension " + std::to_string(d) +
                            " exceeds the limit " + std::to_string(max_dim));
    }
  };

  std::vector<WireRef> live;

  // Builds the composite operation for one slice and updates the live wires.
  const auto build_slice = [&](const std::vector<int>& firing) {
    // Wires consumed by this slice, in per-node port order.
    std::vector<int> consumed;
    std::set<int> consumed_set;
    for (int n : firing) {
      const CircuitNode& node = nodes[static_cast<std::size_t>(n)];
      for (std::size_t p = 0; p < node.input_systems.size(); ++p) {
        const int w = in_wire.at({n, static_cast<int>(p)});
        consumed.push_back(w);
        consumed_set.insert(w);
      }
    }

    std::vector<int> target = consumed;
    std::vector<WireRef> pass;
    for (const WireRef& ref : live) {
      if (!consumed_set.count(ref.wire_id)) {
        target.push_back(ref.wire_id);
        pass.push_back(ref);
      }
    }

    // Alignment permutation from the current live order to the target order.
    std::vector<Index> live_dims;
    for (const WireRef& ref : live) live_dims.push_back(ref.dim);
    std::vector<int> order;
    for (int w : target) {
      for (std::size_t j = 0; j < live.size(); ++j) {
        if (live[j].wire_id == w) {
          order.push_back(static_cast<int>(j));
          break;
        }
      }
    }

    std::optional<GeneralizedOperation> composite;
    for (int n : firing) {
      const GeneralizedOperation& op = nodes[static_cast<std::size_t>(n)].op;
      composite = composite ? compose_parallel(*composite, op) : op;
    }
    Index pass_dim = 1;
    for (const WireRef& ref : pass) pass_dim *= ref.dim;
    if (pass_dim > 1) {
      composite = composite ? compose_parallel(*composite, identity_operation(pass_dim))
                            : identity_operation(pass_dim);
    }
    check_dim(composite->dim_in());
    check_dim(composite->dim_out());

    const bool nontrivial_perm = [&] {
      for (std::size_t j = 0; j < order.size(); ++j) {
        if (order[j] != static_cast<int>(j)) return true;
      }
      return false;
    }();
    if (nontrivial_perm) {
      auto aligned = compose_sequential(permutation_operation(live_dims, order), *composite);
      // A unitary followed by the slice cannot annihilate its weight.
      composite = std::move(*aligned);
    }

    // New live wires: outputs in per-node port order, then pass-through.
    std::vector<WireRef> next_live;
    for (int n : firing) {
      const CircuitNode& node = nodes[static_cast<std::size_t>(n)];
      for (std::size_t p = 0; p < node.output_systems.size(); ++p) {
        const int w = out_wire.at({n, static_cast<int>(p)});
        next_live.push_back({w, wire_dim(w)});
      }
    }
    next_live.insert(next_live.end(), pass.begin(), pass.end());
    live = std::move(next_live);

    return FoliationStep{std::move(*composite), firing};
  };

  Foliation f{FoliationStep{identity_operation(1), {}}, {},
              FoliationStep{identity_operation(1), {}}};
  f.preparation = build_slice(slices.front());
  for (std::size_t k = 1; k + 1 <= static_cast<std::size_t>(max_depth); ++k) {
    f.steps.push_back(build_slice(slices[k]));
  }
  if (max_depth > 0) {
    f.measurement = build_slice(slices.back());
  }
  if (!live.empty()) {
    throw StructuralError("foliate: wires left dangling past the final slice");
  }
  return f;
}

std::vector<Index> CircuitDistribution::tuple(Index flat) const {
  std::vector<Index> digits(outcome_labels.size(), 0);
  for (int k = static_cast<int>(outcome_labels.size()) - 1; k >= 0; --k) {
    const Index n = static_cast<Index>(outcome_labels[static_cast<std::size_t>(k)].size());
    digits[static_cast<std::size_t>(k)] = flat % n;
    flat /= n;
  }
  return digits;
}

CircuitDistribution evaluate(const Circuit& c, int max_dim) {
  const Foliation f = foliate(c, max_dim);
  const std::vector<int> firing_order = f.node_order();
  const auto& nodes = c.nodes();

  CircuitDistribution out;
  Index n_tuples = 1;
  for (const CircuitNode& n : nodes) {
    out.node_names.push_back(n.name);
    out.outcome_labels.push_back(n.op.labels());
    n_tuples *= n.op.n_outcomes();
    if (n_tuples > 1000000) {
      throw StructuralError("evaluate: more than 1000000 outcome tuples");
    }
  }
  out.probabilities.assign(static_cast<std::size_t>(n_tuples), 0.0);

  std::optional<GeneralizedOperation> chain = f.preparation.op;
  for (const FoliationStep& step : f.steps) {
    chain = compose_sequential(*chain, step.op);
    if (!chain) {
      out.null = true;
      return out;
    }
  }
  chain = compose_sequential(*chain, f.measurement.op);
  if (!chain) {
    out.null = true;
    return out;
  }

  // The chain's outcome index runs over nodes in firing order, last node
  // fastest; identity padding and alignment factors are single-outcome and
  // drop out. Remap each tuple to declaration order.
  std::vector<Index> firing_counts;
  for (int n : firing_order) {
    firing_counts.push_back(nodes[static_cast<std::size_t>(n)].op.n_outcomes());
  }
  std::vector<Index> decl_strides(nodes.size(), 1);
  for (int k = static_cast<int>(nodes.size()) - 2; k >= 0; --k) {
    decl_strides[static_cast<std::size_t>(k)] =
        decl_strides[static_cast<std::size_t>(k) + 1] *
        nodes[static_cast<std::size_t>(k) + 1].op.n_outcomes();
  }

  const Matrix one = Matrix::Identity(1, 1);
  for (Index flat = 0; flat < chain->n_outcomes(); ++flat) {
    Index rest = flat;
    Index decl_flat = 0;
    for (int k = static_cast<int>(firing_order.size()) - 1; k >= 0; --k) {
      const Index digit = rest % firing_counts[static_cast<std::size_t>(k)];
      rest /= firing_counts[static_cast<std::size_t>(k)];
      decl_flat +=
          digit * decl_strides[static_cast<std::size_t>(firing_order[static_cast<std::size_t>(k)])];
    }
    out.probabilities[static_cast<std::size_t>(decl_flat)] = chain->map(flat).apply(one)(0, 0).real();
  }
  return out;
}

GeneralizedOperation boundary_scenario(const Matrix& bulk_unitary, const Matrix& environment,
                                       const std::vector<Matrix>& boundary_effects,
                                       std::vector<std::string> labels) {
  const Index d_se = bulk_unitary.rows();
  const Index d_e = environment.rows();
  if (bulk_unitary.cols() != d_se || d_e < 1 || d_se % d_e != 0) {
    throw StructuralError("boundary_scenario: dimension mismatch");
  }
  const Index d_s = d_se / d_e;
  const Matrix gram = bulk_unitary.adjoint() * bulk_unitary;
  if ((gram - Matrix::Identity(d_se, d_se)).cwiseAbs().maxCoeff() > kProbabilityTol) {
    throw DomainError("boundary_scenario: bulk matrix is not unitary");
  }
  if (!is_psd(environment)) throw DomainError("boundary_scenario: environment is not PSD");
  const double env_trace = environment.trace().real();
  if (env_trace <= kPsdTol) throw DomainError("boundary_scenario: environment has zero trace");

  Eigen::SelfAdjointEigenSolver<Matrix> env_es((environment + environment.adjoint()) /
                                               (2.0 * env_trace));

  std::vector<CPMap> maps;
  maps.reserve(boundary_effects.size());
  for (const Matrix& f : boundary_effects) {
    if (f.rows() != d_e || f.cols() != d_e) {
      throw StructuralError("boundary_scenario: boundary effect dimension mismatch");
    }
    if (!is_psd(f)) throw DomainError("boundary_scenario: boundary effect is not PSD");
    Eigen::SelfAdjointEigenSolver<Matrix> f_es((f + f.adjoint()) / 2.0);

    std::vector<Matrix> kraus;
    for (Index k = 0; k < d_e; ++k) {
      const double lambda = env_es.eigenvalues()(k);
      if (lambda <= kPsdTol) continue;
      for (Index l = 0; l < d_e; ++l) {
        const double mu = f_es.eigenvalues()(l);
        if (mu <= kPsdTol) continue;
        // A = √(μλ) (1_S ⊗ ⟨f_l|) U (1_S ⊗ |e_k⟩)
        Matrix a = Matrix::Zero(d_s, d_s);
        for (Index s = 0; s < d_s; ++s) {
          for (Index t = 0; t < d_s; ++t) {
            Complex acc = 0.0;
            for (Index u = 0; u < d_e; ++u) {
              for (Index v = 0; v < d_e; ++v) {
                acc += std::conj(f_es.eigenvectors()(u, l)) * bulk_unitary(s * d_e + u, t * d_e + v) *
                       env_es.eigenvectors()(v, k);
              }
            }
            a(s, t) = acc;
          }
        }
        kraus.push_back(std::sqrt(mu * lambda) * a);
      }
    }
    maps.emplace_back(std::move(kraus), d_s, d_s);
  }
  return GeneralizedOperation(std::move(maps), std::move(labels));
}

}  // namespace tsopt
