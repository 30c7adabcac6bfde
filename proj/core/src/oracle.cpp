#include "tsopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tsopt {
namespace {

constexpr Index kMaxTuples = 1000000;

// Kahn order with declaration-index tie-breaking, computed here rather than
// borrowed from the engine.
std::vector<int> topological_order(const Circuit& c) {
  const int n = static_cast<int>(c.nodes().size());
  std::vector<int> missing(n, 0);
  for (const CircuitWire& w : c.wires()) ++missing[w.to_node];
  std::vector<int> order;
  order.reserve(n);
  std::vector<bool> done(n, false);
  for (int round = 0; round < n; ++round) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (!done[v] && missing[v] == 0) {
        pick = v;
        break;
      }
    }
    if (pick < 0) throw StructuralError("oracle: circuit wiring is cyclic");
    done[pick] = true;
    order.push_back(pick);
    for (const CircuitWire& w : c.wires())
      if (w.from_node == pick) --missing[w.to_node];
  }
  return order;
}

// One numerator: walk the nodes in topological order, keeping the raw
// operator on the currently live wires, and contract each node's chosen
// Kraus list directly.
double tuple_numerator(const Circuit& c, const std::vector<int>& order,
                       const std::vector<Index>& outcome) {
  std::vector<int> live;            // wire indices, tensor order
  Matrix rho = Matrix::Identity(1, 1);

  auto wire_dim = [&](int w) {
    return c.system_dim(c.nodes()[c.wires()[w].from_node]
                            .output_systems[c.wires()[w].from_port]);
  };

  for (int v : order) {
    const CircuitNode& node = c.nodes()[v];
    const Index n_in = static_cast<Index>(node.input_systems.size());
    const Index n_out = static_cast<Index>(node.output_systems.size());

    // Wires feeding this node, by input port.
    std::vector<int> consumed(n_in, -1);
    for (int w = 0; w < static_cast<int>(c.wires().size()); ++w)
      if (c.wires()[w].to_node == v) consumed[c.wires()[w].to_port] = w;

    // Reorder the live list so the consumed wires come first, in port order.
    std::vector<bool> taken(live.size(), false);
    std::vector<int> new_order;
    new_order.reserve(live.size());
    for (Index p = 0; p < n_in; ++p) {
      const auto it = std::find(live.begin(), live.end(), consumed[p]);
      const int pos = static_cast<int>(it - live.begin());
      new_order.push_back(pos);
      taken[pos] = true;
    }
    for (std::size_t i = 0; i < live.size(); ++i)
      if (!taken[i]) new_order.push_back(static_cast<int>(i));

    std::vector<Index> live_dims;
    live_dims.reserve(live.size());
    for (int w : live) live_dims.push_back(wire_dim(w));
    if (!live.empty()) {
      const Matrix perm = factor_permutation(live_dims, new_order);
      rho = perm * rho * perm.adjoint();
    }

    // Pass-through dimension after the reorder.
    Index pass_dim = 1;
    std::vector<int> pass;
    for (std::size_t i = 0; i < new_order.size(); ++i) {
      if (static_cast<Index>(i) >= n_in) {
        pass.push_back(live[new_order[i]]);
        pass_dim *= live_dims[new_order[i]];
      }
    }

    const CPMap& m = node.op.map(outcome[v]);
    const Matrix pad = Matrix::Identity(pass_dim, pass_dim);
    Matrix next = Matrix::Zero(node.op.dim_out() * pass_dim, node.op.dim_out() * pass_dim);
    for (const Matrix& k : m.kraus()) {
      const Matrix kp = tensor(k, pad);
      next += kp * rho * kp.adjoint();
    }
    rho = std::move(next);

    // Output wires, by output port, become the leading live factors.
    std::vector<int> produced(n_out, -1);
    for (int w = 0; w < static_cast<int>(c.wires().size()); ++w)
      if (c.wires()[w].from_node == v) produced[c.wires()[w].from_port] = w;
    live.clear();
    for (Index p = 0; p < n_out; ++p) live.push_back(produced[p]);
    live.insert(live.end(), pass.begin(), pass.end());
  }

  if (!live.empty()) throw StructuralError("oracle: circuit left open wires");
  return rho(0, 0).real();
}

}  // namespace

OracleDistribution enumerate_circuit(const Circuit& c) {
  c.validate();
  const std::vector<int> order = topological_order(c);

  Index n_tuples = 1;
  for (const CircuitNode& node : c.nodes()) {
    n_tuples *= node.op.n_outcomes();
    if (n_tuples > kMaxTuples)
      throw DomainError("oracle: enumeration refused, more than " +
                        std::to_string(kMaxTuples) + " outcome tuples");
  }

  // Declaration-order strides, last node fastest, matching the engine's
  // published layout.
  const int n_nodes = static_cast<int>(c.nodes().size());
  std::vector<Index> stride(n_nodes, 1);
  for (int v = n_nodes - 2; v >= 0; --v)
    stride[v] = stride[v + 1] * c.nodes()[v + 1].op.n_outcomes();

  OracleDistribution dist;
  dist.n_tuples = n_tuples;
  dist.probabilities.assign(static_cast<std::size_t>(n_tuples), 0.0);

  std::vector<double> numerators(static_cast<std::size_t>(n_tuples), 0.0);
  double total = 0.0;
  std::vector<Index> outcome(n_nodes, 0);
  for (Index t = 0; t < n_tuples; ++t) {
    for (int v = 0; v < n_nodes; ++v)
      outcome[v] = (t / stride[v]) % c.nodes()[v].op.n_outcomes();
    const double num = tuple_numerator(c, order, outcome);
    numerators[static_cast<std::size_t>(t)] = num;
    total += num;
  }

  double dim_product = 1.0;
  for (const SystemLabel& s : c.systems()) dim_product *= static_cast<double>(s.dim);
  if (total <= kNullScale * dim_product) {
    dist.null = true;
    return dist;
  }
  for (Index t = 0; t < n_tuples; ++t)
    dist.probabilities[static_cast<std::size_t>(t)] =
        numerators[static_cast<std::size_t>(t)] / total;
  return dist;
}

ClassicalFormulaTable classical_formulas(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("classical_formulas: p must lie in [0,1]");
  if (!(q > 0.0 && q < 2.0))
    throw DomainError("classical_formulas: q must lie strictly between 0 and 2");

  ClassicalFormulaTable table;
  const double w0 = p * q;
  const double w1 = (1.0 - p) * (2.0 - q);
  const double total = w0 + w1;

  table.joint = RealMatrix::Zero(2, 2);
  table.joint(0, 0) = w0 / total;
  table.joint(1, 1) = w1 / total;

  table.bit_p0 = w0 / total;
  table.bit_p1 = w1 / total;

  table.refined_joint = RealMatrix::Zero(2, 3);
  table.refined_joint(0, 0) = p * q / 2.0;
  table.refined_joint(0, 2) = p * (2.0 - q) / 2.0;
  table.refined_joint(1, 1) = (1.0 - p) * (2.0 - q) / 2.0;
  table.refined_joint(1, 2) = (1.0 - p) * q / 2.0;
  return table;
}

bool map_action_equal(const CPMap& m1, const CPMap& m2, double tol) {
  if (m1.dim_in() != m2.dim_in() || m1.dim_out() != m2.dim_out())
    throw StructuralError("map_action_equal: dimension mismatch");
  const Index d = m1.dim_in();
  for (Index j = 0; j < d; ++j) {
    for (Index k = 0; k < d; ++k) {
      Matrix unit = Matrix::Zero(d, d);
      unit(j, k) = 1.0;
      if ((m1.apply(unit) - m2.apply(unit)).cwiseAbs().maxCoeff() > tol) return false;
    }
  }
  return true;
}

}  // namespace tsopt
