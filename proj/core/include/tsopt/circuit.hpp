#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsopt/operation.hpp"

// Closed circuits of generalized operations. A circuit is a DAG whose nodes
// carry operations and whose wires carry systems; every wire connects
// exactly one producer port to one consumer port, and no wire is left
// dangling. Nodes with no inputs are preparations, nodes with no outputs
// are measurements.

namespace tsopt {

struct CircuitNode {
  std::string name;
  std::vector<std::string> input_systems;   // system name per input port
  std::vector<std::string> output_systems;  // system name per output port
  GeneralizedOperation op;
};

struct CircuitWire {
  int from_node = -1;
  int from_port = -1;
  int to_node = -1;
  int to_port = -1;
};

class Circuit {
 public:
  Circuit(std::vector<SystemLabel> systems, std::vector<CircuitNode> nodes,
          std::vector<CircuitWire> wires);

  const std::vector<SystemLabel>& systems() const { return systems_; }
  const std::vector<CircuitNode>& nodes() const { return nodes_; }
  const std::vector<CircuitWire>& wires() const { return wires_; }

  Index system_dim(const std::string& name) const;

  // Structural validation: port/wire consistency, closedness, acyclicity,
  // operation dimensions matching port dimensions. Throws StructuralError.
  void validate() const;

 private:
  std::vector<SystemLabel> systems_;
  std::vector<CircuitNode> nodes_;
  std::vector<CircuitWire> wires_;
};

// One time slice of a foliated circuit: the slice operation already includes
// identity padding on wires crossing the slice and the wire alignment
// permutation, so slices compose sequentially in order.
struct FoliationStep {
  GeneralizedOperation op;
  std::vector<int> node_indices;  // circuit nodes firing in this slice, declaration order
};

// Global time slicing. The first slice contains every preparation, the last
// every node scheduled at the final depth; slices between them are the
// intermediate steps. Composing preparation, steps, and measurement in order
// reproduces the circuit's outcome distribution.
struct Foliation {
  FoliationStep preparation;
  std::vector<FoliationStep> steps;
  FoliationStep measurement;

  // Nodes in firing order (concatenation of the slices' node lists).
  std::vector<int> node_order() const;
};

// Longest-path (as-soon-as-possible) layering with identity padding on idle
// wires. max_dim caps the dimension of any slice boundary. Requires a valid
// circuit with at least one preparation and one measurement node.
Foliation foliate(const Circuit& c, int max_dim = kDefaultMaxDim);

// Joint outcome distribution over all nodes of a closed circuit. Outcome
// tuples enumerate node outcomes in declaration order, last node fastest.
// When the coarse-grained chain annihilates (denominator at most
// kNullScale times the product of slice dimensions), the distribution is
// flagged null and all probabilities are zero, never NaN.
struct CircuitDistribution {
  std::vector<std::string> node_names;                   // declaration order
  std::vector<std::vector<std::string>> outcome_labels;  // per node
  std::vector<double> probabilities;                     // row-major over node outcomes
  bool null = false;

  Index n_tuples() const { return static_cast<Index>(probabilities.size()); }
  // Outcome index of each node for a given tuple index.
  std::vector<Index> tuple(Index flat) const;
};

CircuitDistribution evaluate(const Circuit& c, int max_dim = kDefaultMaxDim);

// Effective operation induced on a system S by a bulk unitary U acting on
// S ⊗ E (S slow), an environment state sigma on E, and boundary effects
// {F_i} on E: M_i(ρ) = Tr_E[(1 ⊗ F_i) U (ρ ⊗ sigma) U†], jointly
// renormalized. The boundary effects need not sum to the identity; when they
// do not, the resulting operation is non-standard.
GeneralizedOperation boundary_scenario(const Matrix& bulk_unitary, const Matrix& environment,
                                       const std::vector<Matrix>& boundary_effects,
                                       std::vector<std::string> labels = {});

}  // namespace tsopt
