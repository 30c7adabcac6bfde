#include <doctest.h>

#include <algorithm>

#include <tsopt/circuit_io.hpp>
#include <tsopt/random.hpp>

using namespace tsopt;

namespace {

const char* kMinimalDoc = R"({
  "systems": [{"name": "q", "dim": 2}],
  "operations": [
    {"name": "prep", "inputs": [], "outputs": ["q"],
     "outcomes": [{"label": "0", "kraus": [[[[1,0]],[[0,0]]]]}]},
    {"name": "meas", "inputs": ["q"], "outputs": [],
     "outcomes": [{"label": "0", "kraus": [[[[1,0],[0,0]]]]},
                  {"label": "1", "kraus": [[[[0,0],[1,0]]]]}]}
  ],
  "wiring": [{"from": "prep.0", "to": "meas.0"}]
})";

bool has_code(const std::vector<Diagnostic>& diags, DiagnosticCode code) {
    return std::any_of(diags.begin(), diags.end(),
                       [code](const Diagnostic& d) { return d.code == code; });
}

}  // namespace

TEST_SUITE_BEGIN("circuit_io");

TEST_CASE("minimal document parses into a two-node circuit") {
    ParseResult r = parse_circuit(kMinimalDoc);
    REQUIRE(r.ok());
    CHECK(r.circuit->nodes().size() == 2);
    CHECK(r.circuit->wires().size() == 1);
    CHECK(r.circuit->system_dim("q") == 2);
    CircuitDistribution dist = evaluate(*r.circuit);
    CHECK(std::abs(dist.probabilities[0] - 1.0) < 1e-12);
}

TEST_CASE("unparseable text yields a syntax diagnostic") {
    ParseResult r = parse_circuit("{not json");
    CHECK_FALSE(r.ok());
    CHECK(has_code(r.diagnostics, DiagnosticCode::Syntax));
}

TEST_CASE("unknown system reference is flagged") {
    std::string doc = kMinimalDoc;
    const auto pos = doc.find("\"outputs\": [\"q\"]");
    doc.replace(pos, 16, "\"outputs\": [\"nope\"]");
    ParseResult r = parse_circuit(doc);
    CHECK_FALSE(r.ok());
    CHECK(has_code(r.diagnostics, DiagnosticCode::Reference));
}

TEST_CASE("wrong Kraus shape is a dimension diagnostic") {
    std::string doc = kMinimalDoc;
    // 1x1 Kraus operator on a 1 -> 2 operation.
    const auto pos = doc.find("[[[[1,0]],[[0,0]]]]");
    doc.replace(pos, 19, "[[[[1,0]]]]");
    ParseResult r = parse_circuit(doc);
    CHECK_FALSE(r.ok());
    CHECK(has_code(r.diagnostics, DiagnosticCode::Dimension));
}

TEST_CASE("weight violation is a normalization diagnostic") {
    std::string doc = kMinimalDoc;
    const auto pos = doc.find("[[[[1,0]],[[0,0]]]]");
    doc.replace(pos, 19, "[[[[2,0]],[[0,0]]]]");
    ParseResult r = parse_circuit(doc);
    CHECK_FALSE(r.ok());
    CHECK(has_code(r.diagnostics, DiagnosticCode::Normalization));
}

TEST_CASE("cyclic wiring is flagged without crashing") {
    const char* doc = R"({
      "systems": [{"name": "a", "dim": 2}, {"name": "b", "dim": 2}],
      "operations": [
        {"name": "x", "inputs": ["a"], "outputs": ["b"],
         "outcomes": [{"kraus": [[[[1,0],[0,0]],[[0,0],[1,0]]]]}]},
        {"name": "y", "inputs": ["b"], "outputs": ["a"],
         "outcomes": [{"kraus": [[[[1,0],[0,0]],[[0,0],[1,0]]]]}]}
      ],
      "wiring": [{"from": "x.0", "to": "y.0"}, {"from": "y.0", "to": "x.0"}]
    })";
    ParseResult r = parse_circuit(doc);
    CHECK_FALSE(r.ok());
    CHECK(has_code(r.diagnostics, DiagnosticCode::Cycle));
}

TEST_CASE("missing wires surface as open-wire diagnostics") {
    std::string doc = kMinimalDoc;
    const auto pos = doc.find(R"("wiring": [{"from": "prep.0", "to": "meas.0"}])");
    doc.replace(pos, 46, R"("wiring": [])");
    ParseResult r = parse_circuit(doc);
    CHECK_FALSE(r.ok());
    CHECK(has_code(r.diagnostics, DiagnosticCode::OpenWire));
}

TEST_CASE("double wiring of one port is a conflict") {
    const char* doc = R"({
      "systems": [{"name": "q", "dim": 2}],
      "operations": [
        {"name": "prep", "inputs": [], "outputs": ["q"],
         "outcomes": [{"kraus": [[[[1,0]],[[0,0]]]]}]},
        {"name": "m1", "inputs": ["q"], "outputs": [],
         "outcomes": [{"kraus": [[[[1,0],[0,0]]]], "label": "0"},
                      {"kraus": [[[[0,0],[1,0]]]], "label": "1"}]},
        {"name": "m2", "inputs": ["q"], "outputs": [],
         "outcomes": [{"kraus": [[[[1,0],[0,0]]]], "label": "0"},
                      {"kraus": [[[[0,0],[1,0]]]], "label": "1"}]}
      ],
      "wiring": [{"from": "prep.0", "to": "m1.0"}, {"from": "prep.0", "to": "m2.0"}]
    })";
    ParseResult r = parse_circuit(doc);
    CHECK_FALSE(r.ok());
    CHECK(has_code(r.diagnostics, DiagnosticCode::PortConflict));
}

TEST_CASE("role tags are checked against the ports") {
    std::string doc = kMinimalDoc;
    doc.insert(doc.rfind('}'), R"(, "roles": {"meas": "preparation"})");
    ParseResult r = parse_circuit(doc);
    CHECK_FALSE(r.ok());
    CHECK(has_code(r.diagnostics, DiagnosticCode::Role));
}

TEST_CASE("dimension limit applies at parse time") {
    ParseOptions opts;
    opts.max_dim = 1;
    ParseResult r = parse_circuit(kMinimalDoc, opts);
    CHECK_FALSE(r.ok());
    CHECK(has_code(r.diagnostics, DiagnosticCode::Dimension));
}

TEST_CASE("round trip preserves circuit semantics") {
    Rng rng(61);
    // A randomized circuit stresses full-precision matrix serialization.
    Matrix e0 = random_psd(2, rng);
    Matrix e1 = random_psd(2, rng);
    const double scale = 2.0 / (e0.trace().real() + e1.trace().real());
    CPMap half = random_channel(2, 2, 2, rng);
    std::vector<SystemLabel> systems{{"a", 2}, {"b", 2}};
    std::vector<CircuitNode> nodes{
        {"prep", {}, {"a"}, make_preparation({0.3 * random_density(2, rng),
                                              0.7 * random_density(2, rng)})},
        {"mid", {"a"}, {"b"},
         GeneralizedOperation({CPMap({half.kraus()[0]}, 2, 2), CPMap({half.kraus()[1]}, 2, 2)})},
        {"meas", {"b"}, {}, make_measurement({scale * e0, scale * e1})},
    };
    Circuit original(systems, nodes, {{0, 0, 1, 0}, {1, 0, 2, 0}});

    ParseResult reparsed = parse_circuit(serialize_circuit(original));
    REQUIRE(reparsed.ok());
    REQUIRE(reparsed.circuit->nodes().size() == original.nodes().size());
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        CHECK(reparsed.circuit->nodes()[n].name == original.nodes()[n].name);
        CHECK(reparsed.circuit->nodes()[n].op.labels() == original.nodes()[n].op.labels());
    }

    CircuitDistribution before = evaluate(original);
    CircuitDistribution after = evaluate(*reparsed.circuit);
    REQUIRE(before.probabilities.size() == after.probabilities.size());
    for (std::size_t k = 0; k < before.probabilities.size(); ++k) {
        // Matrices serialize at full precision; the only reparse noise is the
        // constructor renormalizing an already unit weight.
        CHECK(std::abs(before.probabilities[k] - after.probabilities[k]) < 1e-14);
    }

    // A fixed document always parses to the same bytes.
    std::string doc = serialize_circuit(original);
    ParseResult p1 = parse_circuit(doc);
    ParseResult p2 = parse_circuit(doc);
    REQUIRE(p1.ok());
    REQUIRE(p2.ok());
    CHECK(serialize_circuit(*p1.circuit) == serialize_circuit(*p2.circuit));
}

TEST_CASE("symmetry documents parse with defaults and reject junk") {
    SymmetryParseResult good = parse_symmetry_document(R"({
      "kind": "type-ii", "transpose": true,
      "s": {"2": [[[0,0],[1,0]],[[-1,0],[0,0]]]}
    })");
    REQUIRE(good.document.has_value());
    CHECK(good.document->type_two);
    CHECK(good.document->transpose);
    REQUIRE(good.document->s.count(2) == 1);
    CHECK(good.document->s.at(2)(0, 1) == Complex(1, 0));

    CHECK_FALSE(parse_symmetry_document("[]").document.has_value());
    // Key and matrix size must agree.
    SymmetryParseResult mismatched = parse_symmetry_document(R"({
      "kind": "type-ii", "s": {"3": [[[1,0],[0,0]],[[0,0],[1,0]]]}
    })");
    CHECK_FALSE(mismatched.document.has_value());
    CHECK(has_code(mismatched.diagnostics, DiagnosticCode::Dimension));
}

TEST_CASE("state documents parse both operators of every entry") {
    StateParseResult good = parse_state_document(R"({
      "dim": 2,
      "states": [
        {"rho": [[[0.5,0],[0,0]],[[0,0],[0,0]]],
         "rho_bar": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}
      ]
    })");
    REQUIRE(good.document.has_value());
    CHECK(good.document->dim == 2);
    REQUIRE(good.document->states.size() == 1);
    CHECK(good.document->states[0].first(0, 0) == Complex(0.5, 0));

    // An empty list is structurally fine; consumers decide how many they need.
    StateParseResult empty = parse_state_document(R"({"dim": 2, "states": []})");
    REQUIRE(empty.document.has_value());
    CHECK(empty.document->states.empty());
    StateParseResult wrong_dim = parse_state_document(R"({
      "dim": 3,
      "states": [{"rho": [[[1,0]]], "rho_bar": [[[1,0]]]}]
    })");
    CHECK_FALSE(wrong_dim.document.has_value());
}

TEST_SUITE_END();
