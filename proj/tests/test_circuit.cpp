#include <doctest.h>

#include <tsopt/circuit.hpp>
#include <tsopt/random.hpp>

using namespace tsopt;

namespace {

Matrix ket_bra(int i, Index d) {
    Matrix m = Matrix::Zero(d, d);
    m(i, i) = 1.0;
    return m;
}

GeneralizedOperation qubit_povm() {
    return make_measurement({ket_bra(0, 2), ket_bra(1, 2)}, {"0", "1"});
}

// prep -> single-outcome channel -> two-outcome measurement on one qubit wire.
Circuit three_node_chain(const Matrix& rho, const CPMap& ch,
                         const GeneralizedOperation& meas) {
    std::vector<SystemLabel> systems{{"a", 2}, {"b", 2}};
    std::vector<CircuitNode> nodes{
        {"prep", {}, {"a"}, make_preparation({rho})},
        {"ch", {"a"}, {"b"}, GeneralizedOperation({ch})},
        {"meas", {"b"}, {}, meas},
    };
    std::vector<CircuitWire> wires{{0, 0, 1, 0}, {1, 0, 2, 0}};
    return Circuit(std::move(systems), std::move(nodes), std::move(wires));
}

}  // namespace

TEST_SUITE_BEGIN("circuit");

TEST_CASE("foliation depth matches the longest path") {
    Rng rng(41);
    Matrix rho = random_density(2, rng);

    std::vector<SystemLabel> systems{{"a", 2}};
    std::vector<CircuitNode> pair_nodes{
        {"prep", {}, {"a"}, make_preparation({rho})},
        {"meas", {"a"}, {}, qubit_povm()},
    };
    Circuit pair(systems, pair_nodes, {{0, 0, 1, 0}});
    Foliation f0 = foliate(pair);
    CHECK(f0.steps.empty());
    CHECK(f0.preparation.node_indices == std::vector<int>{0});
    CHECK(f0.measurement.node_indices == std::vector<int>{1});

    Circuit chain = three_node_chain(rho, random_channel(2, 2, 2, rng), qubit_povm());
    Foliation f1 = foliate(chain);
    CHECK(f1.steps.size() == 1);
    CHECK(f1.node_order() == std::vector<int>{0, 1, 2});
}

TEST_CASE("standard chain reproduces the Born values") {
    Rng rng(42);
    Matrix rho = random_density(2, rng);
    Matrix u = random_unitary(2, rng);
    Circuit c = three_node_chain(rho, CPMap::from_unitary(u), qubit_povm());
    CircuitDistribution dist = evaluate(c);
    REQUIRE_FALSE(dist.null);
    Matrix evolved = u * rho * u.adjoint();
    // Single-outcome nodes keep the layout: flat index = measurement outcome.
    CHECK(std::abs(dist.probabilities[0] - evolved(0, 0).real()) < 1e-12);
    CHECK(std::abs(dist.probabilities[1] - evolved(1, 1).real()) < 1e-12);
}

TEST_CASE("non-null distributions sum to one") {
    Rng rng(43);
    for (int trial = 0; trial < 5; ++trial) {
        // Non-standard two-outcome measurement.
        Matrix e0 = random_psd(2, rng);
        Matrix e1 = random_psd(2, rng);
        const double scale = 2.0 / (e0.trace().real() + e1.trace().real());
        GeneralizedOperation meas = make_measurement({scale * e0, scale * e1});
        Circuit c =
            three_node_chain(random_density(2, rng), random_channel(2, 2, 2, rng), meas);
        CircuitDistribution dist = evaluate(c);
        REQUIRE_FALSE(dist.null);
        double sum = 0.0;
        for (double p : dist.probabilities) sum += p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("annihilating circuit reports null with zero table") {
    Matrix reset0 = Matrix::Zero(2, 2);
    reset0(0, 0) = 1.0;
    Matrix reset1 = Matrix::Zero(2, 2);
    reset1(0, 1) = 1.0;
    CPMap reset({reset0, reset1}, 2, 2);
    GeneralizedOperation meas_one = make_measurement({2.0 * ket_bra(1, 2)});
    Circuit c = three_node_chain(ket_bra(0, 2), reset, meas_one);
    CircuitDistribution dist = evaluate(c);
    CHECK(dist.null);
    for (double p : dist.probabilities) CHECK(p == 0.0);
}

TEST_CASE("staggered two-wire circuit matches direct tensor arithmetic") {
    Rng rng(44);
    Matrix rho_a = random_density(2, rng);
    Matrix rho_b = random_density(2, rng);
    Matrix u = random_unitary(2, rng);

    std::vector<SystemLabel> systems{{"a", 2}, {"a2", 2}, {"b", 2}};
    std::vector<CircuitNode> nodes{
        {"prepA", {}, {"a"}, make_preparation({rho_a})},
        {"prepB", {}, {"b"}, make_preparation({rho_b})},
        {"rot", {"a"}, {"a2"}, GeneralizedOperation({CPMap::from_unitary(u)})},
        {"measA", {"a2"}, {}, qubit_povm()},
        {"measB", {"b"}, {}, qubit_povm()},
    };
    // measB fires one slice before measA, so wire b idles through slice one
    // and the foliation must pad it with an identity.
    std::vector<CircuitWire> wires{{0, 0, 2, 0}, {2, 0, 3, 0}, {1, 0, 4, 0}};
    Circuit c(systems, nodes, wires);

    Foliation f = foliate(c);
    CHECK(f.steps.size() == 1);

    CircuitDistribution dist = evaluate(c);
    REQUIRE_FALSE(dist.null);
    REQUIRE(dist.probabilities.size() == 4);

    // Independent route: p(i, j) = Tr[(E_i ⊗ F_j) (U ⊗ 1) (ρ_a ⊗ ρ_b) (U ⊗ 1)†].
    Matrix joint = tensor(u * rho_a * u.adjoint(), rho_b);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            double expected = (tensor(ket_bra(i, 2), ket_bra(j, 2)) * joint).trace().real();
            // Declaration order lists measA before measB, last node fastest.
            CHECK(std::abs(dist.probabilities[static_cast<std::size_t>(i * 2 + j)] - expected) <
                  1e-12);
        }
    }
}

TEST_CASE("composing foliation slices by hand reproduces evaluate") {
    Rng rng(45);
    Matrix e0 = random_psd(2, rng);
    Matrix e1 = random_psd(2, rng);
    const double scale = 2.0 / (e0.trace().real() + e1.trace().real());
    GeneralizedOperation meas = make_measurement({scale * e0, scale * e1});
    CPMap half = random_channel(2, 2, 2, rng);
    GeneralizedOperation split({CPMap({half.kraus()[0]}, 2, 2), CPMap({half.kraus()[1]}, 2, 2)});

    std::vector<SystemLabel> systems{{"a", 2}, {"b", 2}};
    std::vector<CircuitNode> nodes{
        {"prep", {}, {"a"}, make_preparation({0.5 * random_density(2, rng),
                                              0.5 * random_density(2, rng)})},
        {"mid", {"a"}, {"b"}, split},
        {"meas", {"b"}, {}, meas},
    };
    Circuit c(systems, nodes, {{0, 0, 1, 0}, {1, 0, 2, 0}});

    Foliation f = foliate(c);
    std::optional<GeneralizedOperation> chain = f.preparation.op;
    for (const FoliationStep& step : f.steps) chain = compose_sequential(*chain, step.op);
    chain = compose_sequential(*chain, f.measurement.op);
    REQUIRE(chain.has_value());

    CircuitDistribution dist = evaluate(c);
    const Matrix one = Matrix::Identity(1, 1);
    // Firing order equals declaration order on this chain, so flat indices align.
    REQUIRE(chain->n_outcomes() == static_cast<Index>(dist.probabilities.size()));
    for (Index k = 0; k < chain->n_outcomes(); ++k) {
        CHECK(std::abs(chain->map(k).apply(one)(0, 0).real() -
                       dist.probabilities[static_cast<std::size_t>(k)]) < 1e-12);
    }
}

TEST_CASE("boundary scenario with a POVM boundary stays standard") {
    Rng rng(46);
    Matrix u = random_unitary(4, rng);
    Matrix sigma = random_density(2, rng);
    GeneralizedOperation op = boundary_scenario(u, sigma, random_povm(2, 2, rng));
    CHECK(op.dim_in() == 2);
    CHECK(is_standard(op));
    CHECK(op.coarse().weight() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("boundary scenario with a biased effect breaks standardness") {
    // SWAP bulk: the effective map is ρ -> Tr(Fρ)·σ.
    Matrix swap = Matrix::Zero(4, 4);
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
    Matrix sigma = Matrix::Identity(2, 2) * 0.5;
    Matrix f = Matrix::Zero(2, 2);
    f.diagonal() << 1.5, 0.5;
    GeneralizedOperation op = boundary_scenario(swap, sigma, {f});
    CHECK_FALSE(is_standard(op));
    CHECK((op.map(0).apply(ket_bra(0, 2)) - 1.5 * sigma).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((op.map(0).apply(ket_bra(1, 2)) - 0.5 * sigma).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("boundary scenario with trivial bulk gives weighted identities") {
    Rng rng(47);
    Matrix sigma = random_density(2, rng);
    std::vector<Matrix> povm = random_povm(2, 3, rng);
    GeneralizedOperation op = boundary_scenario(Matrix::Identity(4, 4), sigma, povm);
    Matrix rho = random_density(2, rng);
    for (Index i = 0; i < 3; ++i) {
        const double w = (povm[static_cast<std::size_t>(i)] * sigma).trace().real();
        CHECK((op.map(i).apply(rho) - w * rho).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(boundary_scenario(Matrix::Identity(4, 4), sigma, {Matrix::Identity(3, 3)}),
                    StructuralError);
}

TEST_CASE("preparation marginals ignore the measurement inside the standard set") {
    Rng rng(48);
    GeneralizedOperation prep = make_preparation({0.6 * random_density(2, rng),
                                                  0.4 * random_density(2, rng)});
    for (int trial = 0; trial < 5; ++trial) {
        JointDistribution a = joint_distribution(prep, make_measurement(random_povm(2, 2, rng)));
        JointDistribution b = joint_distribution(prep, make_measurement(random_povm(2, 3, rng)));
        for (Index i = 0; i < 2; ++i) {
            CHECK(std::abs(a.table.row(i).sum() - b.table.row(i).sum()) < 1e-12);
        }
    }

    // A biased coarse effect shifts the preparation marginal.
    GeneralizedOperation biased =
        make_measurement({0.5 * ket_bra(0, 2), 1.5 * ket_bra(1, 2)});
    GeneralizedOperation bit = make_preparation({0.5 * ket_bra(0, 2), 0.5 * ket_bra(1, 2)});
    JointDistribution fair = joint_distribution(bit, qubit_povm());
    JointDistribution skew = joint_distribution(bit, biased);
    CHECK(std::abs(fair.table.row(0).sum() - skew.table.row(0).sum()) > 0.01);
}

TEST_CASE("structural validation rejects broken wiring") {
    Rng rng(49);
    GeneralizedOperation id_op({CPMap::identity(2)});
    std::vector<SystemLabel> systems{{"a", 2}, {"b", 2}};

    // Cycle between two transformations.
    std::vector<CircuitNode> loop{
        {"x", {"a"}, {"b"}, id_op},
        {"y", {"b"}, {"a"}, id_op},
    };
    Circuit cyclic(systems, loop, {{0, 0, 1, 0}, {1, 0, 0, 0}});
    CHECK_THROWS_AS(cyclic.validate(), StructuralError);

    // Open output port.
    std::vector<CircuitNode> open{{"prep", {}, {"a"}, make_preparation({ket_bra(0, 2)})}};
    Circuit dangling(systems, open, {});
    CHECK_THROWS_AS(dangling.validate(), StructuralError);

    // Wire connecting distinct systems.
    std::vector<CircuitNode> mixed{
        {"prep", {}, {"a"}, make_preparation({ket_bra(0, 2)})},
        {"meas", {"b"}, {}, qubit_povm()},
    };
    Circuit crossed(systems, mixed, {{0, 0, 1, 0}});
    CHECK_THROWS_AS(crossed.validate(), StructuralError);

    // Operation dimension disagreeing with its port.
    std::vector<SystemLabel> wide{{"a", 3}};
    std::vector<CircuitNode> wrong{
        {"prep", {}, {"a"}, make_preparation({ket_bra(0, 2)})},
        {"meas", {"a"}, {}, make_measurement({3.0 * ket_bra(0, 3)})},
    };
    Circuit mismatched(wide, wrong, {{0, 0, 1, 0}});
    CHECK_THROWS_AS(mismatched.validate(), StructuralError);
}

TEST_CASE("dimension cap applies to composite slices") {
    Rng rng(50);
    std::vector<SystemLabel> systems{{"a", 2}, {"b", 2}};
    std::vector<CircuitNode> nodes{
        {"prepA", {}, {"a"}, make_preparation({random_density(2, rng)})},
        {"prepB", {}, {"b"}, make_preparation({random_density(2, rng)})},
        {"joint", {"a", "b"}, {}, make_measurement({Matrix::Identity(4, 4)})},
    };
    Circuit c(systems, nodes, {{0, 0, 2, 0}, {1, 0, 2, 1}});
    CHECK_NOTHROW(evaluate(c, 4));
    CHECK_THROWS_AS(evaluate(c, 3), StructuralError);
}

TEST_CASE("tuple decoding inverts the flat layout") {
    Rng rng(51);
    Matrix e0 = random_psd(2, rng);
    Matrix e1 = random_psd(2, rng);
    const double scale = 2.0 / (e0.trace().real() + e1.trace().real());
    Circuit c = three_node_chain(random_density(2, rng), random_channel(2, 2, 2, rng),
                                 make_measurement({scale * e0, scale * e1}));
    CircuitDistribution dist = evaluate(c);
    std::vector<Index> t = dist.tuple(1);
    REQUIRE(t.size() == 3);
    CHECK(t[0] == 0);
    CHECK(t[1] == 0);
    CHECK(t[2] == 1);
}

TEST_SUITE_END();
