#include <doctest.h>

#include <tsopt/operation.hpp>
#include <tsopt/random.hpp>

using namespace tsopt;

namespace {

Matrix ket_bra(int i, Index d) {
    Matrix m = Matrix::Zero(d, d);
    m(i, i) = 1.0;
    return m;
}

double table_deviation(const RealMatrix& a, const RealMatrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// Outcome-wise action comparison of two operations.
double operation_deviation(const GeneralizedOperation& a, const GeneralizedOperation& b) {
    REQUIRE(a.n_outcomes() == b.n_outcomes());
    REQUIRE(a.dim_in() == b.dim_in());
    double worst = 0.0;
    for (Index o = 0; o < a.n_outcomes(); ++o) {
        worst = std::max(worst, (a.map(o).choi() - b.map(o).choi()).cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace

TEST_SUITE_BEGIN("operation");

TEST_CASE("construction rescales to unit weight") {
    // A map acting as ρ -> 2ρ normalizes back to the identity action.
    CPMap doubled = CPMap::identity(2).scaled(2.0);
    GeneralizedOperation op({doubled});
    Rng rng(21);
    Matrix rho = random_density(2, rng);
    CHECK((op.coarse().apply(rho) - rho).cwiseAbs().maxCoeff() < 1e-12);

    // An already-normalized channel is unchanged.
    CPMap ch = random_channel(2, 2, 2, rng);
    GeneralizedOperation std_op({ch});
    CHECK((std_op.coarse().choi() - ch.choi()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("non-unit-weight measurement is accepted") {
    const double q = 0.5;
    GeneralizedOperation meas =
        make_measurement({q * ket_bra(0, 2), (2 - q) * ket_bra(1, 2)});
    double total = meas.effect_operator(0).trace().real() + meas.effect_operator(1).trace().real();
    CHECK(total == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_FALSE(is_standard(meas));
}

TEST_CASE("all-zero maps are rejected") {
    CHECK_THROWS_AS(GeneralizedOperation({CPMap::zero(2, 2)}), NullOperationError);
}

TEST_CASE("probability special cases") {
    StatePair zero_state = StatePair::deterministic(ket_bra(0, 2));
    CHECK(probability(zero_state, EffectPair::povm_element(ket_bra(0, 2))) ==
          doctest::Approx(1.0).epsilon(1e-14));

    // Coarse effect supported away from the state: null pairing, value 0.
    Matrix e1 = 2.0 * ket_bra(1, 2);
    CHECK(probability(zero_state, EffectPair(e1, e1)) == 0.0);

    // Two-outcome bit pairing at p = q = 1/2.
    Matrix rho = 0.5 * ket_bra(0, 2);
    Matrix rho_bar = Matrix::Identity(2, 2) * 0.5;
    Matrix e = 0.5 * ket_bra(0, 2);
    Matrix e_bar = 0.5 * ket_bra(0, 2) + 1.5 * ket_bra(1, 2);
    CHECK(probability(StatePair(rho, rho_bar), EffectPair(e, e_bar)) ==
          doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("probability stays within the unit interval") {
    Rng rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        StatePair s = random_state_pair(3, rng);
        EffectPair e = random_effect_pair(3, rng);
        double p = probability(s, e);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0 + 1e-12);
    }
}

TEST_CASE("joint distribution of standard pairs reduces to traces") {
    Rng rng(23);
    GeneralizedOperation prep = make_preparation({0.5 * random_density(3, rng),
                                                  0.5 * random_density(3, rng)});
    GeneralizedOperation meas = make_measurement(random_povm(3, 3, rng));
    JointDistribution jd = joint_distribution(prep, meas);
    REQUIRE_FALSE(jd.null);
    double sum = 0.0;
    for (Index i = 0; i < 2; ++i) {
        for (Index j = 0; j < 3; ++j) {
            double born = (prep.state_operator(i) * meas.effect_operator(j)).trace().real();
            CHECK(std::abs(jd.table(i, j) - born) < 1e-12);
            sum += jd.table(i, j);
        }
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orthogonal prep/meas gives the null distribution") {
    GeneralizedOperation prep = make_preparation({ket_bra(0, 2)});
    GeneralizedOperation meas = make_measurement({2.0 * ket_bra(1, 2)});
    JointDistribution jd = joint_distribution(prep, meas);
    CHECK(jd.null);
    CHECK(jd.table.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sequential composition with the identity is neutral") {
    Rng rng(24);
    CPMap ch = random_channel(2, 2, 2, rng);
    GeneralizedOperation op({CPMap({ch.kraus()[0]}, 2, 2), CPMap({ch.kraus()[1]}, 2, 2)});
    GeneralizedOperation id_op({CPMap::identity(2)});
    auto left = compose_sequential(id_op, op);
    auto right = compose_sequential(op, id_op);
    REQUIRE(left.has_value());
    REQUIRE(right.has_value());
    CHECK(operation_deviation(*left, op) < 1e-12);
    CHECK(operation_deviation(*right, op) < 1e-12);
}

TEST_CASE("composing standard operations keeps them standard") {
    Rng rng(25);
    GeneralizedOperation a({random_channel(2, 3, 2, rng)});
    GeneralizedOperation b({random_channel(3, 2, 2, rng)});
    auto seq = compose_sequential(a, b);
    REQUIRE(seq.has_value());
    CHECK(is_standard(*seq));
    CHECK(is_standard(compose_parallel(a, b)));
}

TEST_CASE("composition onto an annihilating operation is null") {
    // Reset to |0> followed by a measurement that only sees |1>.
    Matrix reset = Matrix::Zero(2, 2);
    reset(0, 0) = 1.0;
    Matrix reset2 = Matrix::Zero(2, 2);
    reset2(0, 1) = 1.0;
    GeneralizedOperation to_zero({CPMap({reset, reset2}, 2, 2)});
    GeneralizedOperation meas_one = make_measurement({2.0 * ket_bra(1, 2)});
    // Measurements are operations into the trivial system.
    CHECK_FALSE(compose_sequential(to_zero, meas_one).has_value());
}

TEST_CASE("sequential composition is associative") {
    Rng rng(26);
    for (int trial = 0; trial < 10; ++trial) {
        GeneralizedOperation a({random_channel(2, 2, 2, rng).scaled(0.7),
                                random_channel(2, 2, 1, rng).scaled(0.3)});
        GeneralizedOperation b({random_channel(2, 2, 2, rng)});
        GeneralizedOperation c({random_channel(2, 2, 1, rng).scaled(0.5),
                                random_channel(2, 2, 2, rng).scaled(0.5)});
        auto ab = compose_sequential(a, b);
        auto bc = compose_sequential(b, c);
        REQUIRE(ab.has_value());
        REQUIRE(bc.has_value());
        auto left = compose_sequential(*ab, c);
        auto right = compose_sequential(a, *bc);
        REQUIRE(left.has_value());
        REQUIRE(right.has_value());
        CHECK(operation_deviation(*left, *right) < 1e-12);
    }
}

TEST_CASE("parallel composition multiplies dimensions and weights") {
    Rng rng(27);
    GeneralizedOperation id2({CPMap::identity(2)});
    GeneralizedOperation both = compose_parallel(id2, id2);
    CHECK(both.dim_in() == 4);
    CHECK((both.coarse().choi() - CPMap::identity(4).choi()).cwiseAbs().maxCoeff() < 1e-12);

    GeneralizedOperation a({random_channel(2, 2, 2, rng).scaled(0.4),
                            random_channel(2, 2, 2, rng).scaled(0.6)});
    GeneralizedOperation b({random_channel(3, 3, 2, rng)});
    GeneralizedOperation par = compose_parallel(a, b);
    CHECK(par.coarse().weight() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scaling all outcome operators leaves distributions unchanged") {
    Rng rng(28);
    std::vector<Matrix> states{0.3 * random_density(2, rng), 0.7 * random_density(2, rng)};
    std::vector<Matrix> scaled;
    for (const Matrix& s : states) scaled.push_back(5.0 * s);
    GeneralizedOperation meas = make_measurement(random_povm(2, 2, rng));
    JointDistribution a = joint_distribution(make_preparation(states), meas);
    JointDistribution b = joint_distribution(make_preparation(scaled), meas);
    CHECK(table_deviation(a.table, b.table) < 1e-13);
}

TEST_CASE("conditional distribution follows the coarse state") {
    Rng rng(29);
    Matrix rho_bar = random_density(2, rng);
    GeneralizedOperation meas =
        make_measurement({0.5 * ket_bra(0, 2), 1.5 * ket_bra(1, 2)});
    ConditionalDistribution cd = conditional_distribution(rho_bar, meas);
    REQUIRE_FALSE(cd.null);
    double den = (rho_bar * (meas.effect_operator(0) + meas.effect_operator(1))).trace().real();
    for (Index j = 0; j < 2; ++j) {
        double expected = (rho_bar * meas.effect_operator(j)).trace().real() / den;
        CHECK(std::abs(cd.p[static_cast<std::size_t>(j)] - expected) < 1e-13);
    }
    CHECK(cd.p[0] + cd.p[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("update kernels validate their invariants") {
    RealMatrix neg(1, 2);
    neg << 1.0, -0.1;
    CHECK_THROWS_AS(UpdateKernel{neg}, StructuralError);
    RealMatrix heavy(2, 1);
    heavy << 0.8, 0.4;
    CHECK_THROWS_AS(UpdateKernel{heavy}, StructuralError);
    CHECK_THROWS_AS(UpdateKernel::select(3, {5}), StructuralError);
    CHECK_THROWS_AS(UpdateKernel::select(3, {0}, 0.0), DomainError);
}

TEST_CASE("full coarse-graining produces the deterministic operation") {
    Rng rng(30);
    CPMap ch = random_channel(2, 2, 3, rng);
    std::vector<CPMap> split;
    for (const Matrix& k : ch.kraus()) split.emplace_back(std::vector<Matrix>{k}, 2, 2);
    GeneralizedOperation op(split);
    auto coarse = update(op, UpdateKernel::coarse_grain(op.n_outcomes()));
    REQUIRE(coarse.has_value());
    CHECK(coarse->n_outcomes() == 1);
    CHECK((coarse->map(0).choi() - op.coarse().choi()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("identity kernel is neutral and updates compose") {
    Rng rng(31);
    GeneralizedOperation op({random_channel(2, 2, 2, rng).scaled(0.2),
                             random_channel(2, 2, 2, rng).scaled(0.5),
                             random_channel(2, 2, 2, rng).scaled(0.3)});
    RealMatrix id3 = RealMatrix::Identity(3, 3);
    auto same = update(op, UpdateKernel(id3));
    REQUIRE(same.has_value());
    CHECK(operation_deviation(*same, op) < 1e-12);

    RealMatrix t1(2, 3);
    t1 << 0.5, 0.5, 0.0, 0.0, 0.25, 0.75;
    RealMatrix t2(1, 2);
    t2 << 0.5, 0.5;
    auto stepwise = update(*update(op, UpdateKernel(t1)), UpdateKernel(t2));
    auto direct = update(op, UpdateKernel(t2 * t1));
    REQUIRE(stepwise.has_value());
    REQUIRE(direct.has_value());
    CHECK(operation_deviation(*stepwise, *direct) < 1e-12);
}

TEST_CASE("subset selection renormalizes and can annihilate") {
    GeneralizedOperation meas =
        make_measurement({ket_bra(0, 2), ket_bra(1, 2)});
    auto kept = update(meas, UpdateKernel::select(2, {0}, 0.5));
    REQUIRE(kept.has_value());
    CHECK(kept->n_outcomes() == 1);
    // Renormalized to the measurement convention: a single effect of trace d.
    CHECK((kept->effect_operator(0) - 2.0 * ket_bra(0, 2)).cwiseAbs().maxCoeff() < 1e-12);

    RealMatrix zero = RealMatrix::Zero(1, 2);
    CHECK_FALSE(update(meas, UpdateKernel(zero)).has_value());
}

TEST_CASE("standardness classification") {
    Rng rng(32);
    CHECK(is_standard(GeneralizedOperation({CPMap::from_unitary(random_unitary(3, rng))})));
    GeneralizedOperation meas =
        make_measurement({0.5 * ket_bra(0, 2), 1.5 * ket_bra(1, 2)});
    CHECK_FALSE(is_standard(meas));
    GeneralizedOperation povm = make_measurement(random_povm(2, 2, rng));
    CHECK(is_standard(povm));
}

TEST_CASE("retrodictive map swaps boundary roles") {
    Rng rng(33);
    GeneralizedOperation mixed = make_preparation({Matrix::Identity(2, 2) * 0.5});
    GeneralizedOperation as_meas = retrodictive_map(mixed);
    CHECK(as_meas.is_measurement());
    CHECK((as_meas.effect_operator(0) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

    GeneralizedOperation pure = make_preparation({ket_bra(0, 2)});
    CHECK((retrodictive_map(pure).effect_operator(0) - 2.0 * ket_bra(0, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-12);

    // Involution: applying the map twice returns the original operation.
    GeneralizedOperation prep = make_preparation({0.4 * random_density(3, rng),
                                                  0.6 * random_density(3, rng)});
    CHECK(operation_deviation(retrodictive_map(retrodictive_map(prep)), prep) < 1e-12);

    // Swapping both ends of a pairing transposes the joint table.
    GeneralizedOperation meas = make_measurement(
        {0.7 * ket_bra(0, 3) + 0.2 * Matrix::Identity(3, 3),
         1.3 * ket_bra(2, 3) + 0.4 * Matrix::Identity(3, 3)});
    JointDistribution forward = joint_distribution(prep, meas);
    JointDistribution swapped =
        joint_distribution(retrodictive_map(meas), retrodictive_map(prep));
    CHECK(table_deviation(forward.table, swapped.table.transpose()) < 1e-12);
}

TEST_CASE("standardize rewrites the pair without changing the table") {
    Rng rng(34);

    // The identity coarse effect leaves everything in place.
    GeneralizedOperation prep = make_preparation({0.5 * random_density(2, rng),
                                                  0.5 * random_density(2, rng)});
    GeneralizedOperation povm = make_measurement(random_povm(2, 2, rng));
    StandardizedPair same = standardize(prep, povm);
    CHECK(operation_deviation(same.measurement, povm) < 1e-12);
    CHECK(operation_deviation(same.preparation, prep) < 1e-12);

    // The two-outcome bit measurement becomes the projective one.
    GeneralizedOperation bit_meas =
        make_measurement({0.5 * ket_bra(0, 2), 1.5 * ket_bra(1, 2)});
    StandardizedPair fixed = standardize(prep, bit_meas);
    CHECK((fixed.measurement.effect_operator(0) - ket_bra(0, 2)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((fixed.measurement.effect_operator(1) - ket_bra(1, 2)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(is_standard(fixed.measurement));

    // Joint distribution is preserved on a generic full-rank pair.
    GeneralizedOperation meas = make_measurement(
        {0.8 * random_psd(2, rng) + 0.2 * Matrix::Identity(2, 2),
         0.6 * random_psd(2, rng) + 0.1 * Matrix::Identity(2, 2)});
    StandardizedPair std_pair = standardize(prep, meas);
    JointDistribution before = joint_distribution(prep, meas);
    JointDistribution after = joint_distribution(std_pair.preparation, std_pair.measurement);
    CHECK(table_deviation(before.table, after.table) < 1e-12);
    CHECK(is_standard(std_pair.measurement));

    GeneralizedOperation singular = make_measurement({2.0 * ket_bra(0, 2)});
    CHECK_THROWS_AS(standardize(prep, singular), DomainError);
}

TEST_CASE("state and effect pair invariants are enforced") {
    Matrix rho = ket_bra(0, 2);
    CHECK_THROWS_AS(StatePair(rho, 2.0 * rho), DomainError);         // trace of coarse != 1
    CHECK_THROWS_AS(StatePair(rho, ket_bra(1, 2)), DomainError);     // not dominated
    CHECK_THROWS_AS(EffectPair(rho, rho), DomainError);              // coarse trace != d
    CHECK_NOTHROW(EffectPair(rho, Matrix::Identity(2, 2)));
    CHECK_THROWS_AS(EffectPair(3.0 * rho, Matrix::Identity(2, 2)), DomainError);
}

TEST_CASE("convexity witness finds the mixing gap") {
    Matrix d1 = Matrix::Zero(2, 2);
    d1.diagonal() << 0.7, 0.3;
    Matrix d2 = Matrix::Zero(2, 2);
    d2.diagonal() << 0.2, 0.8;
    StatePair s1 = StatePair::deterministic(d1);
    StatePair s2 = StatePair::deterministic(d2);
    const double q = 1.0 / 3.0;

    // Hand witness: E = diag(1.5, 0), coarse diag(1.5, 0.5).
    Matrix e = Matrix::Zero(2, 2);
    e(0, 0) = 1.5;
    Matrix e_bar = e;
    e_bar(1, 1) = 0.5;
    EffectPair hand(e, e_bar);
    StatePair mix = StatePair::deterministic(q * d1 + (1 - q) * d2);
    double hand_gap = std::abs(probability(mix, hand) -
                               q * probability(s1, hand) - (1 - q) * probability(s2, hand));
    CHECK(hand_gap > 0.01);

    ConvexityWitness found = convexity_witness(s1, s2, q);
    CHECK(found.gap > 0.01);
    // The reported gap must be reproducible from the reported effect.
    double replay = std::abs(probability(mix, found.effect) -
                             q * probability(s1, found.effect) -
                             (1 - q) * probability(s2, found.effect));
    CHECK(std::abs(replay - found.gap) < 1e-12);

    CHECK(convexity_witness(s1, s1, q).gap == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_SUITE_END();
