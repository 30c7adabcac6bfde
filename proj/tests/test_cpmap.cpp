#include <doctest.h>

#include <tsopt/cpmap.hpp>
#include <tsopt/random.hpp>

using namespace tsopt;

namespace {

// Compares map actions on the full matrix-unit basis.
double action_deviation(const CPMap& a, const CPMap& b) {
    REQUIRE(a.dim_in() == b.dim_in());
    double worst = 0.0;
    for (Index i = 0; i < a.dim_in(); ++i) {
        for (Index j = 0; j < a.dim_in(); ++j) {
            Matrix unit = Matrix::Zero(a.dim_in(), a.dim_in());
            unit(i, j) = 1.0;
            worst = std::max(worst, (a.apply(unit) - b.apply(unit)).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

}  // namespace

TEST_SUITE_BEGIN("cpmap");

TEST_CASE("identity map Choi matrix") {
    Matrix choi = CPMap::identity(2).choi();
    // Σ_ij |ii><jj| : rank one, trace 2.
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = expected(0, 3) = expected(3, 0) = expected(3, 3) = 1.0;
    CHECK((choi - expected).cwiseAbs().maxCoeff() < 1e-14);
    Eigen::VectorXd ev = hermitian_eigenvalues(choi);
    CHECK(ev(ev.size() - 1) == doctest::Approx(2.0));
    CHECK(ev(ev.size() - 2) == doctest::Approx(0.0));
}

TEST_CASE("tensor of identities is the composite identity") {
    CPMap id4 = CPMap::identity(2).tensor(CPMap::identity(2));
    CHECK((id4.choi() - CPMap::identity(4).choi()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("tensor Choi equals permuted Choi product") {
    Rng rng(11);
    CPMap m = random_channel(2, 2, 2, rng);
    CPMap n = random_channel(2, 2, 3, rng);
    // Choi(M ⊗ N) lives on (A1 A2) ⊗ (B1 B2); Choi(M) ⊗ Choi(N) on
    // (A1 B1) ⊗ (A2 B2). Reorder factors [A1 B1 A2 B2] -> [A1 A2 B1 B2].
    Matrix p = factor_permutation({2, 2, 2, 2}, {0, 2, 1, 3});
    Matrix lhs = m.tensor(n).choi();
    Matrix rhs = p * tensor(m.choi(), n.choi()) * p.adjoint();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Kraus to Choi round trip preserves the action") {
    Rng rng(12);
    for (auto [din, dout] : {std::pair<Index, Index>{2, 2}, {2, 3}, {3, 2}}) {
        CPMap m = random_channel(din, dout, 3, rng);
        CPMap back(choi_to_kraus(m.choi(), din, dout), din, dout);
        CHECK(action_deviation(m, back) < 1e-9);
    }
}

TEST_CASE("explicit rank-two map has diagonal Choi and equal round trip") {
    Matrix k0 = Matrix::Zero(2, 2);
    k0(0, 0) = 1.0;  // |0><0|
    Matrix k1 = Matrix::Zero(2, 2);
    k1(0, 1) = 1.0;  // |0><1|
    CPMap m({k0, k1}, 2, 2);
    Matrix choi = m.choi();
    for (Index r = 0; r < 4; ++r) {
        for (Index c = 0; c < 4; ++c) {
            if (r != c) CHECK(std::abs(choi(r, c)) < 1e-14);
        }
    }
    CPMap back = m.canonicalized();
    CHECK(action_deviation(m, back) < 1e-12);
}

TEST_CASE("complete positivity on random inputs") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        CPMap m = random_channel(3, 2, 2, rng);
        Matrix out = m.apply(random_density(3, rng));
        CHECK(is_psd(out));
    }
}

TEST_CASE("canonicalized list is minimal and deterministic") {
    Rng rng(14);
    // Six redundant Kraus operators on a qubit collapse to at most four.
    std::vector<Matrix> kraus;
    for (int i = 0; i < 6; ++i) kraus.push_back(random_gaussian(2, 2, rng) * 0.3);
    CPMap m(kraus, 2, 2);
    CPMap canon = m.canonicalized();
    CHECK(canon.kraus().size() <= 4);
    CHECK(action_deviation(m, canon) < 1e-9);
    CPMap again = canon.canonicalized();
    REQUIRE(again.kraus().size() == canon.kraus().size());
    for (std::size_t i = 0; i < canon.kraus().size(); ++i) {
        CHECK((again.kraus()[i] - canon.kraus()[i]).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("weight of a channel is one and scales linearly") {
    Rng rng(15);
    CPMap m = random_channel(3, 3, 2, rng);
    CHECK(m.weight() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.scaled(0.25).weight() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(m.is_trace_preserving());
    CHECK_FALSE(m.scaled(0.5).is_trace_preserving());
}

TEST_CASE("compose matches pointwise application") {
    Rng rng(16);
    CPMap inner = random_channel(2, 3, 2, rng);
    CPMap outer = random_channel(3, 2, 2, rng);
    Matrix rho = random_density(2, rng);
    Matrix direct = outer.apply(inner.apply(rho));
    Matrix composed = outer.compose(inner).apply(rho);
    CHECK((direct - composed).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("adjoint action satisfies the trace duality") {
    Rng rng(17);
    CPMap m = random_channel(2, 3, 2, rng);
    Matrix rho = random_density(2, rng);
    Matrix x = random_psd(3, rng);
    Complex lhs = (x * m.apply(rho)).trace();
    Complex rhs = (m.apply_adjoint(x) * rho).trace();
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("from_unitary acts by conjugation") {
    Rng rng(18);
    Matrix u = random_unitary(3, rng);
    Matrix rho = random_density(3, rng);
    CHECK((CPMap::from_unitary(u).apply(rho) - u * rho * u.adjoint()).cwiseAbs().maxCoeff() <
          1e-13);
}

TEST_CASE("zero map predicate") {
    CHECK(CPMap::zero(2, 3).is_zero());
    CHECK_FALSE(CPMap::identity(2).is_zero());
}

TEST_CASE("construction rejects mismatched Kraus shapes") {
    std::vector<Matrix> kraus{Matrix::Identity(2, 2), Matrix::Identity(3, 3)};
    CHECK_THROWS_AS(CPMap(kraus, 2, 2), StructuralError);
}

TEST_CASE("choi_to_kraus rejects non-PSD input") {
    Matrix bad = Matrix::Identity(4, 4);
    bad(0, 0) = -1.0;
    CHECK_THROWS_AS(choi_to_kraus(bad, 2, 2), DomainError);
}

TEST_SUITE_END();
