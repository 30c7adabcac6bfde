#include <doctest.h>

#include <tsopt/linalg.hpp>
#include <tsopt/random.hpp>

using namespace tsopt;

TEST_SUITE_BEGIN("linalg");

TEST_CASE("tensor dimensions and ordering") {
    Matrix a = Matrix::Zero(2, 2);
    a << 1, 2, 3, 4;
    Matrix b = Matrix::Identity(3, 3);
    Matrix t = tensor(a, b);
    REQUIRE(t.rows() == 6);
    // First factor varies slowest: t = a (x) b blockwise.
    CHECK(t(0, 0) == Complex(1, 0));
    CHECK(t(3, 0) == Complex(3, 0));
    CHECK(t(0, 3) == Complex(2, 0));
    CHECK(t(4, 4) == Complex(4, 0));
}

TEST_CASE("partial trace over each factor") {
    Rng rng(1);
    Matrix a = random_density(2, rng);
    Matrix b = random_density(3, rng);
    Matrix ab = tensor(a, b);
    CHECK((partial_trace(ab, 2, 3, Keep::First) - a).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((partial_trace(ab, 2, 3, Keep::Second) - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("factor permutation reorders tensor factors") {
    Rng rng(2);
    Matrix x = random_gaussian(2, 1, rng);
    Matrix y = random_gaussian(3, 1, rng);
    Matrix z = random_gaussian(2, 1, rng);
    std::vector<Index> dims{2, 3, 2};
    // order[k] names which input factor lands in slot k of the output.
    Matrix p = factor_permutation(dims, {2, 0, 1});
    Matrix lhs = p * tensor(tensor(x, y), z);
    Matrix rhs = tensor(tensor(z, x), y);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sqrt and pinv sqrt on singular psd input") {
    Rng rng(3);
    Matrix p = random_projector(4, 2, rng);
    Matrix s = sqrt_psd(p);
    CHECK((s * s - p).cwiseAbs().maxCoeff() < 1e-10);
    Matrix pis = pinv_sqrt_psd(p);
    // On the support, pinv sqrt inverts the sqrt.
    CHECK((s * pis - support_projector(p)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("support projector annihilates the kernel") {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 2.0;
    m(2, 2) = 1e-3;
    Matrix pi = support_projector(m);
    CHECK(std::abs(pi.trace().real() - 2.0) < 1e-12);
    CHECK(std::abs(pi(1, 1).real()) < 1e-12);
}

TEST_SUITE_END();
