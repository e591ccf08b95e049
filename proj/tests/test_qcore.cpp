#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gravicav/qcore.hpp"

using namespace gravicav;
using qcore::Complex;
using qcore::Matrix;
using qcore::Vector;

namespace {

Matrix random_matrix(int dim, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(dist(gen), dist(gen));
    return m;
}

Vector random_state(int dim, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Complex(dist(gen), dist(gen));
    v.normalize();
    return v;
}

// reference exponential: Taylor series in long-double accumulation, only
// trustworthy for small norms
Matrix taylor_exp(const Matrix& m, int terms) {
    Matrix acc = Matrix::Identity(m.rows(), m.cols());
    Matrix power = acc;
    for (int j = 1; j <= terms; ++j) {
        power = (power * m / static_cast<double>(j)).eval();
        acc += power;
    }
    return acc;
}

}  // namespace

TEST_CASE("ladder operators") {
    const Matrix a3 = qcore::annihilation(3);
    CHECK(a3(0, 1) == Complex(1.0, 0.0));
    CHECK(std::abs(a3(1, 2) - std::sqrt(2.0)) == 0.0);
    CHECK(a3(2, 2) == Complex(0.0, 0.0));
    CHECK(a3.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)));

    const Matrix a2 = qcore::annihilation(2);
    CHECK(a2(0, 1) == Complex(1.0, 0.0));
    CHECK(a2(1, 0) == Complex(0.0, 0.0));

    CHECK_THROWS_AS(qcore::annihilation(1), InvalidDimension);
}

TEST_CASE("truncated commutator is identity except the top level") {
    const int dim = 7;
    const Matrix a = qcore::annihilation(dim);
    const Matrix comm = a * a.adjoint() - a.adjoint() * a;
    // sqrt(n)^2 re-rounds, so "exact" here means one ulp of the level index
    for (int n = 0; n + 1 < dim; ++n) CHECK(std::abs(comm(n, n) - Complex(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(comm(dim - 1, dim - 1) - Complex(1.0 - dim, 0.0)) < 1e-14);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (i != j) CHECK(comm(i, j) == Complex(0.0, 0.0));
}

TEST_CASE("number operator") {
    const Matrix n3 = qcore::number_operator(3);
    CHECK(n3(0, 0) == Complex(0.0, 0.0));
    CHECK(n3(1, 1) == Complex(1.0, 0.0));
    CHECK(n3(2, 2) == Complex(2.0, 0.0));

    const Matrix a = qcore::annihilation(5);
    CHECK((qcore::number_operator(5) - a.adjoint() * a).cwiseAbs().maxCoeff() < 1e-14);

    const auto coh = qcore::coherent_state(1.0, 24);
    const Complex mean = qcore::expectation(coh, qcore::number_operator(24));
    CHECK(std::abs(mean - Complex(1.0, 0.0)) < 1e-9);
}

TEST_CASE("coherent state") {
    const auto vac = qcore::coherent_state(0.0, 8);
    CHECK(std::abs(vac.amplitudes(0) - 1.0) == 0.0);
    CHECK(vac.discarded_mass == 0.0);

    const auto coh = qcore::coherent_state(1.0, 24);
    CHECK(std::abs(coh.amplitudes.norm() - 1.0) < 1e-12);
    const Complex a_mean = qcore::expectation(coh, qcore::annihilation(24));
    CHECK(std::abs(a_mean - Complex(1.0, 0.0)) < 1e-9);

    CHECK_THROWS_AS(qcore::coherent_state(3.0, 8), TailOverflow);
    // mean far outside the basis is rejected even where term-by-term sums underflow
    CHECK_THROWS_AS(qcore::coherent_state(100.0, 64), TailOverflow);
    // mean inside the basis with a negligible exact tail is accepted
    CHECK_NOTHROW(qcore::coherent_state(5.0, 64));
}

TEST_CASE("squeezed vacuum") {
    const auto vac = qcore::squeezed_vacuum(0.0, 0.0, 16);
    CHECK(std::abs(vac.amplitudes(0) - 1.0) < 1e-15);

    const auto sq = qcore::squeezed_vacuum(1.0, 0.0, 32);
    CHECK(std::abs(sq.amplitudes.norm() - 1.0) < 1e-12);
    const double mean = qcore::expectation(sq, qcore::number_operator(32)).real();
    const double expected = std::sinh(1.0) * std::sinh(1.0);
    CHECK(std::abs(mean - expected) < 0.02 * expected);
    CHECK(std::abs(mean - 1.3811) < 0.01);
    for (int n = 1; n < 32; n += 2) CHECK(sq.amplitudes(n) == Complex(0.0, 0.0));

    // parity kills the quadrature mean exactly
    const Matrix quad = qcore::annihilation(32) + qcore::creation(32);
    CHECK(std::abs(qcore::expectation(sq, quad)) < 1e-8);

    CHECK_THROWS_AS(qcore::squeezed_vacuum(3.0, 0.0, 16), TailOverflow);
}

TEST_CASE("displacement operator") {
    CHECK((qcore::displacement_operator(0.0, 12) - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() <
          1e-14);

    const Complex beta(0.5, 0.0);
    const Matrix d = qcore::displacement_operator(beta, 24);
    const auto coh = qcore::coherent_state(beta, 24);
    const Vector displaced_vac = d.col(0);
    CHECK((displaced_vac - coh.amplitudes).cwiseAbs().maxCoeff() < 1e-8);

    // vacuum overlap e^{-|beta|^2/2}
    CHECK(std::abs(d(0, 0) - std::exp(-0.125)) < 1e-6);
    CHECK(std::abs(d(0, 0) - 0.88250) < 1e-5);

    CHECK_THROWS_AS(qcore::displacement_operator(Complex(4.0, 0.0), 16), TailOverflow);
}

TEST_CASE("displacement inverse pairs") {
    // D(beta) D(-beta) = 1 exactly: same truncated generator, opposite sign
    for (double b : {0.3, 0.9, 1.3}) {
        const int dim = 16;  // |beta|^2 <= dim/8
        const Matrix d1 = qcore::displacement_operator(b, dim);
        const Matrix d2 = qcore::displacement_operator(-b, dim);
        CHECK((d1 * d2 - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("squeeze operator") {
    CHECK((qcore::squeeze_operator(0.0, 0.0, 12) - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() <
          1e-14);

    const Matrix s = qcore::squeeze_operator(1.0, 0.0, 32);
    CHECK(qcore::unitarity_residual(s) < 1e-8);

    // two independent constructions of the squeezed vacuum. The operator
    // route reflects amplitude off the truncation boundary, so full-vector
    // agreement at 1e-6 needs a tall basis; on a short basis the low-lying
    // amplitudes agree long before the top does.
    const Matrix s112 = qcore::squeeze_operator(1.0, 0.0, 112);
    const auto sq112 = qcore::squeezed_vacuum(1.0, 0.0, 112);
    CHECK((s112.col(0) - sq112.amplitudes).cwiseAbs().maxCoeff() < 1e-6);

    const Matrix s64 = qcore::squeeze_operator(1.0, 0.0, 64);
    const auto sq64 = qcore::squeezed_vacuum(1.0, 0.0, 64);
    CHECK((s64.col(0).head(28) - sq64.amplitudes.head(28)).cwiseAbs().maxCoeff() < 1e-6);

    CHECK_THROWS_AS(qcore::squeeze_operator(2.5, 0.0, 12), TailOverflow);
}

TEST_CASE("matrix exponential") {
    CHECK((qcore::matrix_exp(Matrix::Zero(5, 5)) - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() ==
          0.0);

    // diagonal phases
    const Complex i_pi(0.0, M_PI);
    const Matrix m = i_pi * qcore::number_operator(4);
    const Matrix e = qcore::matrix_exp(m);
    const double signs[] = {1.0, -1.0, 1.0, -1.0};
    for (int k = 0; k < 4; ++k) CHECK(std::abs(e(k, k) - signs[k]) < 1e-10);

    // anti-hermitian input gives a unitary
    Matrix g = random_matrix(14, 7);
    g = ((g - g.adjoint()) / 2.0).eval();
    CHECK(qcore::unitarity_residual(qcore::matrix_exp(g)) < 1e-10);

    // small-norm general matrix against the Taylor reference
    Matrix r = random_matrix(10, 11);
    r *= 0.35 / r.cwiseAbs().maxCoeff();
    CHECK((qcore::matrix_exp(r) - taylor_exp(r, 30)).cwiseAbs().maxCoeff() < 1e-13);

    // squaring consistency exp(M) = exp(M/2)^2 for a general matrix
    Matrix big = random_matrix(12, 3);
    big *= 8.0 / big.cwiseAbs().maxCoeff();
    const Matrix half = qcore::matrix_exp((big / 2.0).eval());
    CHECK((qcore::matrix_exp(big) - half * half).cwiseAbs().maxCoeff() < 1e-9);

    Matrix bad = Matrix::Zero(3, 3);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(qcore::matrix_exp(bad), ExpmFailure);
}

TEST_CASE("embedding") {
    const std::vector<int> dims{3, 2};
    CHECK((qcore::embed(qcore::identity(3), dims, 0) - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() ==
          0.0);

    // number on slot 0 of a (3,2) space
    const Matrix n0 = qcore::embed(qcore::number_operator(3), dims, 0);
    const double expected[] = {0, 0, 1, 1, 2, 2};
    for (int k = 0; k < 6; ++k) CHECK(n0(k, k) == Complex(expected[k], 0.0));

    // operators on distinct slots commute
    const Matrix a0 = qcore::embed(qcore::annihilation(3), dims, 0);
    const Matrix b1 = qcore::embed(qcore::annihilation(2), dims, 1);
    CHECK((a0 * b1 - b1 * a0).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(qcore::embed(qcore::annihilation(4), dims, 0), DimensionMismatch);
}

TEST_CASE("pair embedding matches single-slot embeddings") {
    const std::vector<int> dims{3, 4, 2};
    const Matrix na = qcore::number_operator(3);
    const Matrix ab = qcore::annihilation(4);
    // pair operator n (x) a on slots (0, 1)
    const Matrix pair01 = qcore::embed_pair(qcore::kronecker(na, ab), dims, 0, 1);
    const Matrix ref01 = qcore::embed(na, dims, 0) * qcore::embed(ab, dims, 1);
    CHECK((pair01 - ref01).cwiseAbs().maxCoeff() < 1e-15);

    const Matrix ac = qcore::annihilation(2);
    const Matrix pair02 = qcore::embed_pair(qcore::kronecker(na, ac), dims, 0, 2);
    const Matrix ref02 = qcore::embed(na, dims, 0) * qcore::embed(ac, dims, 2);
    CHECK((pair02 - ref02).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("expectation") {
    const auto vac = qcore::fock_state(0, 6);
    CHECK(qcore::expectation(vac, qcore::number_operator(6)) == Complex(0.0, 0.0));

    const auto coh = qcore::coherent_state(1.0, 24);
    const Matrix quad = qcore::annihilation(24) + qcore::creation(24);
    CHECK(std::abs(qcore::expectation(coh, quad) - Complex(2.0, 0.0)) < 1e-8);

    CHECK_THROWS_AS(qcore::expectation(vac.amplitudes, qcore::number_operator(5)), DimensionMismatch);
}

TEST_CASE("expectation is linear and conjugate-symmetric") {
    std::mt19937 gen(99);
    for (int round = 0; round < 20; ++round) {
        const int dim = 8;
        const Vector psi = random_state(dim, gen());
        const Matrix m1 = random_matrix(dim, gen());
        const Matrix m2 = random_matrix(dim, gen());
        const Complex c(0.7, -0.3);

        const Complex lin = qcore::expectation(psi, (m1 * c + m2).eval());
        CHECK(std::abs(lin - (c * qcore::expectation(psi, m1) + qcore::expectation(psi, m2))) < 1e-12);

        const Complex sym = qcore::expectation(psi, m1.adjoint().eval());
        CHECK(std::abs(sym - std::conj(qcore::expectation(psi, m1))) < 1e-12);
    }
}

TEST_CASE("apply_annihilation agrees with the embedded matrix") {
    const std::vector<int> dims{4, 3, 2};
    std::mt19937 gen(5);
    const Vector psi = random_state(4 * 3 * 2, gen());
    for (int slot = 0; slot < 3; ++slot) {
        const Matrix a = qcore::embed(qcore::annihilation(dims[slot]), dims, slot);
        CHECK((qcore::apply_annihilation(psi, dims, slot) - a * psi).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("tensor product ordering: mode 0 slowest") {
    const Vector one = qcore::fock_state(1, 2).amplitudes;
    const Vector zero = qcore::fock_state(0, 3).amplitudes;
    const Vector prod = qcore::tensor_product(std::array{one, zero});
    CHECK(prod.size() == 6);
    CHECK(prod(3) == Complex(1.0, 0.0));  // |1,0> at flat index 1*3+0
}

TEST_CASE("unitarity of expm of anti-hermitian generators") {
    std::mt19937 gen(2024);
    for (int round = 0; round < 10; ++round) {
        Matrix g = random_matrix(12, gen());
        g = ((g - g.adjoint()) * 0.5).eval();
        CHECK(qcore::unitarity_residual(qcore::matrix_exp(g)) < 1e-8);
    }
}

TEST_CASE("tail masses") {
    const std::vector<int> dims{4, 4};
    Vector psi = Vector::Zero(16);
    psi(3 * 4 + 0) = 1.0;  // |3,0>: top level of mode 0
    CHECK(qcore::mode_tail_mass(psi, dims, 0) == 1.0);
    CHECK(qcore::mode_tail_mass(psi, dims, 1) == 0.0);
    CHECK(qcore::total_tail_mass(psi, dims) == 1.0);
}

TEST_CASE("guarded max") {
    const std::vector<int> dims{4, 4};
    Matrix m = Matrix::Zero(16, 16);
    m(3 * 4 + 3, 0) = 5.0;  // row touches the top levels: excluded
    m(1 * 4 + 1, 0) = 0.25;
    CHECK(qcore::guarded_max_abs(m, dims, 2) == 0.25);
    CHECK(qcore::guarded_max_abs(m, dims, 0) == 5.0);
}

TEST_CASE("tolerances validate") {
    qcore::Tolerances t;
    CHECK_NOTHROW(t.validate());
    t.tail = 0.0;
    CHECK_THROWS_AS(t.validate(), InvalidParameter);
}
