#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "orbitlab/num_core.hpp"

using namespace orbitlab;

namespace {

std::vector<cplx> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> nd;
    std::vector<cplx> v(n);
    for (auto& z : v) z = {nd(rng), nd(rng)};
    return v;
}

// Row-by-row evaluation straight from the matrix definition.
std::vector<cplx> dense_reference(const UpperToeplitz& t, const std::vector<cplx>& x) {
    std::vector<cplx> y(t.dim);
    for (std::size_t j = 0; j < t.dim; ++j)
        for (std::size_t k = j; k < t.dim; ++k)
            if (k - j < t.coeffs.size()) y[j] += t.coeffs[k - j] * x[k];
    return y;
}

}  // namespace

TEST_CASE("toeplitz_apply small cases") {
    auto y = toeplitz_apply(UpperToeplitz({1.0}, 2), ComplexVector({5.0, 7.0}));
    CHECK(y[0] == cplx(5));
    CHECK(y[1] == cplx(7));

    y = toeplitz_apply(UpperToeplitz({2.0, 1.0}, 3), ComplexVector({1.0, 0.0, 0.0}));
    CHECK(y[0] == cplx(2));
    CHECK(y[1] == cplx(0));
    CHECK(y[2] == cplx(0));

    y = toeplitz_apply(UpperToeplitz({2.0, 1.0}, 3), ComplexVector({0.0, 1.0, 0.0}));
    CHECK(y[0] == cplx(1));
    CHECK(y[1] == cplx(2));
    CHECK(y[2] == cplx(0));
}

TEST_CASE("toeplitz_apply rejects dimension mismatch") {
    CHECK_THROWS_AS(toeplitz_apply(UpperToeplitz({1.0}, 3), ComplexVector({1.0, 2.0})), InvalidInput);
}

TEST_CASE("ComplexVector rejects non-finite entries") {
    CHECK_THROWS_AS(ComplexVector({1.0, std::numeric_limits<double>::quiet_NaN()}), InvalidInput);
    CHECK_THROWS_AS(ComplexVector(std::vector<cplx>{}), InvalidInput);
}

TEST_CASE("fft and direct paths agree with the dense definition") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dim(1, 512);
    double worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(dim(rng));
        const std::size_t m = 1 + rng() % n;
        UpperToeplitz t(random_vec(rng, m), n);
        auto xv = random_vec(rng, n);
        ComplexVector x(xv);
        auto ref = dense_reference(t, xv);
        auto a = toeplitz_apply_direct(t, x);
        auto b = toeplitz_apply_fft(t, x);
        for (std::size_t j = 0; j < n; ++j) {
            worst = std::max(worst, std::abs(a[j] - b[j]));
            worst = std::max(worst, std::abs(a[j] - ref[j]));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("toeplitz_apply is linear") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {17u, 600u}) {
        UpperToeplitz t(random_vec(rng, 40), n);
        auto x = random_vec(rng, n), y = random_vec(rng, n);
        const cplx a(0.3, -1.2), b(2.0, 0.5);
        std::vector<cplx> comb(n);
        for (std::size_t i = 0; i < n; ++i) comb[i] = a * x[i] + b * y[i];
        auto lhs = toeplitz_apply(t, ComplexVector(comb));
        auto tx = toeplitz_apply(t, ComplexVector(x)), ty = toeplitz_apply(t, ComplexVector(y));
        double err = 0, scale = 0;
        for (std::size_t i = 0; i < n; ++i) {
            err = std::max(err, std::abs(lhs[i] - (a * tx[i] + b * ty[i])));
            scale = std::max(scale, std::abs(lhs[i]));
        }
        CHECK(err <= 1e-13 * std::max(1.0, scale));
    }
}

TEST_CASE("min_eigenvalue examples") {
    CHECK(min_eigenvalue(DenseHermitian(Eigen::MatrixXcd::Identity(3, 3))) == doctest::Approx(1.0).epsilon(1e-14));
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = 1;
    d(1, 1) = 3;
    CHECK(min_eigenvalue(DenseHermitian(d)) == doctest::Approx(1.0).epsilon(1e-14));
    Eigen::MatrixXcd a(2, 2);
    a << 2, 1, 1, 2;
    CHECK(min_eigenvalue(DenseHermitian(a)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("min_eigenvalue rejects non-Hermitian input") {
    Eigen::MatrixXcd a(2, 2);
    a << 1, 2, 0, 1;
    CHECK_THROWS_AS(min_eigenvalue(DenseHermitian(a)), InvalidInput);
}

TEST_CASE("min_eigenvalue of a direct sum is the smaller part") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const int n1 = 3 + trial, n2 = 5 + 2 * trial;
        auto herm = [&](int n) {
            Eigen::MatrixXcd g(n, n);
            auto v = random_vec(rng, static_cast<std::size_t>(n * n));
            for (int i = 0; i < n * n; ++i) g.data()[i] = v[static_cast<std::size_t>(i)];
            return Eigen::MatrixXcd(g + g.adjoint());
        };
        auto a = herm(n1), b = herm(n2);
        Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n1 + n2, n1 + n2);
        s.topLeftCorner(n1, n1) = a;
        s.bottomRightCorner(n2, n2) = b;
        const double ea = min_eigenvalue(DenseHermitian(a)), eb = min_eigenvalue(DenseHermitian(b));
        CHECK(min_eigenvalue(DenseHermitian(s)) == doctest::Approx(std::min(ea, eb)).epsilon(1e-10));
    }
}

TEST_CASE("iterative path matches the dense solver") {
    // tridiagonal second-difference matrix: eigenvalues 2 - 2cos(k pi/(n+1))
    const int n = 1100;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = 2.0 + 0.001 * i;
        if (i + 1 < n) a(i, i + 1) = a(i + 1, i) = -1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
    CHECK(min_eigenvalue(DenseHermitian(a)) == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));
}

TEST_CASE("norms and inner products") {
    CHECK(lp_norm(ComplexVector({3.0, 4.0}), 2) == doctest::Approx(5.0));
    auto r = norms_and_inner(ComplexVector({1.0, 1.0}), ComplexVector({1.0, 1.0}),
                             std::numeric_limits<double>::infinity());
    CHECK(r.norm == 1.0);
    const cplx i(0, 1);
    auto s = norms_and_inner(ComplexVector({1.0, i}), ComplexVector({i, 1.0}), 2);
    CHECK(std::abs(s.inner) == 0.0);
    CHECK_THROWS_AS(norms_and_inner(ComplexVector({1.0}), ComplexVector({1.0}), 0.5), InvalidInput);
    CHECK(lp_norm(ComplexVector({1.0, -2.0, 2.0}), 1) == doctest::Approx(5.0));
}
