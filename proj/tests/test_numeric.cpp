#include <doctest.h>

#include <complex>
#include <random>

#include "af/errors.hpp"
#include "af/numeric.hpp"

using af::ComplexValue;
using af::Rational;

TEST_CASE("unit_exponential at quarter points") {
    CHECK(std::abs(af::unit_exponential(0.0) - ComplexValue(1, 0)) < 1e-14);
    CHECK(std::abs(af::unit_exponential(0.5) - ComplexValue(-1, 0)) < 1e-14);
    CHECK(std::abs(af::unit_exponential(0.25) - ComplexValue(0, 1)) < 1e-14);
    CHECK(std::abs(af::unit_exponential(Rational(1, 2)) - ComplexValue(-1, 0)) < 1e-15);
    CHECK(std::abs(std::abs(af::unit_exponential(0.3712)) - 1.0) < 1e-14);
    CHECK_THROWS_AS(af::unit_exponential(std::numeric_limits<double>::infinity()),
                    af::NumericDomainError);
}

TEST_CASE("unit_exponential is 1-periodic for large arguments") {
    std::mt19937 gen(271828);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    for (int i = 0; i < 200; ++i) {
        double t = dist(gen);
        CHECK(std::abs(af::unit_exponential(t + 1.0) - af::unit_exponential(t)) < 1e-12);
    }
}

TEST_CASE("hermitian_eigenvalues on pinned matrices") {
    Eigen::MatrixXcd id3 = Eigen::MatrixXcd::Identity(3, 3);
    Eigen::VectorXd ev = af::hermitian_eigenvalues(id3);
    for (int i = 0; i < 3; ++i) CHECK(ev(i) == doctest::Approx(1.0).epsilon(1e-12));

    Eigen::MatrixXcd two = 2.0 * Eigen::MatrixXcd::Identity(2, 2);
    ev = af::hermitian_eigenvalues(two);
    CHECK(ev(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ev(1) == doctest::Approx(2.0).epsilon(1e-12));

    // A = M*M for B={0,1}, L={0,1/3}: eigenvalues 2 -+ |1+e^{2pi i/3}| = {1,3}
    Eigen::MatrixXcd m(2, 2);
    m(0, 0) = 1;
    m(0, 1) = 1;
    m(1, 0) = 1;
    m(1, 1) = std::polar(1.0, 2.0 * 3.14159265358979323846 / 3.0);
    Eigen::MatrixXcd a = m.adjoint() * m;
    ev = af::hermitian_eigenvalues(a);
    CHECK(ev(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ev(1) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("eigenvalue sums match traces for random Hermitian matrices") {
    std::mt19937 gen(577215);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int dim = 2; dim <= 16; dim += 7) {
        Eigen::MatrixXcd x(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) x(i, j) = ComplexValue(dist(gen), dist(gen));
        Eigen::MatrixXcd a = x + x.adjoint();
        Eigen::VectorXd ev = af::hermitian_eigenvalues(a);
        double norm = a.cwiseAbs().maxCoeff();
        CHECK(std::abs(ev.sum() - a.real().trace()) <= 1e-10 * dim * std::max(1.0, norm));
        for (int i = 1; i < dim; ++i) CHECK(ev(i - 1) <= ev(i) + 1e-14);
    }
}

TEST_CASE("make_hermitian symmetrizes and rejects junk") {
    Eigen::MatrixXcd a(2, 2);
    a << 1.0, ComplexValue(0, 1), ComplexValue(0, -1), 2.0;
    Eigen::MatrixXcd h = af::make_hermitian(a);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-15);

    Eigen::MatrixXcd b(2, 2);
    b << 1.0, 5.0, -5.0, 2.0;  // grossly non-Hermitian
    CHECK_THROWS_AS(af::make_hermitian(b), af::NumericDomainError);
    CHECK_THROWS_AS(af::hermitian_eigenvalues(Eigen::MatrixXcd::Ones(2, 3)),
                    af::ArgumentError);
}
