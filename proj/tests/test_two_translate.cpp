#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "af/errors.hpp"
#include "af/numeric.hpp"
#include "af/two_translate.hpp"

using af::Domain;
using af::ExactScalar;
using af::ExactVec;
using af::Rational;

namespace {

ExactVec v1(const Rational& x) { return {ExactScalar(x)}; }

af::SpectrumSpec lattice1(const ExactScalar& gen,
                          std::vector<ExactScalar> offsets = {}) {
    af::LatticeCosets z;
    z.generators = {{gen}};
    for (const auto& o : offsets) z.offsets.push_back({o});
    return af::SpectrumSpec(z);
}

Domain interval(const Rational& a, const Rational& b) {
    return Domain::box(v1(a), v1(b - a));
}

// the standard rational witness problem: Omega=[0,1], Lambda=Z, Omega2=[0,2],
// Lambda2=(1/2)Z, a=2 (so a.Lambda2 is integral), beta adjustable
af::TwoTranslateProblem rational_problem(const Rational& beta) {
    af::TwoTranslateProblem p;
    p.omega = Domain::unit_interval();
    p.lambda = lattice1(ExactScalar(1));
    p.omega2 = interval(0, 2);
    p.lambda2 = lattice1(ExactScalar(Rational(1, 2)));
    p.a = v1(2);
    p.beta = v1(beta);
    return p;
}

}  // namespace

TEST_CASE("alpha_of is an exact volume ratio") {
    CHECK(af::alpha_of(Domain::unit_interval(), Domain::unit_interval()) == 2.0);
    CHECK(af::alpha_of(Domain::unit_interval(), interval(0, 2)) == 4.0);

    Domain sq = Domain::box({ExactScalar(0), ExactScalar(0)}, {ExactScalar(1), ExactScalar(1)});
    Domain strip = Domain::box({ExactScalar(0), ExactScalar(0)}, {ExactScalar(3), ExactScalar(1)});
    CHECK(af::alpha_of(sq, strip) == 6.0);

    CHECK_THROWS_AS(af::alpha_of(interval(0, 2), Domain::unit_interval()),
                    af::HypothesisError);
}

TEST_CASE("r_pm collapses at integral phases and at theta = pi") {
    auto [lo, hi] = af::r_pm_theta(0.0, 3.0);
    CHECK(lo == 0.0);  // exact, no cancellation
    CHECK(hi == doctest::Approx(10.0).epsilon(1e-14));

    auto [l4, h4] = af::r_pm(v1(Rational(1, 2)), v1(0), v1(1), 4.0);
    CHECK(l4 == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(h4 == doctest::Approx(8.0).epsilon(1e-12));

    auto [l2, h2] = af::r_pm(v1(Rational(1, 2)), v1(0), v1(1), 2.0);
    CHECK(l2 == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(h2 == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("r_pm matches the 2x2 frame-operator block eigenvalues") {
    std::mt19937 gen(399874);
    std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
    for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
        for (int trial = 0; trial < 30; ++trial) {
            double theta = dist(gen);
            auto [lo, hi] = af::r_pm_theta(theta, alpha);

            Eigen::MatrixXcd m(2, 2);
            m(0, 0) = 2.0 * (alpha + 1.0 + std::cos(theta));
            m(0, 1) = af::ComplexValue(0, 2.0 * std::sin(theta));
            m(1, 0) = af::ComplexValue(0, -2.0 * std::sin(theta));
            m(1, 1) = 2.0 * (1.0 - std::cos(theta));
            Eigen::VectorXd ev = af::hermitian_eigenvalues(m);
            CHECK(std::abs(ev(0) - lo) <= 1e-10);
            CHECK(std::abs(ev(1) - hi) <= 1e-10);

            // trace / determinant identities
            CHECK(std::abs((lo + hi) - 2.0 * (2.0 + alpha)) <= 1e-10);
            CHECK(std::abs(lo * hi - 4.0 * alpha * (1.0 - std::cos(theta))) <= 1e-10);
            CHECK(lo >= 0.0);
            CHECK(hi <= 2.0 * (2.0 + alpha) + 1e-12);
        }
    }
}

TEST_CASE("decide_gsp accepts the rational two-translate witness") {
    af::GspDecision dec = af::decide_gsp(rational_problem(Rational(1, 3)), ExactScalar(50));
    CHECK(dec.is_gsp);
    CHECK(dec.condition_i);
    CHECK(dec.condition_i_literal);
    CHECK(dec.condition_ii);
    CHECK(dec.alpha == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(dec.mode == "equality");
    CHECK(dec.exact_mode);
    REQUIRE(dec.residues.size() == 1);
    CHECK(dec.residues[0] == Rational(2, 3));
    double want = 6.0 - 2.0 * std::sqrt(3.0);
    CHECK(dec.residue_min_r_minus == doctest::Approx(want).epsilon(1e-12));
    CHECK(dec.inf_r_minus == doctest::Approx(want).epsilon(1e-12));
    CHECK(dec.inf_r_minus > 0.0);
    CHECK(dec.lambda_sets_disjoint);
    CHECK(!dec.constants_halved);
    for (const auto& p : dec.spectrum_sample) {
        CHECK(p.r_minus >= 0.0);
        CHECK(p.r_minus <= p.r_plus);
        CHECK(p.r_plus <= 2.0 * (2.0 + dec.alpha) + 1e-12);
    }
}

TEST_CASE("decide_gsp rejects via condition (i) when a residue hits zero") {
    af::GspDecision dec = af::decide_gsp(rational_problem(Rational(1, 2)), ExactScalar(50));
    CHECK(!dec.is_gsp);
    CHECK(!dec.condition_i);
    REQUIRE(dec.condition_i_witness.has_value());
    // the witness phase is integral, so its lower eigenvalue vanishes
    ExactScalar phase = af::dot(v1(2), {(*dec.condition_i_witness)[0] + ExactScalar(Rational(1, 2))});
    CHECK(phase.is_integer());
    CHECK(!dec.condition_i_literal);  // every residue is zero: a annihilates Lambda+beta
    CHECK(dec.condition_ii);
    CHECK(dec.residues == std::vector<Rational>{Rational(0)});
    CHECK(dec.residue_min_r_minus == 0.0);
}

TEST_CASE("pointwise and literal readings of condition (i) can disagree") {
    af::TwoTranslateProblem p = rational_problem(Rational(1, 2));
    p.lambda = lattice1(ExactScalar(1), {ExactScalar(0), ExactScalar(Rational(1, 4))});
    af::GspDecision dec = af::decide_gsp(p, ExactScalar(50));
    CHECK(!dec.condition_i);        // the integer coset gives integral phases
    CHECK(dec.condition_i_literal); // but the shifted coset does not annihilate
    CHECK(!dec.is_gsp);
    REQUIRE(dec.residues.size() == 2);
    CHECK(dec.residues[0] == Rational(0));
    CHECK(dec.residues[1] == Rational(1, 2));
}

TEST_CASE("decide_gsp rejects irrational a via condition (ii)") {
    af::TwoTranslateProblem p;
    p.omega = Domain::unit_interval();
    p.lambda = lattice1(ExactScalar(1));
    p.omega2 = interval(0, 2);
    ExactScalar half_r2 = ExactScalar::make(Rational(0), Rational(1, 2), af::Integer(2));
    p.lambda2 = lattice1(half_r2);  // sqrt2 . (n sqrt2/2) = n, integral
    p.a = {ExactScalar::sqrt_of(Rational(2))};
    p.beta = v1(Rational(1, 3));

    af::GspDecision dec = af::decide_gsp(p, ExactScalar(100));
    CHECK(!dec.is_gsp);
    CHECK(!dec.condition_ii);
    REQUIRE(dec.condition_ii_witness.has_value());
    CHECK(dec.condition_i);  // sqrt2 (n + 1/3) is never an integer
    CHECK(!dec.exact_mode);

    // truncation growth drives the infimum of r_minus to 0
    double prev = dec.inf_r_minus;
    for (const ExactScalar& radius : {ExactScalar(1000), ExactScalar(10000)}) {
        af::GspDecision d = af::decide_gsp(p, radius);
        CHECK(d.inf_r_minus <= prev + 1e-15);
        prev = d.inf_r_minus;
    }
    CHECK(prev <= 1e-4);
}

TEST_CASE("two-translate hypothesis violations throw") {
    af::TwoTranslateProblem p = rational_problem(Rational(1, 3));

    p.a = v1(Rational(1, 2));  // copies overlap on positive volume
    CHECK_THROWS_AS(af::decide_gsp(p, ExactScalar(10)), af::HypothesisError);

    p.a = v1(1);  // copies share a boundary point: still not disjoint
    CHECK_THROWS_AS(af::decide_gsp(p, ExactScalar(10)), af::HypothesisError);

    p.a = v1(3);  // 3 . (1/2) is not an integer: a outside the annihilator
    CHECK_THROWS_AS(af::decide_gsp(p, ExactScalar(10)), af::HypothesisError);
}

TEST_CASE("spectral_resolution switches between equality and inequality modes") {
    af::TwoTranslateProblem p = rational_problem(Rational(1, 3));
    af::SpectralResolution eq = af::spectral_resolution(p, ExactScalar(20));
    CHECK(eq.mode == "equality");
    CHECK(eq.alpha == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(!eq.points.empty());

    af::FrameCertificate loose;
    loose.k = 1.0;
    loose.K = 2.0;
    p.cert = loose;
    af::FrameCertificate tight2;
    tight2.k = 2.0;
    tight2.K = 2.0;
    p.cert2 = tight2;
    af::SpectralResolution ineq = af::spectral_resolution(p, ExactScalar(20));
    CHECK(ineq.mode == "inequality");
    // alpha = 2 k2 / K1 from the certified constants
    CHECK(ineq.alpha == doctest::Approx(2.0).epsilon(1e-14));

    // tight certificates keep the exact eigenvalue mode
    af::TwoTranslateProblem q = rational_problem(Rational(1, 3));
    af::FrameCertificate t1;
    t1.k = 1.0;
    t1.K = 1.0;
    q.cert = t1;
    CHECK(af::spectral_resolution(q, ExactScalar(20)).mode == "equality");
}

TEST_CASE("overlapping spectrum halves report their flags") {
    af::GspDecision dec = af::decide_gsp(rational_problem(Rational(0)), ExactScalar(30));
    CHECK(!dec.lambda_sets_disjoint);  // Z sits inside (1/2)Z
    CHECK(dec.constants_halved);
}
