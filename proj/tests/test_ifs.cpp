#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <cstring>
#include <numbers>

#include "af/errors.hpp"
#include "af/ifs.hpp"
#include "af/transforms.hpp"

using af::Domain;
using af::ExactScalar;
using af::ExactVec;
using af::Integer;
using af::Rational;

namespace {

af::AffineSystem quarter_cantor() {
    af::AffineSystem sys;
    sys.R = af::RationalMatrix::diagonal({Rational(4)});
    sys.B = {{Rational(0)}, {Rational(2)}};
    sys.L = {{Rational(0)}, {Rational(1, 4)}};
    return sys;
}

ExactVec pt(const Rational& x) { return {ExactScalar(x)}; }

bool spectrum_equals(const std::vector<ExactVec>& got, const std::vector<Rational>& want) {
    if (got.size() != want.size()) return false;
    for (size_t i = 0; i < got.size(); ++i)
        if (!(got[i].size() == 1 && got[i][0] == ExactScalar(want[i]))) return false;
    return true;
}

}  // namespace

TEST_CASE("quarter-Cantor iteration pins the first two levels") {
    af::IterationState st = af::make_initial_state(quarter_cantor(), Domain::unit_interval());
    REQUIRE(st.j == 0);
    CHECK(spectrum_equals(st.lambdas[0], {Rational(0)}));

    st = af::iterate(st);
    st = af::iterate(st);
    REQUIRE(st.j == 2);

    // Omega_1 = [0,1/4] u [1/2,3/4]
    const Domain& o1 = st.omegas[1];
    CHECK(o1.volume() == ExactScalar(Rational(1, 2)));
    CHECK(o1.contains(pt(Rational(1, 8))));
    CHECK(o1.contains(pt(Rational(5, 8))));
    CHECK(!o1.contains(pt(Rational(3, 8))));
    CHECK(!o1.contains(pt(Rational(7, 8))));

    CHECK(spectrum_equals(st.lambdas[1], {Rational(0), Rational(1)}));
    CHECK(spectrum_equals(st.lambdas[2], {Rational(0), Rational(1), Rational(4), Rational(5)}));

    // Omega_2 = [0,1/16] u [1/8,3/16] u [1/2,9/16] u [5/8,11/16]
    const Domain& o2 = st.omegas[2];
    CHECK(o2.volume() == ExactScalar(Rational(1, 4)));
    CHECK(o2.contains(pt(Rational(1, 32))));
    CHECK(o2.contains(pt(Rational(5, 32))));
    CHECK(o2.contains(pt(Rational(17, 32))));
    CHECK(o2.contains(pt(Rational(21, 32))));
    CHECK(!o2.contains(pt(Rational(3, 32))));
    CHECK(!o2.contains(pt(Rational(1, 4))));
    CHECK(!o2.contains(pt(Rational(19, 32))));

    for (af::OverlapClass oc : st.overlaps) CHECK(oc == af::OverlapClass::Disjoint);
}

TEST_CASE("volume bookkeeping is exact through depth 8") {
    af::IterationState st = af::make_initial_state(quarter_cantor(), Domain::unit_interval());
    for (int j = 1; j <= 8; ++j) {
        st = af::iterate(st);
        CHECK(st.omegas[j].volume() == ExactScalar(Rational(1, Integer(1) << j)));
    }

    // Lambda_j nesting, exact set inclusion
    for (int j = 0; j < 8; ++j) {
        CHECK(std::includes(st.lambdas[j + 1].begin(), st.lambdas[j + 1].end(),
                            st.lambdas[j].begin(), st.lambdas[j].end(),
                            [](const ExactVec& a, const ExactVec& b) { return af::lex_less(a, b); }));
    }
}

TEST_CASE("a singleton L freezes the spectrum at the origin") {
    af::AffineSystem sys = quarter_cantor();
    sys.L = {{Rational(0)}};
    af::IterationState st = af::make_initial_state(sys, Domain::unit_interval());
    for (int j = 0; j < 3; ++j) st = af::iterate(st);
    CHECK(spectrum_equals(st.lambdas[3], {Rational(0)}));
}

TEST_CASE("spectral sums stay inside the Bessel bound") {
    af::IterationState st = af::make_initial_state(quarter_cantor(), Domain::unit_interval());
    for (int j = 0; j < 8; ++j) st = af::iterate(st);

    af::SpectralSumEntry s0 = af::spectral_sum(st, pt(0), 0);
    CHECK(s0.s == doctest::Approx(1.0).epsilon(1e-12));

    af::SpectralSumEntry s2 = af::spectral_sum(st, pt(0), 2);
    CHECK(s2.s > 0.9);
    CHECK(s2.s <= 1.0 + 1e-6);

    af::SpectralSumSeries series = af::spectral_sum_series(st, pt(0), 8);
    REQUIRE(series.entries.size() == 9);
    for (const auto& e : series.entries) {
        CHECK(e.j == &e - series.entries.data());
        CHECK(e.s >= 0.0);
        CHECK(e.truncation_error >= 0.0);
    }

    // orthogonality precheck at j=3, then the Bessel bound for a generic t
    const auto& l3 = st.lambdas[3];
    bool orthogonal = true;
    for (size_t i = 0; i < l3.size() && orthogonal; ++i)
        for (size_t k = i + 1; k < l3.size() && orthogonal; ++k) {
            ExactVec diff = {l3[i][0] - l3[k][0]};
            if (std::abs(af::mu_hat_n(quarter_cantor(), Domain::unit_interval(), 3, diff).value) >
                1e-8)
                orthogonal = false;
        }
    REQUIRE(orthogonal);
    for (const Rational& t : {Rational(1, 2), Rational(1, 3), Rational(7, 5)}) {
        af::SpectralSumEntry e = af::spectral_sum(st, pt(t), 3);
        CHECK(e.s >= 0.0);
        CHECK(e.s <= 1.0 + 1e-6);
    }

    CHECK_THROWS_AS(af::spectral_sum(st, pt(0), 9), af::ArgumentError);
    CHECK_THROWS_AS(af::spectral_sum(st, pt(0), -1), af::ArgumentError);
}

TEST_CASE("ternary configuration emits a diagnostic series") {
    af::AffineSystem sys;
    sys.R = af::RationalMatrix::diagonal({Rational(3)});
    sys.B = {{Rational(0)}, {Rational(2)}};
    sys.L = {{Rational(0)}, {Rational(3, 4)}};
    af::IterationState st = af::make_initial_state(sys, Domain::unit_interval());
    for (int j = 0; j < 3; ++j) st = af::iterate(st);
    af::SpectralSumEntry e = af::spectral_sum(st, pt(0), 3);
    CHECK(e.s >= 0.0);
    CHECK(std::isfinite(e.s));
}

TEST_CASE("lower_bound_estimate short-circuits the unimodular denominator") {
    af::IterationState st = af::make_initial_state(quarter_cantor(), Domain::unit_interval());
    for (int j = 0; j < 8; ++j) st = af::iterate(st);
    af::LowerBoundEstimate lb = af::lower_bound_estimate(st, pt(0), 8);
    CHECK(lb.f_norm_sq == 1.0);
    CHECK(lb.mc_skipped);
    CHECK(lb.epsilon_hat >= 0.5);
    CHECK(lb.series.entries.size() == 9);

    CHECK_THROWS_AS(af::lower_bound_estimate(st, pt(0), 0), af::ArgumentError);
}

TEST_CASE("iteration rejects collisions and overlaps") {
    // R=2 with L={0,1}: 2(0+1) == 2(1+0) once the seed holds {0,1}
    af::AffineSystem sys;
    sys.R = af::RationalMatrix::diagonal({Rational(2)});
    sys.B = {{Rational(0)}};
    sys.L = {{Rational(0)}, {Rational(1)}};
    af::IterationState st =
        af::make_initial_state(sys, Domain::unit_interval(), {pt(0), pt(1)});
    CHECK_THROWS_AS(af::iterate(st), af::HypothesisError);

    // R=2 with B={0,1/2}: images [0,1/2]+{0,1/4} overlap on positive volume
    af::AffineSystem ov;
    ov.R = af::RationalMatrix::diagonal({Rational(2)});
    ov.B = {{Rational(0)}, {Rational(1, 2)}};
    ov.L = {{Rational(0)}};
    af::IterationState st2 = af::make_initial_state(ov, Domain::unit_interval());
    CHECK_THROWS_AS(af::iterate(st2), af::HypothesisError);

    // R=2 with B={0,1}: images touch at 1/2, tolerated and classified
    af::AffineSystem touch = ov;
    touch.B = {{Rational(0)}, {Rational(1)}};
    af::IterationState st3 = af::make_initial_state(touch, Domain::unit_interval());
    st3 = af::iterate(st3);
    CHECK(st3.overlaps[0] == af::OverlapClass::NullOverlap);
    CHECK(st3.omegas[1].volume() == ExactScalar(1));
}

TEST_CASE("chaos game is deterministic and finds fixed points") {
    af::AffineSystem single;
    single.R = af::RationalMatrix::diagonal({Rational(2)});
    single.B = {{Rational(0)}};
    single.L = {{Rational(0)}};
    Eigen::MatrixXd s = af::chaos_game_sample(single, 200, 7);
    REQUIRE(s.rows() == 200);
    REQUIRE(s.cols() == 1);
    CHECK(s.cwiseAbs().maxCoeff() <= 1e-12);  // x -> x/2 collapses to 0 after burn-in

    auto bytes_equal = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
        return x.rows() == y.rows() && x.cols() == y.cols() &&
               std::memcmp(x.data(), y.data(), sizeof(double) * x.size()) == 0;
    };

    af::AffineSystem qc = quarter_cantor();
    Eigen::MatrixXd a = af::chaos_game_sample(qc, 4096, 12345);
    Eigen::MatrixXd b = af::chaos_game_sample(qc, 4096, 12345);
    CHECK(bytes_equal(a, b));
    Eigen::MatrixXd c = af::chaos_game_sample(qc, 4096, 54321);
    CHECK(!bytes_equal(a, c));

    // identical output regardless of worker count
    setenv("AFFINE_FRAMES_THREADS", "1", 1);
    Eigen::MatrixXd one = af::chaos_game_sample(qc, 70000, 99);
    setenv("AFFINE_FRAMES_THREADS", "5", 1);
    Eigen::MatrixXd five = af::chaos_game_sample(qc, 70000, 99);
    unsetenv("AFFINE_FRAMES_THREADS");
    CHECK(bytes_equal(one, five));
}

TEST_CASE("chaos game empirical transform tracks the product formula") {
    af::AffineSystem qc = quarter_cantor();
    af::TransformValue oracle = af::mu_hat_limit(qc, pt(1));
    REQUIRE(oracle.abs_error_bound <= 1e-9);

    double prev_err = 0.0;
    bool first = true;
    for (long n : {10000L, 100000L, 1000000L}) {
        Eigen::MatrixXd s = af::chaos_game_sample(qc, n, 7);
        std::complex<double> acc(0, 0);
        for (long i = 0; i < n; ++i) {
            double ph = -2.0 * std::numbers::pi * s(i, 0);
            acc += std::complex<double>(std::cos(ph), std::sin(ph));
        }
        acc /= static_cast<double>(n);
        double err = std::abs(acc - oracle.value);
        if (n == 1000000L) CHECK(err <= 4e-3);
        if (!first) {
            // O(n^{-1/2}): a 10x sample bump shrinks the error ~sqrt(10); allow
            // factor-3 slack on the ratio for sampling noise
            CHECK(err <= prev_err / std::sqrt(10.0) * 3.0 + 1e-12);
        }
        prev_err = err;
        first = false;
    }
}
