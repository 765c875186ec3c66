#include <doctest.h>

#include <algorithm>

#include "af/errors.hpp"
#include "af/reverse_classify.hpp"

using af::Domain;
using af::ExactScalar;
using af::ExactVec;
using af::Rational;
using af::RationalVec;

namespace {

af::SpectrumSpec lattice1(const Rational& gen, std::vector<Rational> offsets = {}) {
    af::LatticeCosets z;
    z.generators = {{ExactScalar(gen)}};
    for (const auto& o : offsets) z.offsets.push_back({ExactScalar(o)});
    return af::SpectrumSpec(z);
}

af::SpectrumSpec finite1(std::vector<Rational> pts) {
    af::FiniteSet f;
    for (const auto& p : pts) f.points.push_back({ExactScalar(p)});
    return af::SpectrumSpec(f);
}

bool holds(const std::vector<ExactVec>& set, const Rational& x) {
    return std::any_of(set.begin(), set.end(), [&](const ExactVec& v) {
        return v.size() == 1 && v[0] == ExactScalar(x);
    });
}

}  // namespace

TEST_CASE("reverse_spectrum cuts the integer spectrum out of (1/2)Z") {
    af::FrameCertificate tight;
    tight.k = 2.0;
    tight.K = 2.0;
    af::ReverseResult res =
        af::reverse_spectrum(Domain::unit_interval(), {{Rational(0)}, {Rational(1)}},
                             lattice1(Rational(1, 2)), tight, ExactScalar(16));

    std::vector<ExactVec> members = res.lambda_omega.enumerate(ExactScalar(16));
    CHECK(members.size() == 33);  // integers in [-16, 16]
    CHECK(holds(members, Rational(0)));
    CHECK(holds(members, Rational(-16)));
    CHECK(holds(members, Rational(16)));
    CHECK(!holds(members, Rational(1, 2)));

    CHECK(res.certificate.k == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(res.certificate.K == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(!res.certificate.flagged_not_total);
    CHECK(res.zero_witnesses.size() == 32);  // every nonzero member vanishes
    for (const auto& w : res.zero_witnesses) CHECK(!(w[0] == ExactScalar(0)));
}

TEST_CASE("reverse_spectrum degenerates to the origin when chi_hat never vanishes") {
    af::FrameCertificate cert;
    cert.k = 1.0;
    cert.K = 2.0;
    af::ReverseResult res =
        af::reverse_spectrum(Domain::unit_interval(), {{Rational(0)}, {Rational(2)}},
                             finite1({Rational(0), Rational(1, 4)}), cert, ExactScalar(8));
    std::vector<ExactVec> members = res.lambda_omega.enumerate(ExactScalar(8));
    REQUIRE(members.size() == 1);
    CHECK(members[0][0] == ExactScalar(0));
    CHECK(res.certificate.flagged_not_total);
    CHECK(res.zero_witnesses.empty());
}

TEST_CASE("reverse_spectrum hypothesis violations throw") {
    af::FrameCertificate cert;
    cert.k = 1.0;
    cert.K = 1.0;

    // origin missing from the spectrum
    CHECK_THROWS_AS(af::reverse_spectrum(Domain::unit_interval(), {{Rational(0)}, {Rational(1)}},
                                         finite1({Rational(1, 2)}), cert, ExactScalar(4)),
                    af::HypothesisError);

    // translate copies of Omega overlap
    CHECK_THROWS_AS(
        af::reverse_spectrum(Domain::unit_interval(), {{Rational(0)}, {Rational(1, 2)}},
                             lattice1(Rational(1)), cert, ExactScalar(4)),
        af::HypothesisError);

    // exponentials on the union are not orthogonal: chi_hat_[0,2](1/3) != 0
    CHECK_THROWS_AS(af::reverse_spectrum(Domain::unit_interval(), {{Rational(0)}, {Rational(1)}},
                                         finite1({Rational(0), Rational(1, 3)}), cert,
                                         ExactScalar(4)),
                    af::HypothesisError);
}

TEST_CASE("verify_lattice_classification extracts coset representatives") {
    af::RationalMatrix unit = af::RationalMatrix::identity(1);

    af::LatticeClassification two =
        af::verify_lattice_classification(Domain::unit_interval(), unit,
                                          {{Rational(0)}, {Rational(1)}},
                                          lattice1(Rational(1, 2)), ExactScalar(16));
    CHECK(two.classified);
    REQUIRE(two.L.size() == 2);
    CHECK(two.L[0][0] == ExactScalar(0));
    CHECK(two.L[1][0] == ExactScalar(Rational(1, 2)));
    CHECK(two.unitary_defect <= 1e-9);

    af::LatticeClassification quarter =
        af::verify_lattice_classification(Domain::unit_interval(), unit,
                                          {{Rational(0)}, {Rational(2)}},
                                          lattice1(Rational(1), {Rational(0), Rational(1, 4)}),
                                          ExactScalar(16));
    CHECK(quarter.classified);
    REQUIRE(quarter.L.size() == 2);
    CHECK(quarter.L[1][0] == ExactScalar(Rational(1, 4)));

    // cardinality mismatch: Z gives one coset for two translates
    af::LatticeClassification bad =
        af::verify_lattice_classification(Domain::unit_interval(), unit,
                                          {{Rational(0)}, {Rational(1)}},
                                          lattice1(Rational(1)), ExactScalar(16));
    CHECK(!bad.classified);
    CHECK(bad.report.find("1 coset") != std::string::npos);
}

TEST_CASE("verify_lattice_classification catches volume and zero-set failures") {
    af::RationalMatrix unit = af::RationalMatrix::identity(1);

    // vol(D) = 1 but |det| = 2
    af::RationalMatrix twice(1, 1);
    twice(0, 0) = Rational(2);
    CHECK_THROWS_AS(af::verify_lattice_classification(Domain::unit_interval(), twice,
                                                      {{Rational(0)}, {Rational(1)}},
                                                      lattice1(Rational(1, 2)), ExactScalar(8)),
                    af::HypothesisError);

    // D = [0,1] u [2,3] tiles by 2Z; zeros of chi_hat_D include 1/4, which
    // lands outside the dual (1/2)Z
    Domain d(std::vector<ExactScalar>{ExactScalar(0)}, {ExactScalar(1)},
             {{ExactScalar(0)}, {ExactScalar(2)}});
    af::LatticeClassification cex = af::verify_lattice_classification(
        d, twice, {{Rational(0)}, {Rational(2)}},
        lattice1(Rational(1), {Rational(0), Rational(1, 4)}), ExactScalar(8));
    CHECK(!cex.classified);
    REQUIRE(cex.counterexample.has_value());
    af::ExactScalar w = (*cex.counterexample)[0];
    CHECK((w * ExactScalar(4)).is_integer());   // a quarter point...
    CHECK(!(w * ExactScalar(2)).is_integer());  // ...outside the dual (1/2)Z
}

TEST_CASE("classify_1d accepts the worked Hadamard expansions") {
    af::ClassifyResult a =
        af::classify_1d({{Rational(0)}, {Rational(1)}}, lattice1(Rational(1, 2)), ExactScalar(32));
    CHECK(a.valid);
    REQUIRE(a.L.size() == 2);
    CHECK(a.L[0] == ExactScalar(0));
    CHECK(a.L[1] == ExactScalar(Rational(1, 2)));
    CHECK(a.violations.empty());

    af::ClassifyResult b = af::classify_1d(
        {{Rational(0)}, {Rational(2)}},
        lattice1(Rational(1), {Rational(0), Rational(1, 4)}), ExactScalar(32));
    CHECK(b.valid);
    REQUIRE(b.L.size() == 2);
    CHECK(b.L[1] == ExactScalar(Rational(1, 4)));
}

TEST_CASE("classify_1d reports every violated conclusion") {
    // non-integer translate difference
    af::ClassifyResult frac = af::classify_1d({{Rational(0)}, {Rational(1, 2)}},
                                              lattice1(Rational(1, 2)), ExactScalar(32));
    CHECK(!frac.valid);
    bool saw_diff = false;
    for (const auto& v : frac.violations) saw_diff |= v.code == "translate-difference-not-integer";
    CHECK(saw_diff);

    // cardinality: (1/3)Z gives three cosets for two translates
    af::ClassifyResult card = af::classify_1d({{Rational(0)}, {Rational(1)}},
                                              lattice1(Rational(1, 3)), ExactScalar(32));
    CHECK(!card.valid);
    bool saw_card = false;
    for (const auto& v : card.violations) saw_card |= v.code == "cardinality";
    CHECK(saw_card);

    // right cardinality, wrong phases: L = {0, 1/3} is not unitary for B={0,1}
    af::ClassifyResult uni = af::classify_1d(
        {{Rational(0)}, {Rational(1)}},
        lattice1(Rational(1), {Rational(0), Rational(1, 3)}), ExactScalar(32));
    CHECK(!uni.valid);
    bool saw_uni = false;
    for (const auto& v : uni.violations) saw_uni |= v.code == "not-unitary";
    CHECK(saw_uni);

    CHECK_THROWS_AS(af::classify_1d({{Rational(0)}, {Rational(0)}}, lattice1(Rational(1, 2)),
                                    ExactScalar(8)),
                    af::ArgumentError);
}

TEST_CASE("search_L finds the worked candidate spectra") {
    std::vector<std::vector<Rational>> two = af::search_L({Rational(0), Rational(2)}, 8);
    auto contains = [](const std::vector<std::vector<Rational>>& all,
                       const std::vector<Rational>& want) {
        return std::find(all.begin(), all.end(), want) != all.end();
    };
    CHECK(contains(two, {Rational(0), Rational(1, 4)}));
    CHECK(contains(two, {Rational(0), Rational(3, 4)}));

    std::vector<std::vector<Rational>> three = af::search_L({Rational(0), Rational(1), Rational(2)}, 6);
    CHECK(contains(three, {Rational(0), Rational(1, 3), Rational(2, 3)}));

    std::vector<std::vector<Rational>> trivial = af::search_L({Rational(0)}, 4);
    REQUIRE(trivial.size() == 1);
    CHECK(trivial[0] == std::vector<Rational>{Rational(0)});

    CHECK_THROWS_AS(af::search_L({Rational(0), Rational(1, 2)}, 4), af::ArgumentError);
    CHECK_THROWS_AS(af::search_L({Rational(0), Rational(2)}, 0), af::ArgumentError);
}

TEST_CASE("search_L is covariant under integer translation of B") {
    std::vector<std::vector<Rational>> base = af::search_L({Rational(0), Rational(2)}, 8);
    std::vector<std::vector<Rational>> shifted = af::search_L({Rational(5), Rational(7)}, 8);
    CHECK(base == shifted);
}

TEST_CASE("search_L results expand to valid classifications") {
    for (const std::vector<Rational>& B0 :
         {std::vector<Rational>{Rational(0), Rational(2)},
          std::vector<Rational>{Rational(0), Rational(1), Rational(2)}}) {
        std::vector<RationalVec> B;
        for (const auto& b : B0) B.push_back({b});
        for (const std::vector<Rational>& L : af::search_L(B0, 6)) {
            af::LatticeCosets z;
            z.generators = {{ExactScalar(1)}};
            for (const auto& l : L) z.offsets.push_back({ExactScalar(l)});
            af::ClassifyResult res = af::classify_1d(B, af::SpectrumSpec(z), ExactScalar(24));
            CHECK(res.valid);
        }
    }
}
