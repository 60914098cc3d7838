#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "specdet/verify.hpp"

using namespace specdet;

namespace {

void require_pass(const VerificationReport& r) {
    INFO(r.name << ": max residual " << r.max_residual);
    for (const auto& s : r.samples) {
        INFO(s.point << " value " << s.value << " residual " << s.residual);
        CHECK(s.pass);
    }
    CHECK(r.pass);
}

}  // namespace

TEST_CASE("report bookkeeping") {
    VerificationReport r;
    r.name = "demo";
    r.add("a", 1.0, 1e-8, 1e-6);
    r.add_decrease("b", 0.5, 1.0);
    r.finalize();
    CHECK(r.pass);
    CHECK(r.max_residual == doctest::Approx(1e-8));
    r.add("c", 1.0, NAN, 1e-6);
    r.finalize();
    CHECK(!r.pass);
    VerificationReport empty;
    CHECK(!empty.finalize().pass);
}

TEST_CASE("sample points are seeded per identity") {
    std::vector<cplx> grid{0.0, 1.0};
    auto a = sample_points("x", grid, 2.0), b = sample_points("x", grid, 2.0), c = sample_points("y", grid, 2.0);
    REQUIRE(a.size() == 10);
    CHECK(a == b);
    CHECK(a != c);
    for (std::size_t i = 2; i < a.size(); ++i) CHECK(std::abs(a[i]) <= 2.0);
}

TEST_CASE("continued arg follows a winding phase") {
    auto f = [](double x) { return std::polar(2.0, 3 * x); };
    auto a = continued_arg(f, {1.0, 4.0, 10.0});
    CHECK(a[0] == doctest::Approx(3.0));
    CHECK(a[1] == doctest::Approx(12.0));
    CHECK(a[2] == doctest::Approx(30.0));
    CHECK_THROWS(continued_arg(f, {2.0, 1.0}));
}

TEST_CASE("functional relations") {
    std::vector<cplx> grid{0.0, 1.0, -1.0, cplx(0, 2)};
    require_pass(check_wronskian(PolynomialPotential::monomial(4), sample_points("t4", grid, 5.0)));
    require_pass(check_wronskian(PolynomialPotential::monomial(1), sample_points("t1", grid, 5.0)));
    require_pass(check_wronskian(PolynomialPotential::parse("q^4 - 2 q^2 + 0.5 q"), grid));
    require_pass(check_binomial_functional(6));
    require_pass(check_harmonic_reflection());
    require_pass(check_binomial_reflection());
}

TEST_CASE("quantization") {
    require_pass(check_exact_quantization(PolynomialPotential::monomial(4), 6));
    require_pass(check_exact_quantization(PolynomialPotential::monomial(1), 6));
    require_pass(check_exact_quantization(PolynomialPotential::monomial(6), 6));
    require_pass(check_harmonic_quantization(8));
    require_pass(check_binomial_levels());
    require_pass(check_binomial_whole_line());
}

TEST_CASE("cocycles") {
    std::vector<cplx> grid{0.0, 1.0, -1.0, cplx(0, 2)};
    require_pass(check_cocycle(4, sample_points("c4", grid, 4.0)));
    require_pass(check_cocycle(1, sample_points("c1", grid, 4.0)));
    CHECK_THROWS(check_cocycle(3, grid));
}

TEST_CASE("square well") {
    require_pass(check_square_well_wronskian());
    require_pass(check_square_well_cocycle());
    require_pass(check_sum_rules(SumRuleFamily::SquareWell));
}

TEST_CASE("sum rules on computed spectra") {
    require_pass(check_sum_rules(SumRuleFamily::Airy));
    require_pass(check_sum_rules(SumRuleFamily::Harmonic));
    require_pass(check_sum_rules(SumRuleFamily::Quartic));
}

TEST_CASE("output formats") {
    VerificationReport r;
    r.name = "a<b";
    r.relation = "x";
    r.add("p", 1.0, 2.0, 1.0);
    r.finalize();
    std::vector<VerificationReport> v{r};
    auto j = nlohmann::json::parse(reports_to_json(v));
    CHECK(j["pass"] == false);
    CHECK(j["reports"][0]["samples"][0]["residual"] == 2.0);
    auto x = reports_to_junit(v);
    CHECK(x.find("failures=\"1\"") != std::string::npos);
    CHECK(x.find("a&lt;b") != std::string::npos);
    CHECK(reports_to_text(v).rfind("FAIL", 0) == 0);
    CHECK_THROWS(run_suite("nonexistent"));
    CHECK(suite_names().size() == 9);
}
