#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/airy.hpp>
#include <cmath>
#include <future>

#include "specdet/recessive.hpp"

using namespace specdet;

namespace {
const double sqrtpi = std::sqrt(kPi);

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("quartic, Airy and harmonic values at lambda = 0") {
    auto r4 = solve_recessive(PolynomialPotential::monomial(4), 0.0);
    CHECK(std::abs(-r4.dpsi0 - 1.1572330) < 5e-8);
    CHECK(std::abs(r4.psi0 - 1.7282604) < 5e-8);
    CHECK(std::abs(-r4.dpsi0 * r4.psi0 - 2.0) < 1e-12);
    CHECK(r4.error_estimate < 1e-10);

    auto r1 = solve_recessive(PolynomialPotential::monomial(1), 0.0);
    CHECK(std::abs(r1.psi0 - 1.2585417) < 5e-8);
    CHECK(std::abs(-r1.dpsi0 - 0.9174909) < 5e-8);

    auto d2 = determinant_pair(PolynomialPotential::monomial(2), 0.0);
    CHECK(std::abs(d2.plus - 2 * sqrtpi / std::tgamma(0.25)) < 1e-12);
    CHECK(std::abs(d2.plus - 0.977741067) < 1e-9);
    CHECK(std::abs(d2.minus - sqrtpi / std::tgamma(0.75)) < 1e-12);
}

TEST_CASE("homogeneous determinants at zero") {
    for (int N : {1, 3, 4, 6, 8, 12, 16, 32}) {
        double nu = 1.0 / (N + 2);
        double plus = std::tgamma(1 - nu) / (std::pow(nu, N * nu / 2) * sqrtpi);
        double minus = std::tgamma(nu) * std::pow(nu, N * nu / 2) / sqrtpi;
        auto d = determinant_pair(PolynomialPotential::monomial(N), 0.0);
        CHECK(rel(d.plus, plus) < 1e-11);
        CHECK(rel(d.minus, minus) < 1e-11);
        CHECK(rel(d.product(), 1 / std::sin(nu * kPi)) < 1e-11);
    }
}

TEST_CASE("Qi+ at v = 0") {
    auto d = determinant_pair(PolynomialPotential::binomial(4, 2, 0.0), 0.0);
    CHECK(rel(d.plus, std::cbrt(6.0) * 2 * sqrtpi / std::tgamma(1.0 / 6)) < 1e-11);
}

TEST_CASE("Airy solution for real and complex lambda") {
    auto p = PolynomialPotential::monomial(1);
    for (double lam : {-12.5, -3.0, -1.0, 0.5, 4.0}) {
        auto r = solve_recessive(p, lam);
        double ai = boost::math::airy_ai(lam), aip = boost::math::airy_ai_prime(lam);
        CHECK(std::abs(r.psi0 - 2 * sqrtpi * ai) < 1e-11);
        CHECK(std::abs(r.dpsi0 - 2 * sqrtpi * aip) < 1e-11);
    }
    for (cplx lam : {cplx(1.0, 2.0), cplx(-4.0, 1.5), cplx(-6.0, -0.5), 3.0 * std::polar(1.0, 2.8)}) {
        auto r = solve_recessive(p, lam);
        auto a = airy(lam);
        CHECK(rel(r.psi0, 2 * sqrtpi * a.ai) < 1e-10);
        CHECK(rel(r.dpsi0, 2 * sqrtpi * a.ai_prime) < 1e-10);
    }
}

TEST_CASE("harmonic determinants for real and complex lambda") {
    auto p = PolynomialPotential::monomial(2);
    for (cplx lam : {cplx(0.7), cplx(-2.5), cplx(6.0), cplx(1.0, 3.0), cplx(-8.0, -2.0)}) {
        auto d = determinant_pair(p, lam);
        cplx f = std::pow(2.0, -lam / 2.0);
        cplx plus = f * 2.0 * sqrtpi * rgamma((1.0 + lam) / 4.0);
        cplx minus = f * sqrtpi * rgamma((3.0 + lam) / 4.0);
        CHECK(std::abs(d.plus - plus) < 1e-10 * std::max(1.0, std::abs(plus)));
        CHECK(std::abs(d.minus - minus) < 1e-10 * std::max(1.0, std::abs(minus)));
    }
}

TEST_CASE("Riccati start reproduces the action normalization") {
    std::vector<std::pair<PolynomialPotential, cplx>> cases = {
        {PolynomialPotential::monomial(4), 0.0},
        {PolynomialPotential::binomial(4, 2, -1.5), 0.5},
        {PolynomialPotential::binomial(6, 2, 2.0), 0.0},
        {PolynomialPotential::parse("q^3 + 2*q^2 - q"), cplx(0.3, 0.4)},
        {PolynomialPotential::monomial(2), 1.7}};
    for (auto& [p, lam] : cases) {
        int N = p.degree();
        auto rs = riccati_start(p, lam, 8.0);
        REQUIRE(rs.converged);
        auto an = action_normalization(p, lam);
        CHECK(std::abs(rs.coeffs[N + 2] - (-N / 4.0 - an.beta_m1_at_0)) < 1e-13);
        // positive-power terms of the integrated series are -S(q)
        for (const auto& t : an.S_terms) {
            int m = int(std::lround((N / 2.0 - (t.power.value() - 1)) * 2));
            cplx integrated = rs.coeffs[m] / t.power.value();
            CHECK(std::abs(integrated + t.coeff) < 1e-13);
        }
    }
}

TEST_CASE("independence of the starting point") {
    std::vector<PolynomialPotential> ps = {PolynomialPotential::monomial(4),
                                           PolynomialPotential::binomial(4, 2, -2.0),
                                           PolynomialPotential::monomial(6),
                                           PolynomialPotential::parse("q^3 - q^2 + 0.5*q")};
    for (const auto& p : ps) {
        for (cplx lam : {cplx(0.0), cplx(1.0), cplx(5.0, -1.0)}) {
            auto a = solve_recessive(p, lam, 1e-12);
            RecessiveOptions o;
            o.q_start = 2 * a.q_start;
            auto b = solve_recessive(p, lam, o);
            CHECK(rel(b.psi0, a.psi0) < 1e-11);
            CHECK(rel(b.dpsi0, a.dpsi0) < 1e-11);
            o.q_start = 1.5 * a.q_start;
            auto c = solve_recessive(p, lam, o);
            CHECK(std::abs(c.psi0 - a.psi0) <= 10 * std::max(a.error_estimate, 1e-12) * std::abs(a.psi0) + 1e-13);
        }
    }
}

TEST_CASE("coarse tolerance stays within its error estimate") {
    auto p = PolynomialPotential::binomial(4, 2, -2.0);
    auto fine = solve_recessive(p, 1.0, 1e-12);
    auto coarse = solve_recessive(p, 1.0, 1e-6);
    CHECK(rel(coarse.psi0, fine.psi0) < 1e-5);
    CHECK(coarse.error_estimate < 1e-5);
    CHECK_THROWS_AS(solve_recessive(p, 1.0, 1e-3), DomainError);
    CHECK_THROWS_AS(solve_recessive(p, 1.0, 1e-14), DomainError);
}

TEST_CASE("Wronskian health check") {
    for (auto s : {"q^4", "q^4 - 3*q^2", "q^6 + q^3", "q"})
        for (cplx lam : {cplx(0.0), cplx(-7.0), cplx(2.0, 1.0)})
            CHECK(wronskian_drift(PolynomialPotential::parse(s), lam) < 1e-9);
}

TEST_CASE("node counts follow Sturm oscillation") {
    RecessiveOptions o;
    o.count_nodes = true;
    o.estimate_error = false;
    auto p = PolynomialPotential::monomial(2);
    // Neumann levels 1, 5, 9, ...; Dirichlet levels 3, 7, 11, ...
    for (double E : {0.5, 1.5, 4.0, 6.0, 20.0, 102.0, 398.0}) {
        auto r = solve_recessive(p, -E, o);
        int nN = int(std::floor((E - 1) / 4)) + 1;
        int nD = int(std::floor((E - 3) / 4)) + 1;
        CHECK(r.neumann_count == std::max(nN, 0));
        CHECK(r.dirichlet_count == std::max(nD, 0));
    }
    auto rc = solve_recessive(p, cplx(-3.0, 0.1), o);
    CHECK(rc.dirichlet_count == -1);
}

TEST_CASE("sampled values agree with the Airy function") {
    auto p = PolynomialPotential::monomial(1);
    std::vector<double> qs = {0.0, 2.5, 0.7, 12.0, 30.0};
    auto vals = recessive_values(p, -2.0, qs);
    for (std::size_t i = 0; i < qs.size(); ++i) {
        double ai = boost::math::airy_ai(qs[i] - 2.0);
        CHECK(std::abs(vals[i].value() / (2 * sqrtpi * ai) - 1.0) < 1e-10);
    }
    CHECK_THROWS_AS(recessive_values(p, 0.0, {-1.0}), DomainError);
}

TEST_CASE("concurrent solves agree with sequential ones") {
    auto p = PolynomialPotential::binomial(4, 2, 1.3);
    std::vector<double> lams = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<std::future<DeterminantPair>> fut;
    for (double l : lams) fut.push_back(std::async(std::launch::async, [&, l] { return determinant_pair(p, l); }));
    for (std::size_t i = 0; i < lams.size(); ++i) {
        auto seq = determinant_pair(p, lams[i]);
        auto par = fut[i].get();
        CHECK(par.plus == seq.plus);
        CHECK(par.minus == seq.minus);
    }
}
