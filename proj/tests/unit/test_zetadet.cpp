#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <json.hpp>

#include "specdet/recessive.hpp"
#include "specdet/zetadet.hpp"

using namespace specdet;

namespace {

const Spectrum& quartic() {
    static const Spectrum s = eigenvalues(PolynomialPotential::monomial(4), Parity::Whole, 200);
    return s;
}

const Spectrum& harmonic() {
    static const Spectrum s = eigenvalues(PolynomialPotential::monomial(2), Parity::Whole, 120);
    return s;
}

const Spectrum& airy_spectrum() {
    static const Spectrum s = eigenvalues(PolynomialPotential::monomial(1), Parity::Whole, 160);
    return s;
}

double tau() { return -boost::math::airy_ai_prime(0.0) / boost::math::airy_ai(0.0); }

// Taylor coefficients of f about z0 on a circle of radius r.
std::vector<cplx> cauchy(const std::function<cplx(cplx)>& f, cplx z0, double r, int nodes, int nmax) {
    std::vector<cplx> c(nmax + 1, 0.0);
    for (int j = 0; j < nodes; ++j) {
        cplx u = std::polar(1.0, 2 * kPi * (j + 0.5) / nodes);
        cplx v = f(z0 + r * u);
        for (int n = 0; n <= nmax; ++n) c[n] += v * std::pow(u, -n) / (nodes * std::pow(r, n));
    }
    return c;
}

}  // namespace

TEST_CASE("quartic zeta values") {
    const auto& s = quartic();
    double zm1 = std::pow(2.0, 4.0 / 3) * std::pow(kPi, 3) / (std::pow(3.0, 17.0 / 6) * std::pow(std::tgamma(2.0 / 3), 5));
    auto plus = zeta(s, 1.0, 0.0, Parity::Plus);
    auto minus = zeta(s, 1.0, 0.0, Parity::Minus);
    CHECK(std::abs(minus.value.real() - zm1) < 1e-9);
    CHECK(std::abs(plus.value.real() - 2 * zm1) < 1e-9);
    CHECK(std::abs(minus.value.real() - 0.7633029) < 5e-8);
    auto z1 = closed_zp1(4);
    CHECK(std::abs(zeta(s, 1.0).value.real() - z1.whole) < 1e-9);
    CHECK(std::abs((plus.value - minus.value).real() - z1.skew) < 1e-9);
    CHECK(plus.K_used == 100);
    CHECK(plus.error_estimate < 1e-9);
}

TEST_CASE("harmonic zeta values") {
    const auto& s = harmonic();
    auto z2 = zeta(s, 2.0);
    CHECK(std::abs(z2.value.real() - kPi * kPi / 8) < 1e-11);
    auto z3 = zeta(s, 3.0);
    CHECK(std::abs(z3.value.real() - 7.0 / 8 * boost::math::zeta(3.0)) <= z3.error_estimate + 1e-12);
    auto p3 = zeta(s, 3.0, 0.0, Parity::Plus).value - zeta(s, 3.0, 0.0, Parity::Minus).value;
    CHECK(std::abs(p3.real() - std::pow(kPi, 3) / 32) < 1e-11);
    // Z_2(s) = (1 - 2^{-s}) zeta(s) has a simple pole at s = 1 with residue 1/2
    try {
        zeta(s, 1.0);
        FAIL("expected a pole");
    } catch (const PoleError& e) {
        CHECK(std::abs(e.residue - 0.5) < 1e-12);
    }
    double eps = 1e-5;
    double fp = (1 - std::pow(2.0, -1 - eps)) * boost::math::zeta(1 + eps) - 0.5 / eps;
    auto tilde = zeta_finite_part(sectors(s, Parity::Whole), 1);
    CHECK(std::abs(tilde.value.real() - fp) < 1e-5);
    CHECK(std::abs(tilde.value.real() - closed_zp1(2).whole) < 1e-10);
    // skew function at s = 1 is the convergent Leibniz series
    auto skew = zeta_finite_part(sectors(s, Parity::Plus), 1).value - zeta_finite_part(sectors(s, Parity::Minus), 1).value;
    CHECK(std::abs(skew.real() - kPi / 4) < 1e-10);
}

TEST_CASE("Airy zeta values") {
    const auto& s = airy_spectrum();
    double t = tau();
    CHECK(std::abs(zeta(s, 3.0, 0.0, Parity::Plus).value.real() - 1.0) < 1e-8);
    CHECK(std::abs(zeta(s, 2.0, 0.0, Parity::Minus).value.real() - t * t) < 1e-8);
    CHECK(std::abs(zeta(s, 2.0, 0.0, Parity::Plus).value.real() - 1 / t) < 1e-8);
    CHECK(std::abs(zeta(s, 1.0, 0.0, Parity::Minus).value.real() + t) < 1e-8);
    CHECK(std::abs(zeta(s, 1.0, 0.0, Parity::Plus).value.real()) < 1e-8);
    CHECK(std::abs(zeta(s, 3.0, 0.0, Parity::Minus).value.real() - (0.5 - t * t * t)) < 1e-8);
    double ai = boost::math::airy_ai(0.0), aip = boost::math::airy_ai_prime(0.0);
    CHECK(std::abs(zprime0(s, Parity::Plus) + std::log(-2 * std::sqrt(kPi) * aip)) < 1e-8);
    CHECK(std::abs(zprime0(s, Parity::Minus) + std::log(2 * std::sqrt(kPi) * ai)) < 1e-8);
}

TEST_CASE("spectral and recessive determinants agree") {
    std::vector<PolynomialPotential> ps = {PolynomialPotential::monomial(4), PolynomialPotential::monomial(6),
                                           PolynomialPotential::binomial(4, 2, -2.0),
                                           PolynomialPotential::binomial(4, 2, 0.0),
                                           PolynomialPotential::binomial(4, 2, 2.0)};
    for (const auto& p : ps) {
        auto s = eigenvalues(p, Parity::Whole, 120);
        for (double lam : {0.0, 1.0, 5.0}) {
            auto d = determinant_spectral(s, lam);
            auto r = determinant_pair(p, lam);
            CHECK(d.route == DeterminantRoute::Spectral);
            CHECK(std::abs(d.value / r.product() - 1.0) < 1e-6);
            auto dp = determinant_spectral(s, lam, Parity::Plus);
            CHECK(std::abs(dp.value / r.plus - 1.0) < 1e-6);
        }
    }
    CHECK(std::abs(determinant_spectral(quartic(), 0.0).value - 2.0) < 1e-7);
    auto s6 = eigenvalues(PolynomialPotential::monomial(6), Parity::Whole, 60);
    CHECK(std::abs(determinant_spectral(s6, 0.0).value.real() * std::sin(kPi / 8) - 1.0) < 1e-7);
}

TEST_CASE("quartic Z'(0)") {
    CHECK(std::abs(zprime0(quartic(), Parity::Plus) + 0.1460318) < 5e-8);
    CHECK(std::abs(std::exp(-zprime0(quartic(), Parity::Plus)) - 1.1572330) < 5e-8);
    CHECK(std::abs(zprime0(quartic(), Parity::Minus) + 0.5471153) < 5e-8);
    CHECK(std::abs(zprime0(quartic()) + std::log(2.0)) < 1e-8);
}

TEST_CASE("trace identities") {
    for (int N : {1, 3, 4, 6}) {
        auto s = eigenvalues(PolynomialPotential::monomial(N), Parity::Whole, 80);
        auto plus = zeta(s, 0.0, 0.0, Parity::Plus).value.real();
        auto minus = zeta(s, 0.0, 0.0, Parity::Minus).value.real();
        CHECK(std::abs(plus + minus) < 1e-6);
        CHECK(std::abs(plus - minus - 0.5) < 1e-6);
        CHECK(std::abs(zeta0_trace(sectors(s, Parity::Whole), 0.0)) < 1e-12);
        CHECK(std::abs(zeta0_trace(sectors(s, Parity::Plus), 0.0) - 0.25) < 1e-12);
    }
}

TEST_CASE("residue at the leading pole") {
    const auto& s = quartic();
    auto seq = sectors(s, Parity::Whole);
    // contour integral gives the residue as the mean of (s - s0) Z(s)
    cplx res = 0.0;
    for (int j = 0; j < 32; ++j) {
        cplx u = 0.1 * std::polar(1.0, 2 * kPi * (j + 0.5) / 32);
        res += u * zeta(seq, 0.75 + u).value / 32.0;
    }
    auto heat = heat_coefficients(PolynomialPotential::monomial(4), Rational(0));
    cplx expected = heat.front().c / std::tgamma(0.75);
    REQUIRE(heat.front().rho == Rational(-3, 4));
    CHECK(std::abs(res - expected) < 1e-6);
    try {
        zeta(s, 0.75);
        FAIL("expected a pole");
    } catch (const PoleError& e) {
        CHECK(std::abs(e.residue - expected) < 1e-6);
    }
}

TEST_CASE("Taylor coefficients of the Fredholm determinant") {
    auto seq = sectors(quartic(), Parity::Whole);
    auto c = cauchy([&](cplx l) { return -std::log(fredholm(seq, l)); }, 0.0, 0.5, 32, 4);
    CHECK(std::abs(c[0]) < 1e-10);
    for (int n = 1; n <= 4; ++n) {
        double zn = zeta(seq, double(n)).value.real();
        CHECK(std::abs(c[n].real() - (n % 2 ? -1.0 : 1.0) * zn / n) < 1e-7);
    }
    CHECK(fredholm(seq, 0.0) == cplx(1.0));
    auto r = determinant_pair(PolynomialPotential::monomial(4), 1.0);
    CHECK(std::abs(fredholm(seq, 1.0) - r.product() / 2.0) < 1e-7 * std::abs(r.product()));
}

TEST_CASE("determinant from the Fredholm product for growth order one") {
    auto seq = sectors(harmonic(), Parity::Whole);
    double z1 = zeta_finite_part(seq, 1).value.real();
    for (double lam : {0.7, 2.5}) {
        cplx d = std::exp(-zprime0(seq) + z1 * lam) * fredholm(seq, lam);
        auto r = determinant_pair(PolynomialPotential::monomial(2), lam);
        CHECK(std::abs(d / r.product() - 1.0) < 1e-9);
    }
}

TEST_CASE("scaling law") {
    const auto& s = quartic();
    double alpha = 1.7;
    auto scaled = rescale(s, alpha);
    CHECK(scaled.dilation == alpha);
    auto seq = sectors(s, Parity::Whole), seqa = sectors(scaled, Parity::Whole);
    for (cplx lam : {cplx(0.0), cplx(1.3), cplx(2.0, 0.5)}) {
        auto direct = determinant_spectral(seqa, lam);
        cplx z0 = zeta(seq, 0.0, lam / alpha).value;
        auto via = rescale(determinant_spectral(seq, lam / alpha), alpha, z0);
        CHECK(std::abs(direct.value / via.value - 1.0) < 1e-12);
        CHECK(via.lambda == lam);
        CHECK(std::abs(z0 - zeta0_trace(seq, lam / alpha)) < 1e-8);
        auto zs = zeta(seqa, 1.5, lam);
        auto zv = rescale(zeta(seq, 1.5, lam / alpha), alpha);
        CHECK(std::abs(zs.value / zv.value - 1.0) < 1e-12);
    }
    auto same = rescale(s, 1.0);
    CHECK(zeta(same, 2.0).value == zeta(s, 2.0).value);
    CHECK_THROWS_AS(rescale(s, -1.0), DomainError);
}

TEST_CASE("closed forms at s = 1") {
    // Z_4(1) = Z_4^+(1) + Z_4^-(1) = 1.5266059 + 0.7633029
    CHECK(std::abs(closed_zp1(4).whole - 2.2899088) < 1e-7);
    CHECK(std::abs(closed_zp1(4).skew - 0.7633029) < 5e-8);
    CHECK(std::abs(closed_zp1(1).skew - tau()) < 1e-12);
    CHECK(std::abs(closed_zp1(1).whole + tau()) < 1e-12);
    CHECK(closed_zp1(2).whole_is_pole);
    CHECK(std::abs(closed_zp1(2).skew - kPi / 4) < 1e-14);
    // Bessel-integral representation of the skew value
    for (int N = 3; N <= 8; ++N) {
        double nu = 1.0 / (N + 2);
        boost::math::quadrature::exp_sinh<double> q;
        double I = q.integrate([&](double x) {
            double z = 2 * nu * std::pow(x, 1 + N / 2.0);
            if (z > 700) return 0.0;
            if (z < 1e-6) {
                // small-argument series of K_nu(z) sqrt(x), where the library's continued fraction stalls
                double ks = (std::tgamma(nu) * std::pow(nu, -nu) + std::tgamma(-nu) * std::pow(nu, nu) * x) / 2;
                return ks * ks;
            }
            double k = boost::math::cyl_bessel_k(nu, z);
            return k * k * x;
        });
        double zp = 4 * nu / kPi * std::sin(nu * kPi) * I;
        CHECK(std::abs(zp - closed_zp1(N).skew) < 1e-9);
    }
}

TEST_CASE("generalized spectra") {
    auto q = generalized_zeros(ZeroFamily::qi(), Parity::Whole, 200);
    CHECK(std::abs(zeta(q, 0.0, 0.0, Parity::Plus).value.real() - 0.125) < 1e-6);
    CHECK(std::abs(zeta(q, 0.0, 0.0, Parity::Minus).value.real() + 0.125) < 1e-6);
    auto d4 = determinant_pair(PolynomialPotential::monomial(4), 0.0);
    auto d2 = determinant_pair(PolynomialPotential::monomial(2), 0.0);
    CHECK(std::abs(zprime0(q, Parity::Plus) + std::log(d4.plus / d2.plus).real()) < 1e-8);
    CHECK(std::abs(zprime0(q, Parity::Minus) + std::log(d4.minus / d2.minus).real()) < 1e-8);
    auto z1p = zeta(q, 1.0, 0.0, Parity::Plus).value.real();
    auto z1m = zeta(q, 1.0, 0.0, Parity::Minus).value.real();
    CHECK(std::abs(z1m - 2 * z1p) < 1e-8);

    // whole-line zeros (N+2)(k+1/2): Z(s) = (N+2)^{-s} (2^s - 1) zeta(s)
    auto w = generalized_zeros(ZeroFamily::whole_line(4), Parity::Whole, 12);
    double expect = std::pow(6.0, -2.0) * 3 * boost::math::zeta(2.0);
    CHECK(std::abs(zeta(w, 2.0).value.real() - expect) < 1e-8);
    CHECK_THROWS_AS(zeta(w, 2.0, 0.0, Parity::Plus), DomainError);
}

TEST_CASE("derivative corrections accelerate the cut") {
    auto seq = sectors(quartic(), Parity::Plus);
    ZetaOptions bare;
    bare.derivative_corrections = false;
    ZetaOptions small;
    small.max_levels = 30;
    double ref = zprime0(seq);
    CHECK(std::abs(zprime0(seq, small) - ref) < 1e-7);
    CHECK(std::abs(zprime0(seq, bare) - ref) > 1e-4);
}

TEST_CASE("argument errors, zeros and export") {
    const auto& s = quartic();
    CHECK_THROWS_AS(zeta(s, -0.5), DomainError);
    CHECK_THROWS_AS(determinant_spectral(s, 1e6), DomainError);
    double e0 = s.levels[0].value;
    auto z = determinant_spectral(s, -e0);
    CHECK(z.exact_zero);
    CHECK(z.value == cplx(0.0));
    CHECK(fredholm(s, -e0) == cplx(0.0));
    auto j = nlohmann::json::parse(to_json(zeta(s, 2.0)));
    for (auto key : {"s", "lambda", "value", "K_used", "err"}) CHECK(j.contains(key));
    auto jd = nlohmann::json::parse(to_json(determinant_spectral(s, cplx(1.0, 1.0))));
    CHECK(jd["route"] == "spectral");
    CHECK(jd["value"].is_array());
}
