#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>

#include "specdet/closedform.hpp"
#include "specdet/recessive.hpp"

using namespace specdet;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("homogeneous D_N(0) values") {
    auto d4 = homogeneous_d0(4);
    CHECK(std::abs(d4.plus - 1.1572330) < 5e-8);
    CHECK(std::abs(d4.minus - 1.7282604) < 5e-8);
    CHECK(std::abs(d4.whole - 2) < 1e-14);
    CHECK(std::abs(d4.plus * d4.minus - d4.whole) < 1e-13);
    auto d1 = homogeneous_d0(1);
    CHECK(std::abs(d1.plus - 0.9174909) < 5e-8);
    CHECK(std::abs(d1.minus - 1.2585417) < 5e-8);
    auto d2 = homogeneous_d0(2);
    CHECK(std::abs(d2.plus - 0.977741067) < 5e-10);
    CHECK(std::abs(d2.minus - 1.446409085) < 5e-10);
    CHECK(std::abs(d2.whole - std::sqrt(2.0)) < 1e-14);
    auto d0 = homogeneous_d0(0);
    CHECK(d0.plus == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d0.minus == doctest::Approx(1.0).epsilon(1e-14));
    // recessive route
    for (int N : {1, 2, 3, 4, 6, 8}) {
        auto h = homogeneous_d0(N);
        auto r = determinant_pair(PolynomialPotential::monomial(N), 0.0);
        CHECK(rel(r.plus, h.plus) < 1e-9);
        CHECK(rel(r.minus, h.minus) < 1e-9);
    }
}

TEST_CASE("Airy determinants") {
    for (double x : {-3.0, -0.5, 0.0, 1.0, 2.5}) {
        auto d = airy_determinants(x);
        CHECK(rel(d.minus, 2 * std::sqrt(kPi) * boost::math::airy_ai(x)) < 1e-12);
        CHECK(rel(d.plus, -2 * std::sqrt(kPi) * boost::math::airy_ai_prime(x)) < 1e-12);
    }
    auto d0 = airy_determinants(0.0);
    CHECK(std::abs(d0.plus.real() - 0.9174909) < 5e-8);
    CHECK(std::abs(d0.minus.real() - 1.2585417) < 5e-8);
    for (cplx l : {cplx(1.0), cplx(0.5, 1.5)}) {
        auto d = airy_determinants(l);
        auto r = determinant_pair(PolynomialPotential::monomial(1), l);
        CHECK(rel(r.plus, d.plus) < 1e-9);
        CHECK(rel(r.minus, d.minus) < 1e-9);
    }
}

TEST_CASE("harmonic determinants") {
    auto d = harmonic_determinants(0.0);
    CHECK(rel(d.plus, 2 * std::sqrt(kPi) / std::tgamma(0.25)) < 1e-14);
    CHECK(rel(d.minus, std::sqrt(kPi) / std::tgamma(0.75)) < 1e-14);
    for (cplx l : {cplx(0.0), cplx(0.3), cplx(-2.7), cplx(1.0, 2.0), cplx(4.5, -1.0)}) {
        auto a = harmonic_determinants(l), b = harmonic_determinants(-l);
        // reflection formula
        CHECK(std::abs(a.plus * b.minus - 2.0 * std::cos(kPi / 4 * (l - 1.0))) < 1e-12);
        // duplication formula
        CHECK(rel(a.product(), harmonic_whole(l)) < 1e-12);
        auto r = determinant_pair(PolynomialPotential::monomial(2), l);
        CHECK(rel(r.plus, a.plus) < 1e-9);
        CHECK(rel(r.minus, a.minus) < 1e-9);
    }
    // zeros at the levels sqrt(v)(2k + 1)
    for (double v : {1.0, 2.0, 0.25}) {
        for (int k = 0; k < 6; ++k) {
            auto z = harmonic_determinants(-std::sqrt(v) * (2 * k + 1), v);
            cplx zero = k % 2 ? z.minus : z.plus, other = k % 2 ? z.plus : z.minus;
            CHECK(std::abs(zero) < 1e-13 * std::abs(other));
            if (v == 1.0) CHECK((k % 2 ? z.minus_zero : z.plus_zero));
        }
    }
    CHECK(harmonic_whole(-1.0) == 0.0);
    auto m1 = harmonic_determinants(-1.0);
    CHECK(!m1.minus_zero);
    CHECK(std::isfinite(m1.minus.real()));
    CHECK_THROWS_AS(harmonic_determinants(0.0, 0.0), DomainError);
}

TEST_CASE("binomial determinants") {
    for (int N : {2, 4, 6, 8}) {
        auto d = binomial_determinants(N, 0.0);
        auto h = homogeneous_d0(N);
        CHECK(rel(d.plus, h.plus) < 1e-13);
        CHECK(rel(d.minus, h.minus) < 1e-13);
    }
    // N = 2: coupling v is the energy shift
    for (double v : {-0.5, 0.0, 1.3, 4.0}) {
        auto d = binomial_determinants(2, v);
        auto g = harmonic_determinants(v);
        CHECK(rel(d.plus, g.plus) < 1e-13);
        CHECK(rel(d.minus, g.minus) < 1e-13);
    }
    // recessive route
    for (int N : {4, 6, 8}) {
        for (double v : {-3.0, 0.0, 2.0}) {
            auto d = binomial_determinants(N, v);
            auto r = determinant_pair(PolynomialPotential::binomial(N, N / 2 - 1, v), 0.0);
            // N = 6, v = -3 is the zero w_0 of D^+
            double scale = std::abs(d.plus) + std::abs(d.minus);
            CHECK(std::abs(r.plus - d.plus) < 1e-8 * scale);
            CHECK(std::abs(r.minus - d.minus) < 1e-8 * scale);
        }
    }
    CHECK(binomial_determinants(6, -3.0).plus_zero);
    // zeros at v = -w_k
    for (int N : {2, 4, 6, 8}) {
        for (int k = 0; k < 10; ++k) {
            auto d = binomial_determinants(N, -binomial_level(N, k));
            CHECK((k % 2 ? d.minus_zero : d.plus_zero));
        }
        CHECK(binomial_level(N, 0) == N / 2.0);
        CHECK(binomial_level(N, 1) == N / 2.0 + 2);
    }
}

TEST_CASE("binomial reflection identity") {
    for (int N : {2, 4, 6, 8}) {
        double phi = 4 * kPi / (N + 2);
        for (int i = 0; i <= 80; ++i) {
            double v = -10 + 0.25 * i;
            auto a = binomial_determinants(N, v), b = binomial_determinants(N, -v);
            double lhs = (a.plus * b.minus).real();
            double rhs = 2 / std::sin(phi / 2) * std::cos(phi * (v - 1) / 4);
            CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("binomial whole-line combination") {
    for (int N : {4, 8, 12}) {
        for (int i = 0; i <= 80; ++i) {
            double v = -10 + 0.25 * i;
            CHECK(std::abs(binomial_whole_line(N, v) - binomial_whole_line_cosine(N, v)) < 1e-12);
        }
        CHECK(binomial_whole_line(N, 0.0) == doctest::Approx(homogeneous_d0(N).whole).epsilon(1e-13));
        for (double w : binomial_whole_line_zeros(N, 3)) {
            CHECK(std::abs(binomial_whole_line(N, w)) < 1e-12);
            CHECK(std::abs(binomial_whole_line(N, -w)) < 1e-12);
        }
    }
    auto z = binomial_whole_line_zeros(4, 3);
    CHECK(z == std::vector<double>{3, 9, 15});
    CHECK_THROWS_AS(binomial_whole_line(6, 1.0), DomainError);
}

TEST_CASE("generalized-spectrum determinants") {
    // N = 2 agrees with the harmonic determinants
    for (double v : {-0.5, 0.0, 2.0}) {
        auto g = binomial_gen_determinants(2, v);
        auto h = harmonic_determinants(v);
        CHECK(rel(g.plus, h.plus) < 1e-13);
        CHECK(rel(g.minus, h.minus) < 1e-13);
    }
    for (int N : {2, 4, 6, 8}) {
        for (int k = 0; k < 8; ++k) {
            auto g = binomial_gen_determinants(N, -binomial_level(N, k));
            CHECK((k % 2 ? g.minus_zero : g.plus_zero));
        }
        for (double v : {-2.5, 0.0, 1.0, 3.5}) {
            auto d = binomial_determinants(N, v);
            auto g = binomial_gen_determinants(N, v);
            CHECK(rel(d.plus / g.plus, binomial_shift_factor(N, v, Parity::Plus)) < 1e-12);
            CHECK(rel(d.minus / g.minus, binomial_shift_factor(N, v, Parity::Minus)) < 1e-12);
        }
    }
}

TEST_CASE("confluent hypergeometric functions") {
    // M(1, 2, z) = (e^z - 1)/z, U(a, a+1, z) = z^{-a}
    for (double z : {0.1, 1.0, 5.0, 12.0}) CHECK(rel(kummer_m(1, 2, z), std::expm1(z) / z) < 1e-14);
    for (double z : {0.3, 2.0, 8.0, 25.0, 60.0}) CHECK(rel(tricomi_u(0.7, 1.7, z), std::pow(z, -0.7)) < 1e-10);
    // U(1/2, 1/2, z) = sqrt(pi) e^z erfc(sqrt z)
    for (double z : {0.5, 3.0, 10.0})
        CHECK(rel(tricomi_u(0.5, 0.5, z), std::sqrt(kPi) * std::exp(z) * std::erfc(std::sqrt(z))) < 1e-10);
    CHECK_THROWS_AS(tricomi_u(0.5, 1.0, 1.0), DomainError);
}

TEST_CASE("binomial eigenfunction against the recessive solver") {
    struct Case {
        int N;
        double v;
    };
    for (Case c : {Case{6, 1.0}, Case{4, -2.0}, Case{8, 0.5}, Case{2, 0.0}}) {
        std::vector<double> qs{0.3, 0.8, 1.5, 2.0};
        auto p = c.N == 2 ? PolynomialPotential::monomial(2) : PolynomialPotential::binomial(c.N, c.N / 2 - 1, c.v);
        auto r = recessive_values(p, 0.0, qs);
        for (std::size_t i = 0; i < qs.size(); ++i) {
            auto e = binomial_eigenfunction(c.N, c.v, qs[i]);
            CHECK(rel(r[i].value(), e.psi) < 1e-8);
            CHECK(rel(r[i].derivative(), e.dpsi) < 1e-8);
        }
    }
    // q -> 0 recovers the determinants
    auto d = binomial_determinants(6, 1.0);
    auto e = binomial_eigenfunction(6, 1.0, 1e-7);
    CHECK(rel(e.psi, d.minus) < 1e-6);
    CHECK(rel(-e.dpsi, d.plus) < 1e-6);
    // parabolic-cylinder form
    for (double q : {0.2, 1.0, 2.5}) CHECK(rel(harmonic_eigenfunction_pc(q), binomial_eigenfunction(2, 0.0, q).psi) < 1e-12);
}

TEST_CASE("square well functions") {
    // values
    CHECK(std::abs(square_well(SquareWellKind::Zeta, Parity::Whole, 0.0) + 0.5) < 1e-14);
    CHECK(std::abs(square_well(SquareWellKind::Zeta, Parity::Plus, 0.0)) < 1e-14);
    CHECK(std::abs(square_well(SquareWellKind::Zeta, Parity::Plus, 1.0) - 0.5) < 1e-14);
    CHECK(std::abs(square_well(SquareWellKind::Zeta, Parity::Minus, 1.0) - 1.0 / 6) < 1e-14);
    CHECK(square_well(SquareWellKind::Determinant0, Parity::Whole, 0.0) == 4.0);
    CHECK(square_well(SquareWellKind::Determinant0, Parity::Plus, 0.0) == 2.0);
    CHECK_THROWS_AS(square_well(SquareWellKind::Zeta, Parity::Minus, 0.5), PoleError);
    // zeta against level sums
    for (double s : {1.0, 1.5, 2.0, 3.0}) {
        double zp = 0, zm = 0;
        for (int k = 0; k < 200000; ++k) (k % 2 ? zm : zp) += std::pow(square_well_level(k), -s);
        double tail = std::pow(kPi / 2, -2 * s) * boost::math::zeta(2 * s) - zp - zm;
        CHECK(tail > 0);
        CHECK(std::abs(square_well(SquareWellKind::Zeta, Parity::Plus, s).real() - zp) < tail + 1e-14);
        CHECK(std::abs(square_well(SquareWellKind::Zeta, Parity::Minus, s).real() - zm) < tail + 1e-14);
        CHECK(std::abs(square_well(SquareWellKind::Zeta, Parity::Whole, s).real() - zp - zm - tail) < 1e-12);
    }
    // Fredholm determinants vanish at the levels with the right parity
    for (int k = 0; k < 10; ++k) {
        cplx l = -square_well_level(k);
        Parity p = k % 2 ? Parity::Minus : Parity::Plus;
        Parity q = k % 2 ? Parity::Plus : Parity::Minus;
        CHECK(std::abs(square_well(SquareWellKind::Fredholm, p, l)) < 1e-13);
        CHECK(std::abs(square_well(SquareWellKind::Fredholm, q, l)) > 1e-3);
        CHECK(std::abs(square_well(SquareWellKind::Fredholm, Parity::Whole, l)) < 1e-13);
    }
    // series and closed form meet continuously
    for (Parity p : {Parity::Plus, Parity::Minus, Parity::Whole}) {
        CHECK(rel(square_well(SquareWellKind::Fredholm, p, 0.9999999999), square_well(SquareWellKind::Fredholm, p, 1.0000000001)) < 1e-9);
    }
}

TEST_CASE("square well Wronskian relation") {
    for (int i = 0; i <= 250; ++i) {
        double l = -20 + 0.1 * i;
        cplx dp = square_well(SquareWellKind::Fredholm, Parity::Plus, l);
        cplx dm = square_well(SquareWellKind::Fredholm, Parity::Minus, l);
        cplx lhs = dp * square_well_log_derivative(Parity::Minus, l) - square_well_log_derivative(Parity::Plus, l) * dm;
        CHECK(std::abs(lhs - 0.5 * (1.0 - dp * dm)) < 1e-10);
    }
    // derivative against central differences
    for (double l : {-15.3, -2.0, -0.4, 0.6, 3.0}) {
        double h = 1e-5;
        for (Parity p : {Parity::Plus, Parity::Minus, Parity::Whole}) {
            cplx fd = l * (square_well(SquareWellKind::Fredholm, p, l + h) - square_well(SquareWellKind::Fredholm, p, l - h)) / (2 * h);
            CHECK(std::abs(fd - square_well_log_derivative(p, l)) < 1e-8);
        }
    }
}

TEST_CASE("square well cocycle constraint at the levels") {
    for (int k = 0; k <= 20; ++k) {
        cplx v = -2.0 * square_well_log_derivative(Parity::Whole, -square_well_level(k));
        CHECK(std::abs(v - double(k % 2 ? -1 : 1)) < 1e-10);
    }
}

TEST_CASE("catalog") {
    const auto& c = closed_form_catalog();
    CHECK(c.size() >= 15);
    for (const auto& e : c) {
        CHECK(!e.name.empty());
        CHECK(!e.relation.empty());
        CHECK(!e.domain.empty());
    }
}
