#include "specdet/qi.hpp"

#include <cmath>

#include "specdet/closedform.hpp"
#include "specdet/recessive.hpp"

namespace specdet {

namespace {

const cplx kJ = std::polar(1.0, 2 * kPi / 3);

PolynomialPotential quartic(cplx v) { return PolynomialPotential::binomial(4, 2, v); }

}  // namespace

std::string to_string(QiRoute r) { return r == QiRoute::Recessive ? "recessive" : "spectral"; }

QiEval qi_eval(cplx v, QiRoute route, const QiOptions& o) {
    QiEval e;
    e.v = v;
    e.route = route;
    if (route == QiRoute::Recessive) {
        RecessiveOptions ro;
        ro.tol = o.tol;
        auto r = solve_recessive(quartic(v), 0.0, ro);
        e.qi_plus = -r.dpsi0;
        e.qi_minus = r.psi0;
        e.error_estimate = r.error_estimate;
        return e;
    }
    if (v.imag() != 0) throw DomainError("qi_eval: the spectral route needs real v");
    SpectrumOptions so;
    so.threads = o.threads;
    auto spec = eigenvalues(quartic(v), Parity::Whole, o.levels, so);
    auto p = determinant_spectral(spec, 0.0, Parity::Plus);
    auto m = determinant_spectral(spec, 0.0, Parity::Minus);
    e.qi_plus = p.value;
    e.qi_minus = m.value;
    auto relerr = [](const DeterminantValue& d) {
        return d.exact_zero ? 0.0 : d.error_estimate / std::max(std::abs(d.value), 1e-300);
    };
    e.error_estimate = std::max(relerr(p), relerr(m));
    return e;
}

QiPair qi_at_zero() {
    double g = std::tgamma(1.0 / 6), c = std::cbrt(6.0), sp = std::sqrt(kPi);
    return {c * 2 * sp / g, g / (c * sp)};
}

QiPair qi_asymptotic(double x, QiSide side) {
    if (!(x > 0)) throw DomainError("qi_asymptotic: argument must be positive");
    double sp = std::sqrt(kPi), g1 = std::tgamma(0.25), g3 = std::tgamma(0.75);
    double x32 = std::pow(x, 1.5);
    if (side == QiSide::Decay) {
        double e = std::exp(-x32 / 3);
        return {2 * sp / g1 * std::pow(x, 0.125) * e, sp / g3 * std::pow(x, -0.125) * e};
    }
    return {4 * sp / g1 * std::pow(x, 0.125) * std::cos(x32 / 3 + kPi / 8),
            2 * sp / g3 * std::pow(x, -0.125) * std::cos(x32 / 3 - kPi / 8)};
}

double qi_asymptotic_zero(int k) {
    if (k < 0) throw DomainError("qi_asymptotic_zero: k must be >= 0");
    int n = k / 2;
    double phase = (n + 0.5) * kPi + (k % 2 ? kPi / 8 : -kPi / 8);
    return std::pow(3 * phase, 2.0 / 3);
}

double qi_quantization_target(int k) { return k + 0.5 + (k % 2 ? -1.0 / 6 : 1.0 / 6); }

double qi_exact_quantization(double w, Parity parity, double tol) {
    if (!(w > 0)) throw DomainError("qi_exact_quantization: w must be positive");
    if (parity == Parity::Whole) throw DomainError("qi_exact_quantization: parity must be + or -");
    auto value = [&](double x) {
        auto d = determinant_pair(quartic(-kJ * x), 0.0, tol);
        return parity == Parity::Plus ? d.plus : d.minus;
    };
    // continue the phase from arg Qi(0) = 0 with steps small enough to stay on one sheet
    double x = 0, phase = 0;
    cplx prev = value(0.0);
    double h = 0.25;
    while (x < w) {
        double step = std::min(h, w - x);
        cplx next = value(x + step);
        double d = std::arg(next / prev);
        if (std::abs(d) > kPi / 4 && step > 1e-6) {
            h = step / 2;
            continue;
        }
        phase += d;
        x += step;
        prev = next;
        if (std::abs(d) < kPi / 16) h = std::min(2 * h, 0.5);
    }
    return 2 / kPi * phase;
}

double generalized_skew_zeta1(int N) {
    if (N < 3) throw DomainError("generalized_skew_zeta1: N must be >= 3");
    double nu = nu_of(N);
    return std::sin(nu * kPi) / (2 * std::sqrt(kPi)) * std::pow(2 * nu, 2 - 8 * nu) * std::tgamma(3 * nu) *
           std::tgamma(4 * nu) * std::tgamma(5 * nu) / std::tgamma(4 * nu + 0.5);
}

QiZeroFunctions qi_zero_zeta(int n_max, int K, int threads) {
    if (n_max < 1) throw DomainError("qi_zero_zeta: n_max must be >= 1");
    QiZeroFunctions z;
    SpectrumOptions so;
    so.threads = threads;
    z.zeros = generalized_zeros(ZeroFamily::qi(), Parity::Whole, K, so);
    if (K < 200) z.warning = "fewer than 200 zeros: Z(n) accuracy reduced";
    for (int n = 1; n <= n_max; ++n) {
        auto p = zeta(z.zeros, double(n), 0.0, Parity::Plus);
        auto m = zeta(z.zeros, double(n), 0.0, Parity::Minus);
        z.zeta_plus.push_back(p.value.real());
        z.zeta_minus.push_back(m.value.real());
        z.zeta_plus_err.push_back(p.error_estimate);
        z.zeta_minus_err.push_back(m.error_estimate);
    }
    z.zprime_plus = zprime0(z.zeros, Parity::Plus);
    z.zprime_minus = zprime0(z.zeros, Parity::Minus);
    z.det0_plus = std::exp(-z.zprime_plus);
    z.det0_minus = std::exp(-z.zprime_minus);
    auto d4 = homogeneous_d0(4), d2 = homogeneous_d0(2);
    z.det0_plus_closed = d4.plus / d2.plus;
    z.det0_minus_closed = d4.minus / d2.minus;
    z.skew_zeta1_closed = generalized_skew_zeta1(4);
    return z;
}

QiPair qi_taylor(const QiZeroFunctions& z, double v) {
    auto q0 = qi_at_zero();
    double sp = 0, sm = 0, pw = 1;
    for (std::size_t n = 1; n <= z.zeta_plus.size(); ++n) {
        pw *= -v;
        sp += z.zeta_plus[n - 1] / n * pw;
        sm += z.zeta_minus[n - 1] / n * pw;
    }
    return {q0.plus * std::exp(-sp), q0.minus * std::exp(-sm)};
}

QiPair qi_zero_determinant(double v, const QiOptions& o) {
    auto q = qi_eval(v, QiRoute::Recessive, o);
    auto d2 = homogeneous_d0(2);
    return {q.qi_plus.real() / d2.plus, q.qi_minus.real() / d2.minus};
}

std::vector<SumRuleResidual> qi_sum_rules(const QiZeroFunctions& z) {
    std::vector<SumRuleResidual> r;
    const auto &p = z.zeta_plus, &m = z.zeta_minus;
    if (p.size() >= 1) r.push_back({"Z-(1) - 2 Z+(1)", m[0] - 2 * p[0]});
    if (p.size() >= 2) {
        double d = m[0] - p[0];
        r.push_back({"2 Z-(2) - Z+(2) - 3 (Z-(1) - Z+(1))^2", 2 * m[1] - p[1] - 3 * d * d});
    }
    if (p.size() >= 3) {
        double z1 = p[0] + m[0], z2 = p[1] + m[1], z3 = p[2] + m[2];
        r.push_back({"Z(3) - Z(1)^3/6 + Z(1) Z(2)/2", z3 - z1 * z1 * z1 / 6 + z1 * z2 / 2});
    }
    return r;
}

cplx qi_functional_residual(cplx v, double tol) {
    auto a = determinant_pair(quartic(kJ * v), 0.0, tol);
    auto b = determinant_pair(quartic(v), 0.0, tol);
    cplx e = std::polar(1.0, kPi / 6);
    return e * a.plus * b.minus - std::conj(e) * b.plus * a.minus - cplx(0, 2);
}

}  // namespace specdet
