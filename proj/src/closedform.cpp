#include "specdet/closedform.hpp"

#include <cmath>

namespace specdet {

namespace {

const double kSqrtPi = std::sqrt(kPi);

void require_even(int N, const char* who) {
    if (N < 2 || N % 2) throw DomainError(std::string(who) + ": N must be even and >= 2");
}

}  // namespace

HomogeneousD0 homogeneous_d0(int N) {
    if (N < 0) throw DomainError("homogeneous_d0: N must be >= 0");
    double nu = nu_of(N);
    double scale = std::pow(nu, N * nu / 2);
    return {std::tgamma(1 - nu) / (scale * kSqrtPi), std::tgamma(nu) * scale / kSqrtPi, 1 / std::sin(nu * kPi)};
}

ClosedPair airy_determinants(cplx lambda) {
    auto a = airy(lambda);
    ClosedPair r{-2 * kSqrtPi * a.ai_prime, 2 * kSqrtPi * a.ai};
    return r;
}

ClosedPair harmonic_determinants(cplx lambda, double v) {
    if (!(v > 0)) throw DomainError("harmonic_determinants: v must be positive");
    double sv = std::sqrt(v);
    cplx x = lambda / sv;
    double base = std::sqrt(2.0) * std::pow(v, 0.125);
    ClosedPair r;
    cplx gp = rgamma((1.0 + x) / 4.0), gm = rgamma((3.0 + x) / 4.0);
    r.plus = std::pow(cplx(base), 1.0 - x) * std::sqrt(2 * kPi) * gp;
    r.minus = std::pow(cplx(base), -1.0 - x) * std::sqrt(2 * kPi) * gm;
    r.plus_zero = gp == 0.0;
    r.minus_zero = gm == 0.0;
    return r;
}

cplx harmonic_whole(cplx lambda) {
    return std::pow(cplx(2.0), -lambda / 2.0) * std::sqrt(2 * kPi) * rgamma((1.0 + lambda) / 2.0);
}

ClosedPair binomial_determinants(int N, double v) {
    require_even(N, "binomial_determinants");
    double nu = nu_of(N);
    double shift = std::pow(2.0, -v / N);
    double rp = rgamma(nu * (v - 1) + 0.5), rm = rgamma(nu * (v + 1) + 0.5);
    ClosedPair r;
    r.plus = -shift * std::pow(4 * nu, nu * (v + 1) + 0.5) * std::tgamma(-2 * nu) * rp;
    r.minus = shift * std::pow(4 * nu, nu * (v - 1) + 0.5) * std::tgamma(2 * nu) * rm;
    r.plus_zero = rp == 0.0;
    r.minus_zero = rm == 0.0;
    return r;
}

double binomial_whole_line(int N, double v) {
    if (N < 4 || N % 4) throw DomainError("binomial_whole_line: N must be a positive multiple of 4");
    auto a = binomial_determinants(N, v), b = binomial_determinants(N, -v);
    return 0.5 * (a.plus * b.minus + b.plus * a.minus).real();
}

double binomial_whole_line_cosine(int N, double v) {
    if (N < 4 || N % 4) throw DomainError("binomial_whole_line_cosine: N must be a positive multiple of 4");
    double nu = nu_of(N);
    return std::cos(kPi * nu * v) / std::sin(kPi * nu);
}

std::vector<double> binomial_whole_line_zeros(int N, int count) {
    std::vector<double> z;
    for (int n = 0; n < count; ++n) z.push_back((N + 2) * (n + 0.5));
    return z;
}

double binomial_level(int N, int k) {
    require_even(N, "binomial_level");
    if (k < 0) throw DomainError("binomial_level: k must be >= 0");
    int n = k / 2;
    return N / 2.0 + (k % 2 ? 2 : 0) + double(N + 2) * n;
}

ClosedPair binomial_gen_determinants(int N, double v) {
    require_even(N, "binomial_gen_determinants");
    double nu = nu_of(N);
    double rp = rgamma(nu * (v - 1) + 0.5), rm = rgamma(nu * (v + 1) + 0.5);
    ClosedPair r;
    r.plus = std::pow(nu, nu * (v - 1)) * std::sqrt(2 * kPi) * rp;
    r.minus = std::pow(nu, nu * (v + 1)) * std::sqrt(2 * kPi) * rm;
    r.plus_zero = rp == 0.0;
    r.minus_zero = rm == 0.0;
    return r;
}

double binomial_shift_factor(int N, double v, Parity parity) {
    require_even(N, "binomial_shift_factor");
    if (parity == Parity::Whole) throw DomainError("binomial_shift_factor: parity must be + or -");
    auto d = homogeneous_d0(N / 2 - 1);
    return std::pow(2.0, double(N - 2) * v / (N * (N + 2))) * (parity == Parity::Plus ? d.plus : d.minus);
}

double kummer_m(double a, double b, double z) {
    long double term = 1, sum = 1;
    for (int n = 0; n < 100000; ++n) {
        term *= (a + n) * (long double)z / ((b + n) * (n + 1));
        sum += term;
        if (term == 0 || (n > std::abs(a) + z && std::abs(term) < 1e-19L * std::abs(sum))) break;
    }
    return double(sum);
}

double tricomi_u(double a, double b, double z) {
    if (!(z > 0)) throw DomainError("tricomi_u: z must be positive");
    if (b == std::round(b)) throw DomainError("tricomi_u: integer b not supported");
    if (z > 20) {
        // z^{-a} sum (a)_n (a-b+1)_n / n! (-z)^{-n}, cut at the smallest term
        long double term = 1, sum = 1, last = 1;
        for (int n = 0; n < 200; ++n) {
            term *= -(a + n) * (a - b + 1 + n) / ((n + 1) * (long double)z);
            if (std::abs(term) > std::abs(last) || term == 0) break;
            sum += term;
            last = term;
            if (std::abs(term) < 1e-19L * std::abs(sum)) break;
        }
        return double(sum) * std::pow(z, -a);
    }
    return std::tgamma(1 - b) * rgamma(1 + a - b) * kummer_m(a, b, z) +
           std::pow(z, 1 - b) * std::tgamma(b - 1) * rgamma(a) * kummer_m(1 + a - b, 2 - b, z);
}

EigenfunctionValue binomial_eigenfunction(int N, double v, double q) {
    require_even(N, "binomial_eigenfunction");
    if (!(q > 0)) throw DomainError("binomial_eigenfunction: q must be positive");
    double nu = nu_of(N);
    double a = nu * (v - 1) + 0.5, b = 1 - 2 * nu;
    double z = 4 * nu * std::pow(q, 1 + N / 2.0);
    double c = std::pow(2.0, -v / N) * std::pow(4 * nu, a) * std::exp(-z / 2);
    double u = tricomi_u(a, b, z);
    double du = -a * tricomi_u(a + 1, b + 1, z);
    double dz = 2 * std::pow(q, N / 2.0);
    return {c * u, c * (du - u / 2) * dz};
}

double harmonic_eigenfunction_pc(double q) {
    if (!(q > 0)) throw DomainError("harmonic_eigenfunction_pc: q must be positive");
    // U(0, x) = sqrt(x / (2 pi)) K_{1/4}(x^2 / 4)
    double x = std::sqrt(2.0) * q;
    return std::pow(2.0, 0.25) * std::sqrt(x / (2 * kPi)) * bessel_k(0.25, x * x / 4);
}

double square_well_level(int k) {
    if (k < 0) throw DomainError("square_well_level: k must be >= 0");
    return double(k + 1) * (k + 1) * kPi * kPi / 4;
}

namespace {

// Delta^± and lambda d/dlambda Delta^± ; Taylor series in lambda near 0.
void well_pair(Parity p, cplx lambda, cplx& value, cplx& ld) {
    bool plus = p == Parity::Plus;
    if (std::abs(lambda) < 1.0) {
        cplx term = 1.0, v = 0.0, d = 0.0;
        for (int n = 0; n < 30; ++n) {
            if (n > 0) term *= lambda / double((plus ? 2 * n - 1 : 2 * n) * (plus ? 2 * n : 2 * n + 1));
            v += term;
            d += double(n) * term;
        }
        value = v;
        ld = d;
        return;
    }
    cplx r = std::sqrt(-lambda);
    if (plus) {
        value = std::cos(r);
        ld = -r * std::sin(r) / 2.0;
    } else {
        value = std::sin(r) / r;
        ld = (r * std::cos(r) - std::sin(r)) / (2.0 * r);
    }
}

}  // namespace

cplx square_well(SquareWellKind kind, Parity parity, cplx arg) {
    switch (kind) {
    case SquareWellKind::Fredholm: {
        if (parity != Parity::Whole) {
            cplx v, d;
            well_pair(parity, arg, v, d);
            return v;
        }
        if (std::abs(arg) < 1.0) {
            cplx a, b, d;
            well_pair(Parity::Plus, arg, a, d);
            well_pair(Parity::Minus, arg, b, d);
            return a * b;
        }
        cplx r = std::sqrt(-arg);
        return std::sin(2.0 * r) / (2.0 * r);
    }
    case SquareWellKind::Zeta: {
        if (arg.imag() != 0) throw DomainError("square_well: zeta needs real s");
        double s = arg.real();
        if (std::abs(s - 0.5) < 1e-12) {
            double res = parity == Parity::Whole ? 1 / kPi : 1 / (2 * kPi);
            throw PoleError("square_well: zeta pole at s = 1/2", res);
        }
        double z = riemann_zeta(2 * s);
        if (parity == Parity::Plus) return (std::pow(2.0, 2 * s) - 1) * std::pow(kPi, -2 * s) * z;
        if (parity == Parity::Minus) return std::pow(kPi, -2 * s) * z;
        return std::pow(2 / kPi, 2 * s) * z;
    }
    case SquareWellKind::Determinant0:
        return parity == Parity::Whole ? 4.0 : 2.0;
    }
    return 0.0;
}

cplx square_well_log_derivative(Parity parity, cplx lambda) {
    if (parity != Parity::Whole) {
        cplx v, d;
        well_pair(parity, lambda, v, d);
        return d;
    }
    cplx a, da, b, db;
    well_pair(Parity::Plus, lambda, a, da);
    well_pair(Parity::Minus, lambda, b, db);
    return da * b + a * db;
}

const std::vector<ClosedFormIdentity>& closed_form_catalog() {
    static const std::vector<ClosedFormIdentity> c = {
        {"homogeneous_d0", "D_N^+(0) = Gamma(1-nu)/(nu^{N nu/2} sqrt(pi)), D_N^-(0) = Gamma(nu) nu^{N nu/2}/sqrt(pi)",
         "N >= 1"},
        {"homogeneous_zeta1", "Z_N^P(1), Z_N(1) by Gamma products", "N >= 1 (Z_2(1) finite part)"},
        {"airy_determinants", "D_1^+ = -2 sqrt(pi) Ai'(lambda), D_1^- = 2 sqrt(pi) Ai(lambda)", "lambda complex"},
        {"harmonic_determinants", "D_2^±(lambda | sqrt v) by Gamma functions", "v > 0, lambda complex"},
        {"harmonic_reflection", "D_2^+(lambda) D_2^-(-lambda) = 2 cos(pi (lambda - 1)/4)", "lambda complex"},
        {"binomial_determinants", "D_N^±(0; v) for q^N + v q^{N/2-1}", "N even >= 2, v real"},
        {"binomial_reflection", "D_N^+(0; v) D_N^-(0; -v) = 2 cos(phi (v-1)/4) / sin(phi/2)", "N even >= 2"},
        {"binomial_whole_line", "(D^+(v) D^-(-v) + D^+(-v) D^-(v))/2 = cos(pi nu v)/sin(pi nu)", "N = 0 mod 4"},
        {"binomial_levels", "w_{2n} = N/2 + (N+2) n, w_{2n+1} = N/2 + 2 + (N+2) n", "N even >= 2"},
        {"binomial_gen_determinants", "nu^{nu(v -+ 1)} sqrt(2 pi) / Gamma(nu(v -+ 1) + 1/2)", "N even >= 2"},
        {"binomial_shift_factor", "D_N^±(0; v) / generalized determinant = 2^{(N-2)v/(N(N+2))} D_{N/2-1}^±(0)",
         "N even >= 2"},
        {"binomial_eigenfunction", "psi(q) through Tricomi U(nu(v-1)+1/2, 1-2nu, 4 nu q^{1+N/2})", "q > 0"},
        {"harmonic_eigenfunction_pc", "psi(q) = 2^{1/4} U(0, sqrt(2) q)", "q > 0"},
        {"square_well_fredholm", "Delta^+ = cos sqrt(-lambda), Delta^- = sin sqrt(-lambda)/sqrt(-lambda)",
         "lambda complex"},
        {"square_well_zeta", "Z^+(s) = (2^{2s}-1) pi^{-2s} zeta(2s), Z^-(s) = pi^{-2s} zeta(2s)", "s real, s != 1/2"},
        {"square_well_d0", "D^±(0) = 2, D(0) = 4", "-"},
        {"square_well_wronskian", "Delta^+ (lambda Delta^-)' - (lambda Delta^+)' Delta^- = (1 - Delta^+ Delta^-)/2",
         "lambda complex"},
        {"square_well_cocycle", "-2 lambda Delta'(lambda) = (-1)^k at lambda = -E_k", "k >= 0"},
    };
    return c;
}

}  // namespace specdet
