#pragma once

#include <string>
#include <vector>

#include "specdet/rational.hpp"
#include "specdet/specfun.hpp"

namespace specdet {

// V(q) = q^N + sum_{1<=m<N} a_m q^m, so V(0) = 0. Coefficients may be complex
// (conjugate potentials); the physical potentials are real.
class PolynomialPotential {
public:
    PolynomialPotential() = default;
    explicit PolynomialPotential(int degree);
    PolynomialPotential(int degree, std::vector<cplx> coeffs);

    static PolynomialPotential monomial(int degree) { return PolynomialPotential(degree); }
    // q^N + a q^m
    static PolynomialPotential binomial(int degree, int m, cplx a);
    static PolynomialPotential parse(const std::string& text);
    static PolynomialPotential from_json(const std::string& json);

    int degree() const { return degree_; }
    cplx coeff(int m) const { return m >= 0 && m <= degree_ ? coeffs_[m] : cplx(0.0); }
    const std::vector<cplx>& coeffs() const { return coeffs_; }

    bool is_real() const;
    bool symmetric() const;  // only even powers
    bool homogeneous() const;

    cplx operator()(cplx q) const;
    double operator()(double q) const;
    cplx derivative(cplx q) const;

    std::string str() const;
    std::string to_json() const;

private:
    int degree_ = 0;
    std::vector<cplx> coeffs_;  // index m -> a_m, a_0 = 0, a_N = 1
};

// phi = 4 pi / (N + 2)
double rotation_angle(int degree);
int conjugate_count(const PolynomialPotential& p);

struct Conjugate {
    PolynomialPotential potential;
    cplx lambda_rotation;  // e^{-i ell phi}
};

// V^[ell](q) = e^{-i ell phi} V(e^{-i ell phi / 2} q)
Conjugate conjugate(const PolynomialPotential& p, int ell);

struct BetaTerm {
    Rational sigma;  // exponent of q^{sigma - N s}
    cplx value;      // beta_sigma(s)
    cplx ds;         // d/ds beta_sigma(s)
};

// Large-q expansion (V(q) + lambda)^{-s+1/2} ~ sum_sigma beta_sigma(s) q^{sigma - N s}.
struct BetaExpansion {
    std::vector<BetaTerm> terms;  // sigma = N/2, N/2 - 1, ...
    cplx lambda;
    double s = 0.0;
    cplx beta_m1;     // beta_{-1}(s); zero when sigma = -1 is off the lattice
    cplx beta_m1_ds;  // d/ds beta_{-1}(s)

    // Partial sum at q (including the q^{-Ns} factor).
    cplx evaluate(double q) const;
};

BetaExpansion beta_expansion(const PolynomialPotential& p, cplx lambda, double s, int order);

// The renormalized action: int_q^inf Pi = -S(q) - beta_{-1}(0) log q + C + o(1).
struct ActionNormalization {
    struct Term {
        Rational power;  // sigma + 1 > 0
        cplx coeff;      // beta_sigma(0) / (sigma + 1)
    };
    std::vector<Term> S_terms;
    cplx beta_m1_at_0;
    cplx C;

    cplx S(cplx q) const;
};

ActionNormalization action_normalization(const PolynomialPotential& p, cplx lambda);

struct HeatTerm {
    Rational rho;
    cplx c;
};

// Small-t expansion of the whole-line classical partition function
// (pi t)^{-1/2} int_0^inf exp(-t (V(q) + lambda)) dq, terms with rho <= rho_max.
std::vector<HeatTerm> heat_coefficients(const PolynomialPotential& p, Rational rho_max, cplx lambda = 0.0);

// First quantum (hbar^2) correction of the whole-line heat trace for a symmetric potential:
// -(pi t)^{-1/2} (t^3 / 12) int_0^inf V'(q)^2 exp(-t V(q)) dq.
std::vector<HeatTerm> quantum_heat_corrections(const PolynomialPotential& p, Rational rho_max);

struct BSTerm {
    Rational rho;  // counting function term b E^{-rho} (log E)^log_power
    double b;
    int log_power = 0;
};

// b_{-rho} = c_rho / Gamma(1 - rho) (rho != 0), b_0 = c_0, from whole-line coefficients.
std::vector<BSTerm> bs_coefficients(const std::vector<HeatTerm>& heat);

// Growth order mu = 1/2 + 1/N.
inline Rational growth_order(int degree) { return Rational(1, 2) + Rational(1, degree); }

}  // namespace specdet
