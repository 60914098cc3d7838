#pragma once

#include <string>
#include <vector>

#include "specdet/spectrum.hpp"

namespace specdet {

// nu = 1/(N + 2)
inline double nu_of(int N) { return 1.0 / (N + 2); }

struct HomogeneousD0 {
    double plus;
    double minus;
    double whole;  // 1 / sin(nu pi)
};

// D_N^±(0) for q^N. N = 0 is accepted (both 1) for use in the coupling-shift factor below.
HomogeneousD0 homogeneous_d0(int N);

// Parity determinants with flags set where a reciprocal Gamma vanishes exactly.
struct ClosedPair {
    cplx plus;
    cplx minus;
    bool plus_zero = false;
    bool minus_zero = false;
    cplx product() const { return plus * minus; }
};

// D_1^+ = -2 sqrt(pi) Ai'(lambda), D_1^- = 2 sqrt(pi) Ai(lambda).
ClosedPair airy_determinants(cplx lambda);

// Determinants of -d^2/dq^2 + v q^2 (v > 0); v = 1 is the plain oscillator.
ClosedPair harmonic_determinants(cplx lambda, double v = 1.0);
// D_2(lambda) = 2^{-lambda/2} sqrt(2 pi) / Gamma((1 + lambda)/2).
cplx harmonic_whole(cplx lambda);

// D_N^±(0; v) for q^N + v q^{N/2 - 1}, N even >= 2.
ClosedPair binomial_determinants(int N, double v);

// (D^+(v) D^-(-v) + D^+(-v) D^-(v)) / 2 from the parity determinants, N = 0 mod 4.
double binomial_whole_line(int N, double v);
// The same quantity as cos(pi nu v) / sin(pi nu).
double binomial_whole_line_cosine(int N, double v);
// Zeros (N + 2)(n + 1/2), n = 0 .. count-1.
std::vector<double> binomial_whole_line_zeros(int N, int count);

// Generalized levels w_k (zeros at v = -w_k): even k from D^+, odd k from D^-.
double binomial_level(int N, int k);

// Gamma-function determinants of the generalized spectrum {w_k}.
ClosedPair binomial_gen_determinants(int N, double v);
// D_N^±(0; v) / (its generalized-spectrum determinant) = 2^{(N-2) v/(N(N+2))} D_{N/2-1}^±(0).
double binomial_shift_factor(int N, double v, Parity parity);

// Recessive solution of the binomial potential at lambda = 0 through Tricomi's U.
struct EigenfunctionValue {
    double psi;
    double dpsi;
};
EigenfunctionValue binomial_eigenfunction(int N, double v, double q);

// Tricomi U(a, b, z) for non-integer b and z > 0 (Kummer series plus the connection formula,
// asymptotic series for large z).
double tricomi_u(double a, double b, double z);
// Kummer M(a, b, z) by its Maclaurin series.
double kummer_m(double a, double b, double z);

// 2^{1/4} U(0, sqrt(2) q) via the Bessel-K representation of the parabolic-cylinder function.
double harmonic_eigenfunction_pc(double q);

// Infinite square well on [-1, 1] (the N -> infinity limit).
enum class SquareWellKind { Fredholm, Zeta, Determinant0 };
// Parity::Whole combines both parities (product / sum).
cplx square_well(SquareWellKind kind, Parity parity, cplx arg);
// lambda dDelta/dlambda for the Fredholm determinants.
cplx square_well_log_derivative(Parity parity, cplx lambda);
// Levels (k + 1) ^2 pi^2 / 4.
double square_well_level(int k);

struct ClosedFormIdentity {
    std::string name;
    std::string relation;
    std::string domain;
};

// Registry of the closed forms implemented here.
const std::vector<ClosedFormIdentity>& closed_form_catalog();

}  // namespace specdet
