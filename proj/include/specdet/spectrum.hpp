#pragma once

#include <string>
#include <vector>

#include "specdet/potential.hpp"

namespace specdet {

// Plus: Neumann at q = 0, even labels k. Minus: Dirichlet, odd k. Whole: both.
enum class Parity { Plus, Minus, Whole };

std::string to_string(Parity p);
Parity parse_parity(const std::string& s);
inline int parity_offset(Parity p) { return p == Parity::Minus ? 1 : 0; }

struct Level {
    int k;
    double value;
    Parity parity;
};

// Counting function F(x) = sum b x^{-rho}, with F(x_k) ~ k + 1/2.
struct CountingModel {
    std::vector<BSTerm> terms;

    double operator()(double x) const;
    double derivative(double x) const;
    // Smallest positive x with F(x) = target, by bracketing from below.
    double invert(double target) const;
};

struct SpectrumOptions {
    double tol = 1e-10;       // absolute tolerance on each level
    double ode_tol = 1e-12;
    int threads = 1;
    bool verify_counts = true;  // node count between consecutive levels
};

struct Spectrum {
    PolynomialPotential potential;
    Rational mu;
    std::vector<Level> levels;     // ascending
    std::vector<BSTerm> b_coeffs;  // parity-independent semiclassical coefficients
    CountingModel counting_plus, counting_minus;
    double tol = 0.0;
    double dilation = 1.0;  // levels are dilation * (levels of the potential)

    std::vector<double> values(Parity p) const;
    const CountingModel& counting(Parity p) const;
    std::string to_csv() const;
    std::string to_json() const;
};

// K levels of the given parity (K levels in total for Parity::Whole), E_k of -d^2/dq^2 + V(|q|).
Spectrum eigenvalues(const PolynomialPotential& p, Parity parity, int K, const SpectrumOptions& opts = {});

// Solution of the truncated Bohr-Sommerfeld relation F(E) = k + 1/2.
double bs_seed(const PolynomialPotential& p, int k);

// Parity-independent counting coefficients: classical terms, plus the hbar^2 terms for symmetric potentials.
std::vector<BSTerm> semiclassical_counting(const PolynomialPotential& p);

// Determinants as functions of a coupling v whose zeros v = -w_k form a generalized spectrum.
struct ZeroFamily {
    enum Kind { Qi, Binomial, WholeLine };
    Kind kind = Qi;
    int degree = 4;

    static ZeroFamily qi() { return {Qi, 4}; }
    // D_N^±(0; v) for q^N + v q^{N/2 - 1}, N even
    static ZeroFamily binomial(int N);
    // (D^+(v) D^-(-v) + D^+(-v) D^-(v)) / 2 for the same binomial, zeros at v > 0
    static ZeroFamily whole_line(int N);

    std::string str() const;
    // Potential at coupling v (for N = 2 the binomial term is the constant v, carried as lambda).
    PolynomialPotential potential(double v) const;
    double lambda(double v) const;
};

struct GeneralizedSpectrum {
    ZeroFamily family;
    std::vector<Level> zeros;  // w_k > 0 ascending
    Rational mu;               // convergence abscissa of sum w^{-s}
    CountingModel counting_plus, counting_minus;
    std::string note;  // assumptions carried by the data

    std::vector<double> values(Parity p) const;
    const CountingModel& counting(Parity p) const;
    std::string to_csv() const;
    std::string to_json() const;
};

GeneralizedSpectrum generalized_zeros(const ZeroFamily& family, Parity parity, int K,
                                      const SpectrumOptions& opts = {});

double bs_seed(const ZeroFamily& family, int k);

}  // namespace specdet
