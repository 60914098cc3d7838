#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "specdet/potential.hpp"

namespace specdet {

struct VerificationSample {
    std::string point;
    double value = 0.0;     // the quantity checked (identity residual, computed entry, trend distance)
    double residual = 0.0;  // |value - expected|, or the trend increase for trend checks
    double tolerance = 0.0;
    bool pass = false;
    double expected = NAN;  // reference value, when the check compares against one
};

struct VerificationReport {
    std::string name;
    std::string relation;
    std::vector<VerificationSample> samples;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;

    void add(std::string point, double value, double residual, double tol);
    // Trend sample: passes when value < previous value of the same series.
    void add_decrease(std::string point, double value, double previous);
    VerificationReport& finalize();
};

// Deterministic grid plus `random_count` seeded points uniform in the disk |z| <= radius.
// The seed is derived from `identity`, so each identity has its own reproducible sample set.
std::vector<cplx> sample_points(const std::string& identity, const std::vector<cplx>& grid, double radius,
                                int random_count = 8);

// Continuous arg of f at ascending checkpoints, continued from the principal arg of f(0).
std::vector<double> continued_arg(const std::function<cplx(double)>& f, const std::vector<double>& checkpoints);

// Main bilinear functional relation between D and its first conjugate.
VerificationReport check_wronskian(const PolynomialPotential& p, const std::vector<cplx>& lambdas,
                                   double tol = 1e-6);
// Arg-of-rotated-determinant quantization at the first K levels.
VerificationReport check_exact_quantization(const PolynomialPotential& p, int K, double tol = 1e-6);
// Harmonic levels 2k + 1 dispatched from the zeros of 2 cos(pi (lambda - 1)/4).
VerificationReport check_harmonic_quantization(int K, double tol = 1e-6);
// Cocycle identities for D_4 (cubic form) and D_1 (quadratic form).
VerificationReport check_cocycle(int N, const std::vector<cplx>& lambdas, double tol = 1e-6);

VerificationReport check_qi_functional(double tol = 1e-6);
VerificationReport check_qi_cocycle(double tol = 1e-6);
VerificationReport check_qi_quantization(double tol = 1e-6);
// Recessive zeros against the reference values, bracketed by sign changes of the spectral route.
VerificationReport check_qi_zeros(double tol = 1e-6);

// Recessive-route determinants against Euler-Maclaurin spectral determinants, per parity.
VerificationReport check_route_equivalence(const std::vector<PolynomialPotential>& potentials,
                                           const std::vector<cplx>& lambdas, int K = 200, double tol = 1e-6);
// Gamma-function binomial determinants against the recessive route.
VerificationReport check_binomial_closed_form(double tol = 1e-8);
// Decay-side ratio to the asymptotic form on v = 5..9, oscillatory zeros and envelope on the negative axis.
VerificationReport check_qi_asymptotics();

VerificationReport check_binomial_functional(int N, double tol = 1e-6);
VerificationReport check_binomial_reflection(double tol = 1e-12);
VerificationReport check_harmonic_reflection(double tol = 1e-6);
VerificationReport check_binomial_levels(double tol = 1e-7);
VerificationReport check_binomial_whole_line(double tol = 1e-7);

enum class SumRuleFamily { Quartic, Airy, Harmonic, Qi, SquareWell };
VerificationReport check_sum_rules(SumRuleFamily family);

VerificationReport check_square_well_wronskian(double tol = 1e-10);
VerificationReport check_square_well_cocycle(double tol = 1e-10);

// N -> infinity trends over a ladder of degrees (one report per trend).
std::vector<VerificationReport> check_square_well_limit(const std::vector<int>& Ns = {4, 8, 16, 32, 64});

// Every entry of the zeta-value table for the Airy, quartic and Qi-zero spectra.
VerificationReport check_table1();

std::vector<std::string> suite_names();
// Runs a named suite ("all" runs every suite); threads > 1 runs suites concurrently, results kept in order.
std::vector<VerificationReport> run_suite(const std::string& name, int threads = 1);

std::string reports_to_json(const std::vector<VerificationReport>& reports);
std::string reports_to_junit(const std::vector<VerificationReport>& reports);
std::string reports_to_text(const std::vector<VerificationReport>& reports);

}  // namespace specdet
