#pragma once

#include <vector>

#include "specdet/potential.hpp"

namespace specdet {

struct RecessiveOptions {
    double tol = 1e-12;           // local truncation tolerance, in [1e-12, 1e-6]
    bool estimate_error = true;   // rerun with halved steps
    bool count_nodes = false;     // Pruefer angle and node counts (real potential and lambda)
    double q_start = 0.0;         // 0 selects automatically
};

struct StepStats {
    int steps = 0;
    int riccati_terms = 0;
    int restarts = 0;  // q_start enlargements
};

// psi and psi' at a point, held as mantissa * exp(log_scale) so that neither under- nor overflows.
struct ScaledPair {
    cplx psi;
    cplx dpsi;
    double log_scale = 0.0;

    cplx value() const;       // psi e^{log_scale}
    cplx derivative() const;  // dpsi e^{log_scale}
    cplx log_value() const;   // log psi (principal branch of the mantissa)
    cplx log_neg_derivative() const;
};

struct RecessiveResult {
    cplx psi0;   // psi_lambda(0) = D^-(lambda)
    cplx dpsi0;  // psi'_lambda(0) = -D^+(lambda)
    ScaledPair scaled;
    double q_start = 0.0;
    StepStats step_stats;
    double error_estimate = 0.0;  // relative, max over psi0 and dpsi0
    // Node counts on (0, infinity) when requested: zeros of psi and Pruefer crossings of psi' = 0,
    // i.e. the number of Dirichlet and Neumann eigenvalues E < -lambda.
    int dirichlet_count = -1;
    int neumann_count = -1;
    double prufer_angle = 0.0;  // unwrapped atan2(psi, psi') at q = 0, with the value at q_start in (pi/2, pi)
};

RecessiveResult solve_recessive(const PolynomialPotential& p, cplx lambda, const RecessiveOptions& opts);
RecessiveResult solve_recessive(const PolynomialPotential& p, cplx lambda, double tol = 1e-12);

struct DeterminantPair {
    cplx plus;   // -psi'(0)
    cplx minus;  // psi(0)
    cplx product() const { return plus * minus; }
};

DeterminantPair determinant_pair(const PolynomialPotential& p, cplx lambda, double tol = 1e-12);

// Recessive solution sampled at the given points q >= 0 (any order).
std::vector<ScaledPair> recessive_values(const PolynomialPotential& p, cplx lambda, const std::vector<double>& qs,
                                         double tol = 1e-12);

// Initial data from the large-q Riccati expansion of psi'/psi; exposed for tests.
struct RiccatiStart {
    cplx log_psi;
    cplx y;                    // psi'/psi
    std::vector<cplx> coeffs;  // a_m, psi'/psi ~ sum a_m q^{N/2 - m/2}
    double truncation = 0.0;   // size of the last retained terms
    bool converged = false;
};

RiccatiStart riccati_start(const PolynomialPotential& p, cplx lambda, double q);

// Integrates the recessive solution together with a second, independent solution from q_start to 0 and
// returns the maximal relative deviation of their Wronskian from its initial value.
double wronskian_drift(const PolynomialPotential& p, cplx lambda, double tol = 1e-12);

}  // namespace specdet
