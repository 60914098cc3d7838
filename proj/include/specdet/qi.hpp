#pragma once

#include <string>
#include <vector>

#include "specdet/zetadet.hpp"

namespace specdet {

// Qi^±(v) = D^±(0) of -d^2/dq^2 + q^4 + v q^2.
enum class QiRoute { Recessive, Spectral };
std::string to_string(QiRoute r);

struct QiEval {
    cplx v;
    cplx qi_plus;
    cplx qi_minus;
    QiRoute route = QiRoute::Recessive;
    double error_estimate = 0.0;  // relative
};

struct QiOptions {
    double tol = 1e-12;     // recessive integrator tolerance
    int levels = 240;       // spectral route: eigenvalues of q^4 + v q^2 (both parities)
    int threads = 1;
};

// Spectral route requires real v.
QiEval qi_eval(cplx v, QiRoute route = QiRoute::Recessive, const QiOptions& o = {});

// Qi^±(0) by Gamma functions.
struct QiPair {
    double plus;
    double minus;
};
QiPair qi_at_zero();

// Large-|v| forms: Decay uses v > 0, Oscillatory gives Qi(-w) for w > 0.
enum class QiSide { Decay, Oscillatory };
QiPair qi_asymptotic(double x, QiSide side);

// Leading-order zeros of the oscillatory forms: w^{3/2}/3 ± pi/8 = (n + 1/2) pi.
double qi_asymptotic_zero(int k);

// (2/pi) arg Qi^±(-j w), j = e^{2 i pi/3}, with the phase continued from w = 0.
double qi_exact_quantization(double w, Parity parity, double tol = 1e-12);
// k + 1/2 ± 1/6 for the k-th zero (parity fixed by k).
double qi_quantization_target(int k);

// Zeros of Qi and their spectral functions.
struct QiZeroFunctions {
    GeneralizedSpectrum zeros;
    std::vector<double> zeta_plus;    // Z^+(n), index n - 1
    std::vector<double> zeta_minus;
    std::vector<double> zeta_plus_err;
    std::vector<double> zeta_minus_err;
    double zprime_plus = 0.0;         // Z^±'(0)
    double zprime_minus = 0.0;
    double det0_plus = 0.0;           // exp(-Z^±'(0))
    double det0_minus = 0.0;
    double det0_plus_closed = 0.0;    // D_4^±(0) / D_2^±(0)
    double det0_minus_closed = 0.0;
    double skew_zeta1_closed = 0.0;   // Z^P(1) by Gamma functions
    std::string warning;              // set when too few zeros were used
};

QiZeroFunctions qi_zero_zeta(int n_max, int K = 240, int threads = 1);

// Z^P(1) = sum (-1)^k / w_k over the zeros w_k of det(-d^2/dq^2 + |q|^N - w q^2), N >= 3.
double generalized_skew_zeta1(int N);

// Qi^±(0) exp(-sum_n Z^±(n)/n (-v)^n), truncated at the available n.
QiPair qi_taylor(const QiZeroFunctions& z, double v);

// D-script^±(v) = Qi^±(v) / D_2^±(0).
QiPair qi_zero_determinant(double v, const QiOptions& o = {});

struct SumRuleResidual {
    std::string name;
    double residual;
};

// Z^-(1) = 2 Z^+(1); 2 Z^-(2) - Z^+(2) = 3 (Z^-(1) - Z^+(1))^2; Z(3) = Z(1)^3/6 - Z(1) Z(2)/2 (Z = Z^+ + Z^-).
std::vector<SumRuleResidual> qi_sum_rules(const QiZeroFunctions& z);

// e^{i pi/6} Qi^+(j v) Qi^-(v) - e^{-i pi/6} Qi^+(v) Qi^-(j v) - 2i.
cplx qi_functional_residual(cplx v, double tol = 1e-12);

}  // namespace specdet
