#pragma once

#include <complex>

#include "specdet/errors.hpp"

namespace specdet {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// log Gamma(z). Continuous in Re z > 0 (principal branch there); for Re z < 1/2 the
// reflection formula is used, so exp(log_gamma(z)) == Gamma(z) everywhere.
// Throws PoleError at z = 0, -1, -2, ...
cplx log_gamma(cplx z);

// 1/Gamma(z); entire, exactly zero at the poles of Gamma.
cplx rgamma(cplx z);
double rgamma(double x);

// Modified Bessel functions and Bessel J for real order, x > 0.
double bessel_k(double nu, double x);
double bessel_i(double nu, double x);
double bessel_j(double nu, double x);
double bessel_j_prime(double nu, double x);

struct AiryPair {
    cplx ai;
    cplx ai_prime;
};

AiryPair airy(cplx z);

double riemann_zeta(double s);
double hurwitz_zeta(double s, double a);
double dirichlet_beta(double s);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, double* nodes, double* weights);

}  // namespace specdet
