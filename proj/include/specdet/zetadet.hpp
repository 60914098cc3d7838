#pragma once

#include <string>
#include <vector>

#include "specdet/spectrum.hpp"

namespace specdet {

// One labelled sequence of levels x_j (j = 0, 1, ...) with labels k = step*j + offset
// and a counting model F(x_k) ~ k + 1/2.
struct LevelSequence {
    std::vector<double> values;
    CountingModel counting;
    int step = 2;
    int offset = 0;
    Rational mu;
};

// Sectors making up the requested parity (two for Parity::Whole on a parity-split spectrum).
std::vector<LevelSequence> sectors(const Spectrum& spec, Parity parity);
std::vector<LevelSequence> sectors(const GeneralizedSpectrum& spec, Parity parity);

struct ZetaOptions {
    // Euler-Maclaurin derivative terms at the cut (through B_6); off gives the bare midpoint rule.
    bool derivative_corrections = true;
    int max_levels = 4096;  // per sector
};

struct ZetaEval {
    cplx s;
    cplx lambda;
    cplx value;
    int K_used = 0;
    std::vector<BSTerm> tail_model;  // counting terms of the first sector
    double error_estimate = 0.0;
};

enum class DeterminantRoute { Spectral, Recessive, ClosedForm };
std::string to_string(DeterminantRoute r);

struct DeterminantValue {
    cplx lambda;
    cplx value;
    DeterminantRoute route = DeterminantRoute::Spectral;
    double error_estimate = 0.0;
    bool exact_zero = false;
};

// Z(s, lambda) = sum (x_k + lambda)^{-s}, continued to Re s >= 0.
// Throws PoleError (with the residue) on the polar lattice.
ZetaEval zeta(const std::vector<LevelSequence>& seq, cplx s, cplx lambda = 0.0, const ZetaOptions& o = {});
ZetaEval zeta(const Spectrum& spec, cplx s, cplx lambda = 0.0, Parity parity = Parity::Whole,
              const ZetaOptions& o = {});
ZetaEval zeta(const GeneralizedSpectrum& spec, cplx s, cplx lambda = 0.0, Parity parity = Parity::Whole,
              const ZetaOptions& o = {});

// Z(n) where regular, otherwise the finite part lim (Z(s) - c/(s - n)).
ZetaEval zeta_finite_part(const std::vector<LevelSequence>& seq, int n, const ZetaOptions& o = {});

// log D(lambda) = -d/ds Z(s, lambda) at s = 0.
DeterminantValue log_determinant(const std::vector<LevelSequence>& seq, cplx lambda, const ZetaOptions& o = {});

DeterminantValue determinant_spectral(const std::vector<LevelSequence>& seq, cplx lambda, const ZetaOptions& o = {});
DeterminantValue determinant_spectral(const Spectrum& spec, cplx lambda, Parity parity = Parity::Whole,
                                      const ZetaOptions& o = {});
DeterminantValue determinant_spectral(const GeneralizedSpectrum& spec, cplx lambda,
                                      Parity parity = Parity::Whole, const ZetaOptions& o = {});

// Z'(0) = -log D(0).
double zprime0(const std::vector<LevelSequence>& seq, const ZetaOptions& o = {});
double zprime0(const Spectrum& spec, Parity parity = Parity::Whole, const ZetaOptions& o = {});
double zprime0(const GeneralizedSpectrum& spec, Parity parity = Parity::Whole, const ZetaOptions& o = {});

// Weierstrass product prod (1 + lambda/x_k) exp(sum_{n <= mu} (-lambda)^n / (n x_k^n)), mu < 2.
cplx fredholm(const std::vector<LevelSequence>& seq, cplx lambda, const ZetaOptions& o = {});
cplx fredholm(const Spectrum& spec, cplx lambda, Parity parity = Parity::Whole, const ZetaOptions& o = {});

// Z(0, lambda) from the heat coefficients encoded in the counting models.
cplx zeta0_trace(const std::vector<LevelSequence>& seq, cplx lambda);

// Dilation x_k -> alpha x_k.
std::vector<LevelSequence> rescale(const std::vector<LevelSequence>& seq, double alpha);
Spectrum rescale(const Spectrum& spec, double alpha);
// D(lambda | alpha) = alpha^{z0} D(lambda / alpha) from d = D(lambda / alpha) and z0 = Z(0, lambda / alpha).
DeterminantValue rescale(const DeterminantValue& d, double alpha, cplx z0);
ZetaEval rescale(const ZetaEval& z, double alpha);

struct ZetaAtOne {
    double skew;     // Z_N^P(1)
    double whole;    // Z_N(1); finite part for N = 2
    bool whole_is_pole = false;
};

// Z_N^P(1) and Z_N(1) for q^N.
ZetaAtOne closed_zp1(int N);

std::string to_json(const ZetaEval& z);
std::string to_json(const DeterminantValue& d);

}  // namespace specdet
