#include "specdet/zetadet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <optional>

namespace specdet {

namespace {

// Summand pieces: Pow = coef (x + a)^{-s}, Log = coef log(x + a).
struct Piece {
    enum Kind { Pow, Log } kind;
    cplx s;
    cplx a;
    cplx coef;
    bool finite_part = false;  // Pow only: drop the pole of an individual tail term
};

constexpr int kOrder = 5;
using Series = std::array<double, kOrder + 1>;
using CSeries = std::array<cplx, kOrder + 1>;

Series mul(const Series& x, const Series& y) {
    Series r{};
    for (int i = 0; i <= kOrder; ++i)
        for (int j = 0; i + j <= kOrder; ++j) r[i + j] += x[i] * y[j];
    return r;
}

// n-th Taylor coefficient of b x^{-rho} (log x)^L at x0, L in {0, 1}.
double power_taylor(const BSTerm& t, double x0, int n) {
    double rho = t.rho.value();
    auto pw = [&](int j) {  // j-th Taylor coefficient of x^{-rho}
        double c = std::pow(x0, -rho - j);
        for (int i = 0; i < j; ++i) c *= (-rho - i) / (i + 1);
        return c;
    };
    if (t.log_power == 0) return t.b * pw(n);
    double c = pw(n) * std::log(x0);
    for (int j = 1; j <= n; ++j) c += pw(n - j) * ((j % 2 ? 1.0 : -1.0) / j) * std::pow(x0, -double(j));
    return t.b * c;
}

// delta(t) with F(x0 + delta(t)) = F(x0) + step t, by fixed-point iteration on the series.
Series reverse_counting(const CountingModel& F, double x0, int step) {
    std::array<double, kOrder + 1> f{};
    for (const auto& t : F.terms) {
        if (t.rho == Rational(0)) continue;
        for (int n = 1; n <= kOrder; ++n) f[n] += power_taylor(t, x0, n);
    }
    Series d{};
    d[1] = step / f[1];
    for (int it = 1; it < kOrder; ++it) {
        Series acc{}, pw = d;
        for (int n = 2; n <= kOrder; ++n) {
            pw = mul(pw, d);
            for (int i = 0; i <= kOrder; ++i) acc[i] += f[n] * pw[i];
        }
        Series nd{};
        nd[1] = step / f[1];
        for (int i = 2; i <= kOrder; ++i) nd[i] = -acc[i] / f[1];
        d = nd;
    }
    return d;
}

// n-th Taylor coefficient of a piece at x0.
cplx piece_taylor(const Piece& p, double x0, int n) {
    cplx y = x0 + p.a;
    if (p.kind == Piece::Log) {
        if (n == 0) return p.coef * std::log(y);
        return p.coef * ((n % 2 ? 1.0 : -1.0) / n) * std::pow(y, -double(n));
    }
    cplx c = p.coef * std::exp(-(p.s + double(n)) * std::log(y));
    for (int i = 0; i < n; ++i) c *= (-p.s - double(i)) / double(i + 1);
    return c;
}

cplx piece_value(const Piece& p, double x) {
    cplx y = x + p.a;
    if (p.kind == Piece::Log) return p.coef * std::log(y);
    return p.coef * std::exp(-p.s * std::log(y));
}

// -sum B_2k/(2k)! g^{(2k-1)}(J), with g(j) = sum pieces at x(j).
cplx derivative_corrections(const LevelSequence& seq, const std::vector<Piece>& pieces, double x0) {
    Series d = reverse_counting(seq.counting, x0, seq.step);
    std::array<Series, kOrder + 1> pw;
    pw[1] = d;
    for (int n = 2; n <= kOrder; ++n) pw[n] = mul(pw[n - 1], d);
    CSeries G{};
    for (const auto& p : pieces)
        for (int n = 1; n <= kOrder; ++n) {
            cplx gn = piece_taylor(p, x0, n);
            for (int i = 0; i <= kOrder; ++i) G[i] += gn * pw[n][i];
        }
    // g' B2/2!, g''' B4/4!, g^(5) B6/6! with g^(p) = p! G_p
    return -(G[1] / 12.0 - G[3] / 120.0 + G[5] / 252.0);
}

struct Pole {
    cplx residue = 0.0;
};

// int_X^inf x^{-beta-1} (log x)^n dx, continued in beta != 0.
cplx log_moment(cplx beta, int n, double logX) {
    cplx e = std::exp(-beta * logX);
    switch (n) {
        case 0: return e / beta;
        case 1: return e * (logX / beta + 1.0 / (beta * beta));
        default: return e * (logX * logX / beta + 2.0 * logX / (beta * beta) + 2.0 / (beta * beta * beta));
    }
}

// int_J^inf g dj = (1/step) int_X^inf g(x) F'(x) dx, continued term by term, where
// d/dx [x^{-rho} (log x)^L] = x^{-rho-1} (-rho (log x)^L + L (log x)^{L-1}).
cplx tail(const LevelSequence& seq, const Piece& p, double X, std::optional<Pole>& pole) {
    double w = 1.0 / seq.step;
    double logX = std::log(X);
    if (std::abs(p.a) > 0.5 * X)
        throw DomainError("spectral parameter too large for the available levels (|lambda| > E_K / 2)");
    cplx total = 0.0;
    for (const auto& t : seq.counting.terms) {
        if (t.rho == Rational(0) && t.log_power == 0) continue;
        double rho = t.rho.value();
        int L = t.log_power;
        double bw = t.b * w;
        // moment of x^{-beta-1} (log x)^n against the derivative of the counting term
        auto moment = [&](cplx beta, int n) {
            cplx v = -rho * log_moment(beta, n + L, logX);
            if (L) v += double(L) * log_moment(beta, n + L - 1, logX);
            return v;
        };
        if (std::abs(rho) < 1e-300 || (L && rho <= 0))
            throw UnsupportedError("log counting terms are supported for rho > 0 only");
        if (p.kind == Piece::Log) {
            total += p.coef * bw * moment(rho, 1);
            if (p.a == 0.0) continue;
            cplx am = 1.0;
            double H = 0.0;  // harmonic number H_{m-1}
            for (int m = 1; m < 400; ++m) {
                am *= p.a;
                cplx em = ((m % 2) ? 1.0 : -1.0) * am / double(m);
                cplx term;
                if (L == 0 && t.rho == Rational(-m))
                    term = em * (-rho * bw) * (H - logX);
                else
                    term = em * bw * moment(m + rho, 0);
                total += p.coef * term;
                H += 1.0 / m;
                if (m > 2 && std::abs(term) < 1e-18 * (1.0 + std::abs(total))) break;
            }
            continue;
        }
        cplx binom = 1.0, am = 1.0;
        for (int m = 0; m < 400; ++m) {
            if (m > 0) {
                binom *= (-p.s - double(m - 1)) / double(m);
                am *= p.a;
                if (p.a == 0.0) break;
            }
            cplx amp = p.coef * binom * am * bw;
            cplx beta = p.s + double(m) + rho;
            cplx term;
            if (std::abs(beta) < 1e-8) {
                if (amp == 0.0) continue;
                if (L == 0 && p.finite_part && m == 0) {
                    term = amp * (-rho) * (-logX);
                } else {
                    if (!pole) pole = Pole{};
                    pole->residue += amp * (-rho);
                    continue;
                }
            } else {
                term = amp * moment(beta, 0);
            }
            total += term;
            if (m > 2 && std::abs(term) < 1e-18 * (1.0 + std::abs(total))) break;
        }
    }
    return total;
}

cplx sector_sum(const LevelSequence& seq, const std::vector<Piece>& pieces, int J, bool corrections,
                std::optional<Pole>& pole) {
    cplx acc = 0.0;
    for (int j = 0; j < J; ++j)
        for (const auto& p : pieces) acc += piece_value(p, seq.values[j]);
    double X = seq.values[J];
    for (const auto& p : pieces) {
        acc += 0.5 * piece_value(p, X);
        acc += tail(seq, p, X, pole);
    }
    if (corrections) acc += derivative_corrections(seq, pieces, X);
    return acc;
}

struct Evaluation {
    cplx value;
    int K_used;
    double error;
};

Evaluation evaluate(const std::vector<LevelSequence>& seqs, const std::vector<Piece>& pieces, const ZetaOptions& o) {
    if (seqs.empty()) throw DomainError("no levels available");
    cplx v = 0.0, v0 = 0.0;
    int used = 0;
    std::optional<Pole> pole;
    for (const auto& seq : seqs) {
        int n = int(seq.values.size());
        if (n < 2) throw DomainError("at least two levels per sector are required");
        int J = std::min(n - 1, o.max_levels);
        int J0 = std::max(1, (3 * J) / 4);
        v += sector_sum(seq, pieces, J, o.derivative_corrections, pole);
        std::optional<Pole> dummy;
        v0 += sector_sum(seq, pieces, J0, o.derivative_corrections, dummy);
        used += J + 1;
    }
    if (pole) throw PoleError("zeta evaluated on its polar set", pole->residue);
    return {v, used, std::abs(v - v0)};
}

bool hits_level(const std::vector<LevelSequence>& seqs, cplx lambda) {
    for (const auto& s : seqs)
        for (double x : s.values)
            if (std::abs(x + lambda) <= 1e-14 * std::max(1.0, x)) return true;
    return false;
}

LevelSequence make_sequence(std::vector<double> values, const CountingModel& c, int step, int offset, Rational mu) {
    LevelSequence s;
    s.values = std::move(values);
    s.counting = c;
    s.step = step;
    s.offset = offset;
    s.mu = mu;
    return s;
}

// Counting terms of the dilated sequence, F_alpha(x) = F(x / alpha).
std::vector<BSTerm> scale_terms(const std::vector<BSTerm>& terms, double alpha) {
    std::vector<BSTerm> out;
    auto add = [&](BSTerm t) {
        for (auto& u : out)
            if (u.rho == t.rho && u.log_power == t.log_power) {
                u.b += t.b;
                return;
            }
        out.push_back(t);
    };
    for (auto t : terms) {
        t.b *= std::pow(alpha, t.rho.value());
        if (t.log_power == 1) add({t.rho, -t.b * std::log(alpha), 0});
        add(t);
    }
    std::sort(out.begin(), out.end(), [](const BSTerm& x, const BSTerm& y) {
        return x.rho < y.rho || (x.rho == y.rho && x.log_power < y.log_power);
    });
    return out;
}

nlohmann::json cjson(cplx z) {
    if (z.imag() == 0.0) return z.real();
    return nlohmann::json::array({z.real(), z.imag()});
}

}  // namespace

std::vector<LevelSequence> sectors(const Spectrum& spec, Parity parity) {
    std::vector<LevelSequence> out;
    for (Parity p : {Parity::Plus, Parity::Minus}) {
        if (parity != Parity::Whole && parity != p) continue;
        auto v = spec.values(p);
        if (v.empty()) throw DomainError("spectrum has no levels of parity " + to_string(p));
        out.push_back(make_sequence(std::move(v), spec.counting(p), 2, parity_offset(p), spec.mu));
    }
    return out;
}

std::vector<LevelSequence> sectors(const GeneralizedSpectrum& spec, Parity parity) {
    if (spec.family.kind == ZeroFamily::WholeLine) {
        if (parity != Parity::Whole) throw DomainError("whole-line zeros carry no parity");
        std::vector<double> v;
        for (const auto& z : spec.zeros) v.push_back(z.value);
        return {make_sequence(std::move(v), spec.counting_plus, 1, 0, spec.mu)};
    }
    std::vector<LevelSequence> out;
    for (Parity p : {Parity::Plus, Parity::Minus}) {
        if (parity != Parity::Whole && parity != p) continue;
        auto v = spec.values(p);
        if (v.empty()) throw DomainError("spectrum has no zeros of parity " + to_string(p));
        out.push_back(make_sequence(std::move(v), spec.counting(p), 2, parity_offset(p), spec.mu));
    }
    return out;
}

std::string to_string(DeterminantRoute r) {
    switch (r) {
        case DeterminantRoute::Spectral: return "spectral";
        case DeterminantRoute::Recessive: return "recessive";
        default: return "closed-form";
    }
}

ZetaEval zeta(const std::vector<LevelSequence>& seq, cplx s, cplx lambda, const ZetaOptions& o) {
    if (s.real() < 0) throw DomainError("zeta: continuation implemented for Re s >= 0");
    if (lambda != 0.0 && hits_level(seq, lambda)) throw PoleError("zeta: lambda = -E_k");
    auto e = evaluate(seq, {{Piece::Pow, s, lambda, 1.0}}, o);
    return {s, lambda, e.value, e.K_used, seq.front().counting.terms, e.error};
}

ZetaEval zeta(const Spectrum& spec, cplx s, cplx lambda, Parity parity, const ZetaOptions& o) {
    return zeta(sectors(spec, parity), s, lambda, o);
}

ZetaEval zeta(const GeneralizedSpectrum& spec, cplx s, cplx lambda, Parity parity, const ZetaOptions& o) {
    return zeta(sectors(spec, parity), s, lambda, o);
}

ZetaEval zeta_finite_part(const std::vector<LevelSequence>& seq, int n, const ZetaOptions& o) {
    if (n < 1) throw DomainError("zeta_finite_part: n >= 1");
    Piece p{Piece::Pow, double(n), 0.0, 1.0, true};
    auto e = evaluate(seq, {p}, o);
    return {double(n), 0.0, e.value, e.K_used, seq.front().counting.terms, e.error};
}

DeterminantValue log_determinant(const std::vector<LevelSequence>& seq, cplx lambda, const ZetaOptions& o) {
    auto e = evaluate(seq, {{Piece::Log, 0.0, lambda, 1.0}}, o);
    return {lambda, e.value, DeterminantRoute::Spectral, e.error, false};
}

DeterminantValue determinant_spectral(const std::vector<LevelSequence>& seq, cplx lambda, const ZetaOptions& o) {
    if (hits_level(seq, lambda)) return {lambda, 0.0, DeterminantRoute::Spectral, 0.0, true};
    auto l = log_determinant(seq, lambda, o);
    cplx v = std::exp(l.value);
    return {lambda, v, DeterminantRoute::Spectral, l.error_estimate * std::abs(v), false};
}

DeterminantValue determinant_spectral(const Spectrum& spec, cplx lambda, Parity parity, const ZetaOptions& o) {
    return determinant_spectral(sectors(spec, parity), lambda, o);
}

DeterminantValue determinant_spectral(const GeneralizedSpectrum& spec, cplx lambda, Parity parity,
                                      const ZetaOptions& o) {
    return determinant_spectral(sectors(spec, parity), lambda, o);
}

double zprime0(const std::vector<LevelSequence>& seq, const ZetaOptions& o) {
    return -log_determinant(seq, 0.0, o).value.real();
}

double zprime0(const Spectrum& spec, Parity parity, const ZetaOptions& o) { return zprime0(sectors(spec, parity), o); }

double zprime0(const GeneralizedSpectrum& spec, Parity parity, const ZetaOptions& o) {
    return zprime0(sectors(spec, parity), o);
}

cplx fredholm(const std::vector<LevelSequence>& seq, cplx lambda, const ZetaOptions& o) {
    Rational mu = seq.front().mu;
    if (mu >= Rational(2)) throw UnsupportedError("fredholm: growth order >= 2");
    if (lambda == 0.0) return 1.0;
    if (hits_level(seq, lambda)) return 0.0;
    std::vector<Piece> pieces = {{Piece::Log, 0.0, lambda, 1.0}, {Piece::Log, 0.0, 0.0, -1.0}};
    for (int n = 1; Rational(n) <= mu; ++n)
        pieces.push_back({Piece::Pow, double(n), 0.0, std::pow(-lambda, n) / double(n), true});
    return std::exp(evaluate(seq, pieces, o).value);
}

cplx fredholm(const Spectrum& spec, cplx lambda, Parity parity, const ZetaOptions& o) {
    return fredholm(sectors(spec, parity), lambda, o);
}

cplx zeta0_trace(const std::vector<LevelSequence>& seq, cplx lambda) {
    cplx z = 0.0;
    for (const auto& s : seq) {
        double w = 1.0 / s.step;
        z += 0.5 - w * (s.offset + 0.5);
        for (const auto& t : s.counting.terms) {
            if (t.rho == Rational(0)) z += w * t.b;
            if (t.rho < Rational(0) && t.rho.is_integer()) z += w * t.b * std::pow(-lambda, double(-t.rho.num));
        }
    }
    return z;
}

std::vector<LevelSequence> rescale(const std::vector<LevelSequence>& seq, double alpha) {
    if (!(alpha > 0)) throw DomainError("rescale: alpha must be > 0");
    auto out = seq;
    for (auto& s : out) {
        for (auto& x : s.values) x *= alpha;
        s.counting.terms = scale_terms(s.counting.terms, alpha);
    }
    return out;
}

Spectrum rescale(const Spectrum& spec, double alpha) {
    if (!(alpha > 0)) throw DomainError("rescale: alpha must be > 0");
    Spectrum out = spec;
    for (auto& l : out.levels) l.value *= alpha;
    out.b_coeffs = scale_terms(out.b_coeffs, alpha);
    out.counting_plus.terms = scale_terms(out.counting_plus.terms, alpha);
    out.counting_minus.terms = scale_terms(out.counting_minus.terms, alpha);
    out.dilation *= alpha;
    return out;
}

DeterminantValue rescale(const DeterminantValue& d, double alpha, cplx z0) {
    if (!(alpha > 0)) throw DomainError("rescale: alpha must be > 0");
    DeterminantValue out = d;
    out.lambda = d.lambda * alpha;
    cplx f = std::exp(z0 * std::log(alpha));
    out.value = f * d.value;
    out.error_estimate = std::abs(f) * d.error_estimate;
    return out;
}

ZetaEval rescale(const ZetaEval& z, double alpha) {
    if (!(alpha > 0)) throw DomainError("rescale: alpha must be > 0");
    ZetaEval out = z;
    out.lambda = z.lambda * alpha;
    cplx f = std::exp(-z.s * std::log(alpha));
    out.value = f * z.value;
    out.error_estimate = std::abs(f) * z.error_estimate;
    out.tail_model = scale_terms(z.tail_model, alpha);
    return out;
}

ZetaAtOne closed_zp1(int N) {
    if (N < 1) throw DomainError("closed_zp1: N >= 1");
    double nu = 1.0 / (N + 2);
    double skew = std::sin(nu * kPi) / (2 * std::sqrt(kPi)) * std::pow(2 * nu, 2 - 4 * nu) * std::tgamma(nu) *
                  std::tgamma(2 * nu) * std::tgamma(3 * nu) / std::tgamma(2 * nu + 0.5);
    if (N == 2) return {skew, (std::numbers::egamma + std::numbers::ln2) / 2, true};
    return {skew, std::tan(2 * nu * kPi) / std::tan(nu * kPi) * skew, false};
}

std::string to_json(const ZetaEval& z) {
    nlohmann::json j;
    j["s"] = cjson(z.s);
    j["lambda"] = cjson(z.lambda);
    j["value"] = cjson(z.value);
    j["K_used"] = z.K_used;
    j["err"] = z.error_estimate;
    return j.dump();
}

std::string to_json(const DeterminantValue& d) {
    nlohmann::json j;
    j["lambda"] = cjson(d.lambda);
    j["value"] = cjson(d.value);
    j["route"] = to_string(d.route);
    j["err"] = d.error_estimate;
    j["exact_zero"] = d.exact_zero;
    return j.dump();
}

}  // namespace specdet
