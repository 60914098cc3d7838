#include "specdet/potential.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <json.hpp>
#include <sstream>

namespace specdet {

namespace {

void snap(cplx& z) {
    double a = std::abs(z);
    if (std::abs(z.real()) < 1e-14 * a) z.real(0.0);
    if (std::abs(z.imag()) < 1e-14 * a) z.imag(0.0);
}

// Forward-mode derivative in s.
struct Dual {
    cplx v, d;
    Dual(cplx v = 0.0, cplx d = 0.0) : v(v), d(d) {}
    friend Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
    friend Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
    friend Dual operator*(cplx a, Dual b) { return {a * b.v, a * b.d}; }
};

// Coefficients g_n of (1 + sum_{j>=1} f_j y^j)^alpha, n = 0..order.
std::vector<Dual> series_power(const std::vector<cplx>& f, Dual alpha, int order) {
    std::vector<Dual> g(order + 1);
    g[0] = Dual(1.0, 0.0);
    Dual ap1 = alpha + Dual(1.0, 0.0);
    for (int n = 1; n <= order; ++n) {
        Dual acc;
        for (int k = 1; k <= n && k < int(f.size()); ++k) {
            if (f[k] == cplx(0.0)) continue;
            Dual fac = ap1 * Dual(double(k), 0.0) + Dual(-double(n), 0.0);
            acc = acc + f[k] * (fac * g[n - k]);
        }
        g[n] = (1.0 / double(n)) * acc;
    }
    return g;
}

// Coefficients of P(q)^k for k = 0..kmax as dense vectors indexed by power.
std::vector<std::vector<cplx>> polynomial_powers(const std::vector<cplx>& P, int kmax) {
    std::vector<std::vector<cplx>> out;
    out.push_back({1.0});
    for (int k = 1; k <= kmax; ++k) {
        const auto& prev = out.back();
        std::vector<cplx> next(prev.size() + P.size() - 1, 0.0);
        for (std::size_t i = 0; i < prev.size(); ++i) {
            if (prev[i] == cplx(0.0)) continue;
            for (std::size_t j = 0; j < P.size(); ++j) next[i + j] += prev[i] * P[j];
        }
        out.push_back(std::move(next));
    }
    return out;
}

// Accumulates gamma-moment terms sum_k (-1)^k/k! t^{k + shift} int_0^inf q^n W^k e^{-t q^N} dq
// into `acc`, for each weight polynomial coefficient p_n.
void accumulate_moments(std::map<Rational, cplx>& acc, int N, const std::vector<cplx>& weight,
                        const std::vector<cplx>& W, Rational shift, cplx scale, Rational rho_max) {
    // Lowest rho at order k is k - (deg W k + deg weight + 1)/N + shift; W has degree <= N-1.
    int degW = int(W.size()) - 1;
    int kmax = 0;
    while (true) {
        Rational lo = Rational(kmax + 1) + shift - Rational((degW) * (kmax + 1) + int(weight.size()), N);
        if (lo > rho_max) break;
        ++kmax;
        if (kmax > 400) break;
    }
    auto powers = polynomial_powers(W, kmax);
    double fact = 1.0;
    for (int k = 0; k <= kmax; ++k) {
        if (k > 0) fact *= k;
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const auto& wk = powers[k];
        for (std::size_t m = 0; m < wk.size(); ++m) {
            if (wk[m] == cplx(0.0)) continue;
            for (std::size_t n = 0; n < weight.size(); ++n) {
                if (weight[n] == cplx(0.0)) continue;
                int deg = int(m + n);
                Rational rho = Rational(k) + shift - Rational(deg + 1, N);
                if (rho > rho_max) continue;
                double a = double(deg + 1) / N;
                double g = std::exp(log_gamma(a).real());
                acc[rho] += scale * sign / fact * wk[m] * weight[n] * g / (N * std::sqrt(kPi));
            }
        }
    }
}

}  // namespace

// ---------------------------------------------------------------- PolynomialPotential

PolynomialPotential::PolynomialPotential(int degree) : degree_(degree) {
    if (degree < 1) throw DomainError("potential degree must be >= 1");
    coeffs_.assign(degree + 1, 0.0);
    coeffs_[degree] = 1.0;
}

PolynomialPotential::PolynomialPotential(int degree, std::vector<cplx> coeffs)
    : PolynomialPotential(degree) {
    if (int(coeffs.size()) > degree + 1) throw DomainError("too many coefficients for degree");
    for (std::size_t m = 1; m < coeffs.size() && int(m) < degree; ++m) coeffs_[m] = coeffs[m];
    if (!coeffs.empty() && coeffs[0] != cplx(0.0)) throw DomainError("V(0) must vanish");
    if (int(coeffs.size()) == degree + 1 && coeffs[degree] != cplx(1.0))
        throw DomainError("leading coefficient must be 1");
}

PolynomialPotential PolynomialPotential::binomial(int degree, int m, cplx a) {
    PolynomialPotential p(degree);
    if (m < 1 || m >= degree) throw DomainError("binomial: need 1 <= m < N");
    p.coeffs_[m] = a;
    return p;
}

bool PolynomialPotential::is_real() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c.imag() == 0.0; });
}

bool PolynomialPotential::symmetric() const {
    if (degree_ % 2 != 0) return false;
    for (int m = 1; m < degree_; m += 2)
        if (coeffs_[m] != cplx(0.0)) return false;
    return true;
}

bool PolynomialPotential::homogeneous() const {
    for (int m = 1; m < degree_; ++m)
        if (coeffs_[m] != cplx(0.0)) return false;
    return true;
}

cplx PolynomialPotential::operator()(cplx q) const {
    cplx v = 0.0;
    for (int m = degree_; m >= 0; --m) v = v * q + coeffs_[m];
    return v;
}

double PolynomialPotential::operator()(double q) const { return (*this)(cplx(q)).real(); }

cplx PolynomialPotential::derivative(cplx q) const {
    cplx v = 0.0;
    for (int m = degree_; m >= 1; --m) v = v * q + double(m) * coeffs_[m];
    return v;
}

std::string PolynomialPotential::str() const {
    std::ostringstream os;
    os << "q^" << degree_;
    for (int m = degree_ - 1; m >= 1; --m) {
        cplx a = coeffs_[m];
        if (a == cplx(0.0)) continue;
        if (a.imag() == 0.0)
            os << (a.real() < 0 ? " - " : " + ") << std::abs(a.real());
        else
            os << " + (" << a.real() << (a.imag() < 0 ? "" : "+") << a.imag() << "i)";
        os << "*q";
        if (m > 1) os << "^" << m;
    }
    return os.str();
}

std::string PolynomialPotential::to_json() const {
    nlohmann::json j;
    j["degree"] = degree_;
    nlohmann::json c = nlohmann::json::object();
    for (int m = 1; m < degree_; ++m) {
        if (coeffs_[m] == cplx(0.0)) continue;
        if (coeffs_[m].imag() == 0.0)
            c[std::to_string(m)] = coeffs_[m].real();
        else
            c[std::to_string(m)] = {coeffs_[m].real(), coeffs_[m].imag()};
    }
    j["coeffs"] = c;
    j["symmetric"] = symmetric();
    return j.dump();
}

PolynomialPotential PolynomialPotential::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("potential json: ") + e.what());
    }
    if (!j.contains("degree") || !j["degree"].is_number_integer())
        throw ParseError("potential json: integer 'degree' required");
    int N = j["degree"].get<int>();
    if (N < 1) throw ParseError("potential json: degree must be >= 1");
    PolynomialPotential p(N);
    if (j.contains("coeffs")) {
        for (auto& [key, val] : j["coeffs"].items()) {
            int m = 0;
            try {
                m = std::stoi(key);
            } catch (...) {
                throw ParseError("potential json: bad power '" + key + "'");
            }
            if (m < 1 || m >= N) throw ParseError("potential json: power out of range: " + key);
            if (val.is_number())
                p.coeffs_[m] = val.get<double>();
            else if (val.is_array() && val.size() == 2)
                p.coeffs_[m] = cplx(val[0].get<double>(), val[1].get<double>());
            else
                throw ParseError("potential json: bad coefficient for power " + key);
        }
    }
    if (j.contains("symmetric") && j["symmetric"].is_boolean() && j["symmetric"].get<bool>() != p.symmetric())
        throw ParseError("potential json: 'symmetric' flag contradicts the coefficients");
    return p;
}

PolynomialPotential PolynomialPotential::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty potential");
    if (s.front() == '{') return from_json(text);

    std::map<int, double> terms;
    std::size_t i = 0;
    while (i < s.size()) {
        double sign = 1.0;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1.0 : 1.0;
            ++i;
        } else if (i != 0) {
            throw ParseError("expected '+' or '-' at position " + std::to_string(i));
        }
        double coef = 1.0;
        std::size_t start = i;
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.' || s[i] == 'e' ||
                                s[i] == 'E' ||
                                ((s[i] == '-' || s[i] == '+') && i > start && (s[i - 1] == 'e' || s[i - 1] == 'E'))))
            ++i;
        if (i > start) {
            try {
                coef = std::stod(s.substr(start, i - start));
            } catch (...) {
                throw ParseError("bad number '" + s.substr(start, i - start) + "'");
            }
            if (i < s.size() && s[i] == '*') ++i;
        }
        int power = 0;
        if (i < s.size() && s[i] == 'q') {
            ++i;
            power = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t ps = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (i == ps) throw ParseError("missing exponent after '^'");
                power = std::stoi(s.substr(ps, i - ps));
            }
        } else if (i == start) {
            throw ParseError("unexpected character '" + std::string(1, s[i]) + "'");
        }
        terms[power] += sign * coef;
    }
    if (terms.empty()) throw ParseError("empty potential");
    int N = terms.rbegin()->first;
    if (N < 1) throw ParseError("potential degree must be >= 1");
    if (terms[N] != 1.0) throw ParseError("leading coefficient must be 1 (rescale instead)");
    if (terms.count(0) && terms[0] != 0.0) throw ParseError("constant term not allowed: V(0) = 0");
    PolynomialPotential p(N);
    for (auto [m, a] : terms)
        if (m >= 1 && m < N) p.coeffs_[m] = a;
    return p;
}

// ---------------------------------------------------------------- conjugates

double rotation_angle(int degree) { return 4.0 * kPi / (degree + 2); }

int conjugate_count(const PolynomialPotential& p) {
    return p.symmetric() ? p.degree() / 2 + 1 : p.degree() + 2;
}

Conjugate conjugate(const PolynomialPotential& p, int ell) {
    int L = conjugate_count(p);
    if (ell < 0 || ell >= L) throw DomainError("conjugate index out of range");
    int N = p.degree();
    std::vector<cplx> c(N + 1, 0.0);
    for (int m = 1; m < N; ++m) {
        if (p.coeff(m) == cplx(0.0)) continue;
        // Reduce the phase exactly on the lattice 2 pi / (N + 2).
        long turns = (long(ell) * (m + 2)) % (N + 2);
        c[m] = p.coeff(m) * std::polar(1.0, -2.0 * kPi * double(turns) / (N + 2));
        snap(c[m]);
    }
    c[N] = 1.0;
    long lt = long(ell) * 2 % (N + 2);
    cplx rot = std::polar(1.0, -2.0 * kPi * double(lt) / (N + 2));
    snap(rot);
    return {PolynomialPotential(N, c), rot};
}

// ---------------------------------------------------------------- beta expansion

cplx BetaExpansion::evaluate(double q) const {
    cplx sum = 0.0;
    for (const auto& t : terms) sum += t.value * std::pow(q, t.sigma.value());
    int N = terms.empty() ? 0 : int(2 * terms.front().sigma.value() + 0.5);
    return sum * std::pow(q, -N * s);
}

BetaExpansion beta_expansion(const PolynomialPotential& p, cplx lambda, double s, int order) {
    int N = p.degree();
    if (order < N + 2) throw DomainError("beta_expansion: order must reach sigma = -1");
    // V + lambda = q^N (1 + sum_j f_j q^{-j}), f_j = a_{N-j}, f_N = lambda.
    std::vector<cplx> f(N + 1, 0.0);
    for (int j = 1; j < N; ++j) f[j] = p.coeff(N - j);
    f[N] = lambda;
    Dual alpha(0.5 - s, -1.0);
    auto g = series_power(f, alpha, order);
    BetaExpansion out;
    out.lambda = lambda;
    out.s = s;
    for (int n = 0; n <= order; ++n) {
        Rational sigma = Rational(N, 2) - Rational(n);
        out.terms.push_back({sigma, g[n].v, g[n].d});
        if (sigma == Rational(-1)) {
            out.beta_m1 = g[n].v;
            out.beta_m1_ds = g[n].d;
        }
    }
    return out;
}

cplx ActionNormalization::S(cplx q) const {
    cplx sum = 0.0;
    for (const auto& t : S_terms) sum += t.coeff * std::pow(q, t.power.value());
    return sum;
}

ActionNormalization action_normalization(const PolynomialPotential& p, cplx lambda) {
    int N = p.degree();
    BetaExpansion b = beta_expansion(p, lambda, 0.0, N + 2);
    ActionNormalization out;
    for (const auto& t : b.terms) {
        if (t.sigma <= Rational(-1)) continue;
        if (t.value == cplx(0.0)) continue;
        Rational pw = t.sigma + Rational(1);
        out.S_terms.push_back({pw, t.value / pw.value()});
    }
    out.beta_m1_at_0 = b.beta_m1;
    // d/ds [beta(s) / (1 - 2s)] at 0 = beta'(0) + 2 beta(0)
    out.C = (-2.0 * std::log(2.0) * b.beta_m1 + b.beta_m1_ds + 2.0 * b.beta_m1) / double(N);
    return out;
}

// ---------------------------------------------------------------- heat coefficients

std::vector<HeatTerm> heat_coefficients(const PolynomialPotential& p, Rational rho_max, cplx lambda) {
    int N = p.degree();
    std::vector<cplx> W(N, 0.0);  // V - q^N + lambda
    W[0] = lambda;
    for (int m = 1; m < N; ++m) W[m] = p.coeff(m);
    while (W.size() > 1 && W.back() == cplx(0.0)) W.pop_back();
    std::map<Rational, cplx> acc;
    accumulate_moments(acc, N, {1.0}, W, Rational(-1, 2), 1.0, rho_max);
    std::vector<HeatTerm> out;
    for (auto [rho, c] : acc)
        if (std::abs(c) > 0.0) out.push_back({rho, c});
    return out;
}

std::vector<HeatTerm> quantum_heat_corrections(const PolynomialPotential& p, Rational rho_max) {
    if (!p.symmetric()) throw UnsupportedError("quantum heat corrections need a symmetric potential");
    int N = p.degree();
    std::vector<cplx> W(N, 0.0);
    for (int m = 1; m < N; ++m) W[m] = p.coeff(m);
    while (W.size() > 1 && W.back() == cplx(0.0)) W.pop_back();
    std::vector<cplx> dV(N, 0.0);
    for (int m = 1; m <= N; ++m) dV[m - 1] = double(m) * p.coeff(m);
    std::vector<cplx> dV2(2 * N - 1, 0.0);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) dV2[i + j] += dV[i] * dV[j];
    std::map<Rational, cplx> acc;
    accumulate_moments(acc, N, dV2, W, Rational(5, 2), -1.0 / 12.0, rho_max);
    std::vector<HeatTerm> out;
    for (auto [rho, c] : acc)
        if (std::abs(c) > 0.0) out.push_back({rho, c});
    return out;
}

std::vector<BSTerm> bs_coefficients(const std::vector<HeatTerm>& heat) {
    std::map<Rational, double> acc;
    for (const auto& h : heat) {
        double c = h.c.real();
        if (h.rho == Rational(0)) {
            acc[h.rho] += c;
            continue;
        }
        double r = rgamma(1.0 - h.rho.value());
        if (r == 0.0) continue;
        acc[h.rho] += c * r;
    }
    std::vector<BSTerm> out;
    for (auto [rho, b] : acc)
        if (b != 0.0) out.push_back({rho, b});
    return out;
}

}  // namespace specdet
