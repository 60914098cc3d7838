#include "specdet/spectrum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <json.hpp>
#include <mutex>
#include <sstream>
#include <thread>

#include "specdet/recessive.hpp"

namespace specdet {

namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex m;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(m);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

// Pruefer angle at q = 0 targets: Neumann zeros at pi/2 - j pi, Dirichlet zeros at -j pi.
double angle_target(Parity p, int j) { return (p == Parity::Plus ? kPi / 2 : 0.0) - j * kPi; }

// Root of the decreasing function theta(x) - target by bracket expansion and Illinois iteration.
double solve_angle(const std::function<double(double)>& theta, double target, double seed, double spacing,
                   double tol) {
    auto h = [&](double x) { return theta(x) - target; };
    double a = seed - 0.5 * spacing, b = seed + 0.5 * spacing;
    double ha = h(a), hb = h(b);
    // the semiclassical seed is poor below the bottom of a double well; expand by at least O(1)
    double step = std::max(spacing, 0.5);
    for (int i = 0; ha < 0; ++i) {
        if (i > 60) throw BracketError("level bracket: lower end not found", a, b);
        b = a;
        hb = ha;
        a -= step;
        step *= 2;
        ha = h(a);
    }
    step = std::max(spacing, 0.5);
    for (int i = 0; hb > 0; ++i) {
        if (i > 60) throw BracketError("level bracket: upper end not found", a, b);
        a = b;
        ha = hb;
        b += step;
        step *= 2;
        hb = h(b);
    }
    int side = 0;
    double x = a, prev = b;
    for (int it = 0; it < 200; ++it) {
        x = (a * hb - b * ha) / (hb - ha);
        if (!(x > a && x < b)) x = 0.5 * (a + b);
        double hx = h(x);
        if (hx == 0.0) return x;
        if (hx > 0) {
            a = x;
            ha = hx;
            if (side == 1) hb *= 0.5;
            side = 1;
        } else {
            b = x;
            hb = hx;
            if (side == -1) ha *= 0.5;
            side = -1;
        }
        if (b - a < tol || std::abs(x - prev) < 0.05 * tol) return x;
        prev = x;
    }
    throw BracketError("level refinement did not converge", a, b);
}

double solve_sign(const std::function<double(double)>& g, double a, double b, double tol) {
    double ga = g(a), gb = g(b);
    if (ga * gb > 0) throw BracketError("no sign change", a, b);
    int side = 0;
    double x = a, prev = b;
    for (int it = 0; it < 200; ++it) {
        x = (a * gb - b * ga) / (gb - ga);
        if (!(x > a && x < b)) x = 0.5 * (a + b);
        double gx = g(x);
        if (gx == 0.0) return x;
        if ((gx > 0) == (ga > 0)) {
            a = x;
            ga = gx;
            if (side == 1) gb *= 0.5;
            side = 1;
        } else {
            b = x;
            gb = gx;
            if (side == -1) ga *= 0.5;
            side = -1;
        }
        if (b - a < tol || std::abs(x - prev) < 0.05 * tol) return x;
        prev = x;
    }
    throw BracketError("sign-change refinement did not converge", a, b);
}

// Least-squares fit of residual counting terms on the upper half of a level list.
// `basis` supplies (rho, log_power); its b values are ignored.
std::vector<BSTerm> fit_terms(const std::vector<double>& xs, int offset, const CountingModel& base,
                              const std::vector<BSTerm>& basis) {
    int n = int(xs.size());
    if (n < 8) return {};
    int start = n / 2;
    int rows = n - start;
    Eigen::MatrixXd A(rows, int(basis.size()));
    Eigen::VectorXd r(rows);
    for (int i = 0; i < rows; ++i) {
        int j = start + i;
        double x = xs[j];
        r(i) = (2 * j + offset + 0.5) - base(x);
        for (std::size_t c = 0; c < basis.size(); ++c)
            A(i, int(c)) = std::pow(x, -basis[c].rho.value()) * std::pow(std::log(x), basis[c].log_power);
    }
    Eigen::VectorXd b = A.colPivHouseholderQr().solve(r);
    std::vector<BSTerm> out;
    for (std::size_t c = 0; c < basis.size(); ++c) out.push_back({basis[c].rho, b(int(c)), basis[c].log_power});
    return out;
}

CountingModel merge(const std::vector<BSTerm>& a, const std::vector<BSTerm>& b) {
    CountingModel m;
    m.terms = a;
    for (const auto& t : b) {
        auto it = std::find_if(m.terms.begin(), m.terms.end(), [&](const BSTerm& u) { return u.rho == t.rho && u.log_power == t.log_power; });
        if (it != m.terms.end())
            it->b += t.b;
        else
            m.terms.push_back(t);
    }
    std::sort(m.terms.begin(), m.terms.end(), [](const BSTerm& x, const BSTerm& y) {
        return x.rho < y.rho || (x.rho == y.rho && x.log_power < y.log_power);
    });
    return m;
}

nlohmann::json counting_json(const CountingModel& m) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& t : m.terms) {
        nlohmann::json e = {{"rho", t.rho.str()}, {"b", t.b}};
        if (t.log_power) e["log_power"] = t.log_power;
        a.push_back(e);
    }
    return a;
}

std::string levels_csv(const std::vector<Level>& ls, const char* header) {
    std::ostringstream os;
    os.precision(17);
    os << header << "\n";
    for (const auto& l : ls) os << l.k << "," << to_string(l.parity) << "," << l.value << "\n";
    return os.str();
}

nlohmann::json levels_json(const std::vector<Level>& ls, const char* key) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& l : ls) a.push_back({{"k", l.k}, {"parity", to_string(l.parity)}, {key, l.value}});
    return a;
}

std::vector<double> select(const std::vector<Level>& ls, Parity p) {
    std::vector<double> out;
    for (const auto& l : ls)
        if (p == Parity::Whole || l.parity == p) out.push_back(l.value);
    return out;
}

// Levels of one parity for a Pruefer-angle problem.
std::vector<double> angle_levels(const std::function<RecessiveResult(double)>& solve, Parity parity, int K,
                                 const std::function<double(int)>& seed, const std::function<double(int)>& spacing,
                                 const SpectrumOptions& opts) {
    std::vector<double> xs(K);
    auto theta = [&](double x) { return solve(x).prufer_angle; };
    parallel_for(K, opts.threads, [&](int j) {
        int k = 2 * j + parity_offset(parity);
        xs[j] = solve_angle(theta, angle_target(parity, j), seed(k), spacing(k), opts.tol);
    });
    for (int j = 1; j < K; ++j)
        if (!(xs[j] > xs[j - 1])) throw BracketError("levels not strictly increasing", xs[j - 1], xs[j]);
    if (opts.verify_counts) {
        parallel_for(K, opts.threads, [&](int j) {
            double mid = j + 1 < K ? 0.5 * (xs[j] + xs[j + 1]) : xs[j] + 0.5 * spacing(2 * j + parity_offset(parity));
            auto r = solve(mid);
            int n = parity == Parity::Plus ? r.neumann_count : r.dirichlet_count;
            if (n != j + 1) throw BracketError("node count mismatch after level " + std::to_string(j), xs[j], mid);
        });
    }
    return xs;
}

std::vector<Level> merge_levels(const std::vector<double>& plus, const std::vector<double>& minus) {
    std::vector<Level> out;
    for (std::size_t j = 0; j < plus.size(); ++j) out.push_back({int(2 * j), plus[j], Parity::Plus});
    for (std::size_t j = 0; j < minus.size(); ++j) out.push_back({int(2 * j + 1), minus[j], Parity::Minus});
    std::sort(out.begin(), out.end(), [](const Level& a, const Level& b) { return a.k < b.k; });
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i].value > out[i - 1].value))
            throw BracketError("parity interlacing violated", out[i - 1].value, out[i].value);
    return out;
}

}  // namespace

std::string to_string(Parity p) {
    switch (p) {
        case Parity::Plus: return "+";
        case Parity::Minus: return "-";
        default: return "whole";
    }
}

Parity parse_parity(const std::string& s) {
    if (s == "+" || s == "plus" || s == "even") return Parity::Plus;
    if (s == "-" || s == "minus" || s == "odd") return Parity::Minus;
    if (s == "whole" || s == "both" || s == "all") return Parity::Whole;
    throw ParseError("unknown parity '" + s + "'");
}

// ---------------------------------------------------------------- counting

double CountingModel::operator()(double x) const {
    double f = 0.0;
    for (const auto& t : terms) f += t.b * std::pow(x, -t.rho.value()) * std::pow(std::log(x), t.log_power);
    return f;
}

double CountingModel::derivative(double x) const {
    double f = 0.0;
    for (const auto& t : terms) {
        double L = std::log(x), r = t.rho.value();
        f += t.b * std::pow(x, -r - 1) * (-r * std::pow(L, t.log_power) + t.log_power * std::pow(L, t.log_power - 1));
    }
    return f;
}

double CountingModel::invert(double target) const {
    CountingModel lead;
    for (const auto& t : terms)
        if (t.rho <= Rational(0) && t.log_power == 0) lead.terms.push_back(t);
    double lo = 0.0, hi = 1e-3;
    while (lead(hi) < target) {
        lo = hi;
        hi *= 2;
        if (hi > 1e300) throw BracketError("counting function does not reach target", lo, hi);
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        (lead(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<BSTerm> semiclassical_counting(const PolynomialPotential& p) {
    Rational rho_max(8);
    auto heat = heat_coefficients(p, rho_max);
    if (p.symmetric()) {
        auto q = quantum_heat_corrections(p, rho_max);
        heat.insert(heat.end(), q.begin(), q.end());
    }
    return bs_coefficients(heat);
}

double bs_seed(const PolynomialPotential& p, int k) {
    CountingModel m{semiclassical_counting(p)};
    return m.invert(k + 0.5);
}

// ---------------------------------------------------------------- Spectrum

std::vector<double> Spectrum::values(Parity p) const { return select(levels, p); }

const CountingModel& Spectrum::counting(Parity p) const {
    if (p == Parity::Whole) throw DomainError("counting model is per parity");
    return p == Parity::Plus ? counting_plus : counting_minus;
}

std::string Spectrum::to_csv() const { return levels_csv(levels, "k,parity,E_k"); }

std::string Spectrum::to_json() const {
    nlohmann::json j;
    j["potential"] = nlohmann::json::parse(potential.to_json());
    j["tol"] = tol;
    if (dilation != 1.0) j["dilation"] = dilation;
    j["mu"] = mu.str();
    CountingModel common{b_coeffs};
    j["b_coeffs"] = counting_json(common);
    j["counting_plus"] = counting_json(counting_plus);
    j["counting_minus"] = counting_json(counting_minus);
    j["levels"] = levels_json(levels, "E");
    return j.dump(2);
}

Spectrum eigenvalues(const PolynomialPotential& p, Parity parity, int K, const SpectrumOptions& opts) {
    if (K < 1) throw DomainError("eigenvalues: K must be >= 1");
    if (!p.is_real()) throw DomainError("eigenvalues: potential must be real");
    Spectrum out;
    out.potential = p;
    out.mu = growth_order(p.degree());
    out.tol = opts.tol;
    out.b_coeffs = semiclassical_counting(p);
    CountingModel common{out.b_coeffs};

    RecessiveOptions ro;
    ro.tol = opts.ode_tol;
    ro.estimate_error = false;
    ro.count_nodes = true;
    auto solve = [&](double E) { return solve_recessive(p, cplx(-E, 0.0), ro); };
    auto seed = [&](int k) { return common.invert(k + 0.5); };
    auto spacing = [&](int k) {
        double s = seed(k);
        double d = 2.0 / common.derivative(s);
        return (std::isfinite(d) && d > 0) ? d : std::max(1.0, 0.5 * std::abs(s));
    };

    int Kp = 0, Km = 0;
    if (parity == Parity::Plus) Kp = K;
    if (parity == Parity::Minus) Km = K;
    if (parity == Parity::Whole) Kp = (K + 1) / 2, Km = K / 2;
    std::vector<double> plus, minus;
    if (Kp) plus = angle_levels(solve, Parity::Plus, Kp, seed, spacing, opts);
    if (Km) minus = angle_levels(solve, Parity::Minus, Km, seed, spacing, opts);
    out.levels = merge_levels(plus, minus);

    out.counting_plus = common;
    out.counting_minus = common;
    if (!p.symmetric()) {
        // Parity-dependent corrections: fitted on the computed levels.
        std::vector<Rational> rhos = {Rational(3, 2), out.mu, out.mu + Rational(1, p.degree())};
        std::sort(rhos.begin(), rhos.end(), [](Rational a, Rational b) { return a < b; });
        rhos.erase(std::unique(rhos.begin(), rhos.end()), rhos.end());
        std::vector<BSTerm> basis;
        for (Rational r : rhos) basis.push_back({r, 0.0});
        if (!plus.empty()) out.counting_plus = merge(common.terms, fit_terms(plus, 0, common, basis));
        if (!minus.empty()) out.counting_minus = merge(common.terms, fit_terms(minus, 1, common, basis));
    }
    return out;
}

// ---------------------------------------------------------------- generalized spectra

ZeroFamily ZeroFamily::binomial(int N) {
    if (N < 2 || N % 2) throw DomainError("binomial family needs even N >= 2");
    return {Binomial, N};
}

ZeroFamily ZeroFamily::whole_line(int N) {
    if (N < 2 || N % 2) throw DomainError("whole-line family needs even N >= 2");
    return {WholeLine, N};
}

std::string ZeroFamily::str() const {
    switch (kind) {
        case Qi: return "qi";
        case Binomial: return "binomial:" + std::to_string(degree);
        default: return "whole-line:" + std::to_string(degree);
    }
}

PolynomialPotential ZeroFamily::potential(double v) const {
    if (kind == Qi) return PolynomialPotential::binomial(4, 2, v);
    if (degree == 2) return PolynomialPotential::monomial(2);
    return PolynomialPotential::binomial(degree, degree / 2 - 1, v);
}

double ZeroFamily::lambda(double v) const { return (kind != Qi && degree == 2) ? v : 0.0; }

double bs_seed(const ZeroFamily& f, int k) {
    if (k < 0) throw DomainError("bs_seed: k must be >= 0");
    int N = f.degree;
    switch (f.kind) {
        case ZeroFamily::Qi: return std::pow(1.5 * kPi * (k + (k % 2 ? 0.25 : 0.75)), 2.0 / 3.0);
        case ZeroFamily::Binomial:
            return k % 2 == 0 ? N / 2.0 + (N + 2) * (k / 2) : N / 2.0 + 2 + (N + 2) * ((k - 1) / 2);
        default: return (N + 2) * (k + 0.5);
    }
}

std::vector<double> GeneralizedSpectrum::values(Parity p) const { return select(zeros, p); }

const CountingModel& GeneralizedSpectrum::counting(Parity p) const {
    return p == Parity::Minus ? counting_minus : counting_plus;
}

std::string GeneralizedSpectrum::to_csv() const { return levels_csv(zeros, "k,parity,w_k"); }

std::string GeneralizedSpectrum::to_json() const {
    nlohmann::json j;
    j["family"] = family.str();
    j["mu"] = mu.str();
    j["note"] = note;
    j["counting_plus"] = counting_json(counting_plus);
    j["counting_minus"] = counting_json(counting_minus);
    j["zeros"] = levels_json(zeros, "w");
    return j.dump(2);
}

GeneralizedSpectrum generalized_zeros(const ZeroFamily& f, Parity parity, int K, const SpectrumOptions& opts) {
    if (K < 1) throw DomainError("generalized_zeros: K must be >= 1");
    GeneralizedSpectrum out;
    out.family = f;
    int N = f.degree;
    RecessiveOptions ro;
    ro.tol = opts.ode_tol;
    ro.estimate_error = false;

    if (f.kind == ZeroFamily::WholeLine) {
        if (parity != Parity::Whole) throw DomainError("whole-line family has no parity split");
        out.mu = Rational(1);
        out.counting_plus.terms = {{Rational(-1), 1.0 / (N + 2)}};
        out.counting_minus = out.counting_plus;
        out.note = "zeros in v > 0 of (D+(v) D-(-v) + D+(-v) D-(v)) / 2";
        auto D = [&](double v) {
            ScaledPair a = solve_recessive(f.potential(v), f.lambda(v), ro).scaled;
            ScaledPair b = solve_recessive(f.potential(-v), f.lambda(-v), ro).scaled;
            // D+(v) D-(-v) = -a.dpsi b.psi, D+(-v) D-(v) = -b.dpsi a.psi
            cplx val = -0.5 * (a.dpsi * b.psi + b.dpsi * a.psi) * std::exp(a.log_scale + b.log_scale);
            return val.real();
        };
        double h = (N + 2) / 4.0;
        // Scan v = 0, h, 2h, ... for sign changes, then refine each.
        std::vector<std::pair<double, double>> cells;
        double v = 0.0, gv = D(0.0);
        while (int(cells.size()) < K) {
            double w = v + h, gw = D(w);
            if ((gv > 0) != (gw > 0)) cells.push_back({v, w});
            v = w;
            gv = gw;
            if (v > (N + 2) * (K + 8.0)) throw BracketError("scan found too few sign changes", 0.0, v);
        }
        std::vector<double> xs(K);
        parallel_for(K, opts.threads, [&](int n) { xs[n] = solve_sign(D, cells[n].first, cells[n].second, opts.tol); });
        for (int n = 0; n < K; ++n) out.zeros.push_back({n, xs[n], Parity::Whole});
        return out;
    }

    auto solve_w = [&](double w) {
        RecessiveOptions r = ro;
        r.count_nodes = true;
        return solve_recessive(f.potential(-w), f.lambda(-w), r);
    };
    auto seed = [&](int k) { return bs_seed(f, k); };
    std::function<double(int)> spacing;
    if (f.kind == ZeroFamily::Qi) {
        out.mu = Rational(3, 2);
        out.counting_plus.terms = {{Rational(-3, 2), 2.0 / (3 * kPi)}, {Rational(0), -0.25}};
        out.counting_minus.terms = {{Rational(-3, 2), 2.0 / (3 * kPi)}, {Rational(0), 0.25}};
        out.note = "real zeros assumed; admissibility of {w_k} as a spectrum assumed";
        spacing = [&](int k) { return 2.0 / (out.counting_plus.derivative(seed(k))); };
    } else {
        out.mu = Rational(1);
        double b1 = 2.0 / (N + 2);
        out.counting_plus.terms = {{Rational(-1), b1}, {Rational(0), 0.5 - double(N) / (N + 2)}};
        out.counting_minus.terms = {{Rational(-1), b1}, {Rational(0), 1.5 - double(N + 4) / (N + 2)}};
        out.note = "admissibility of {w_k} as a spectrum assumed";
        spacing = [N](int) { return double(N + 2); };
    }
    int Kp = 0, Km = 0;
    if (parity == Parity::Plus) Kp = K;
    if (parity == Parity::Minus) Km = K;
    if (parity == Parity::Whole) Kp = (K + 1) / 2, Km = K / 2;
    std::vector<double> plus, minus;
    if (Kp) plus = angle_levels(solve_w, Parity::Plus, Kp, seed, spacing, opts);
    if (Km) minus = angle_levels(solve_w, Parity::Minus, Km, seed, spacing, opts);
    out.zeros = merge_levels(plus, minus);
    if (f.kind == ZeroFamily::Qi) {
        // The barrier top at q = 0 brings w^{-rho} log w corrections.
        std::vector<BSTerm> basis = {{Rational(3, 2), 0.0}, {Rational(3, 2), 0.0, 1}, {Rational(3), 0.0}, {Rational(3), 0.0, 1}};
        CountingModel bp = out.counting_plus, bm = out.counting_minus;
        if (!plus.empty()) out.counting_plus = merge(bp.terms, fit_terms(plus, 0, bp, basis));
        if (!minus.empty()) out.counting_minus = merge(bm.terms, fit_terms(minus, 1, bm, basis));
    }
    return out;
}

}  // namespace specdet
