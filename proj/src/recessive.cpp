#include "specdet/recessive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specdet {

namespace {

constexpr int kOrder = 30;
constexpr int kMaxRestarts = 80;

struct Sol {
    cplx psi, dpsi;
    double ls = 0.0;

    void renormalize() {
        double m = std::max(std::abs(psi), std::abs(dpsi));
        if (m > 0.0 && std::isfinite(m)) {
            psi /= m;
            dpsi /= m;
            ls += std::log(m);
        }
    }
};

// Taylor expansion of a solution of psi'' = P(q) psi about a point.
class Taylor {
public:
    explicit Taylor(const std::vector<cplx>& P) : P_(P), Ps_(P.size()), u_(kOrder + 1) {}

    void expand(double q0, cplx psi, cplx dpsi) {
        Ps_ = P_;
        int n = int(P_.size());
        for (int i = 0; i < n - 1; ++i)
            for (int j = n - 2; j >= i; --j) Ps_[j] += q0 * Ps_[j + 1];
        u_[0] = psi;
        u_[1] = dpsi;
        int deg = n - 1;
        for (int k = 0; k + 2 <= kOrder; ++k) {
            cplx acc = 0.0;
            for (int j = 0; j <= std::min(k, deg); ++j) acc += Ps_[j] * u_[k - j];
            u_[k + 2] = acc / double((k + 1) * (k + 2));
        }
    }

    void eval(double h, cplx& psi, cplx& dpsi) const {
        cplx a = u_[kOrder], b = double(kOrder) * u_[kOrder];
        for (int k = kOrder - 1; k >= 0; --k) {
            a = a * h + u_[k];
            if (k >= 1) b = b * h + double(k) * u_[k];
        }
        psi = a;
        dpsi = b;
    }

    double suggest(double tol) const {
        double norm = std::max(std::abs(u_[0]), std::abs(u_[1]));
        double h = std::numeric_limits<double>::infinity();
        for (int k : {kOrder - 1, kOrder}) {
            double a = std::abs(u_[k]);
            if (a > 0.0) h = std::min(h, std::pow(tol * norm / a, 1.0 / (k - 1)));
        }
        return 0.7 * h;
    }

    cplx P(double q) const {
        cplx v = 0.0;
        for (int m = int(P_.size()) - 1; m >= 0; --m) v = v * q + P_[m];
        return v;
    }

private:
    const std::vector<cplx>& P_;
    std::vector<cplx> Ps_;
    std::vector<cplx> u_;
};

std::vector<cplx> shifted_coeffs(const PolynomialPotential& p, cplx lambda) {
    std::vector<cplx> P = p.coeffs();
    P[0] += lambda;
    return P;
}

struct Prufer {
    bool active = false;
    double theta = 0.0;

    void start(cplx psi, cplx dpsi) { theta = std::atan2(psi.real(), dpsi.real()); }
    void advance(cplx psi, cplx dpsi) {
        double t = std::atan2(psi.real(), dpsi.real());
        double d = std::remainder(t - theta, 2 * kPi);
        theta += d;
    }
};

// Integrates from q_from down to each stop in `stops` (descending, last is the end point).
// When `schedule` is non-empty it is replayed with every step halved; otherwise adaptive steps are
// recorded into `record`.
void integrate(const std::vector<cplx>& P, double tol, double q_from, const std::vector<double>& stops,
               std::vector<Sol>& sols, std::vector<std::vector<Sol>>* at_stops, const std::vector<double>* schedule,
               std::vector<double>* record, Prufer* prufer, int& steps) {
    std::vector<Taylor> tay;
    for (std::size_t i = 0; i < sols.size(); ++i) tay.emplace_back(P);
    double q = q_from;
    std::size_t next_stop = 0;
    std::size_t sched_i = 1;
    if (record) record->push_back(q);
    auto take_stops = [&]() {
        while (next_stop < stops.size() && stops[next_stop] >= q) {
            if (at_stops) at_stops->push_back(sols);
            ++next_stop;
        }
    };
    take_stops();
    while (next_stop < stops.size()) {
        for (std::size_t i = 0; i < sols.size(); ++i) tay[i].expand(q, sols[i].psi, sols[i].dpsi);
        double target = stops[next_stop];
        double qn;
        if (schedule) {
            double full_next = (*schedule)[sched_i];
            double half = 0.5 * ((*schedule)[sched_i - 1] + full_next);
            if (q > half + 1e-15 * std::abs(half)) {
                qn = half;
            } else {
                qn = full_next;
                ++sched_i;
            }
        } else {
            double h = tay[0].suggest(tol);
            qn = std::max(target, q - h);
            if (q - qn < 1e-300) throw ConvergenceError("recessive integration: step size underflow");
        }
        double h = qn - q;
        if (prufer && prufer->active) {
            double kmax = 0.0;
            for (double t : {0.0, 0.5, 1.0}) kmax = std::max(kmax, -tay[0].P(q + t * h).real());
            int nsub = int(std::ceil(std::abs(h) * std::sqrt(std::max(kmax, 0.0)))) + 2;
            for (int j = 1; j <= nsub; ++j) {
                cplx a, b;
                tay[0].eval(h * j / nsub, a, b);
                prufer->advance(a, b);
            }
        }
        for (std::size_t i = 0; i < sols.size(); ++i) {
            tay[i].eval(h, sols[i].psi, sols[i].dpsi);
            sols[i].renormalize();
        }
        q = qn;
        ++steps;
        if (record) record->push_back(q);
        if (!std::isfinite(std::abs(sols[0].psi)) || !std::isfinite(std::abs(sols[0].dpsi)))
            throw ConvergenceError("recessive integration produced non-finite values");
        take_stops();
    }
}

double auto_q_start(const PolynomialPotential& p, cplx lambda) {
    int N = p.degree();
    double e = N / 2.0 + 1.0;
    double q = std::pow(22.5 * e, 1.0 / e);
    for (int m = 0; m < N; ++m) {
        cplx c = m == 0 ? lambda : p.coeff(m);
        if (std::abs(c) > 0.0) q = std::max(q, (1.0 + 1.0 / (N - m)) * std::pow(std::abs(c), 1.0 / (N - m)));
    }
    return q;
}

struct Start {
    double q;
    RiccatiStart r;
    int restarts;
};

Start find_start(const PolynomialPotential& p, cplx lambda, double q_min) {
    double q = std::max(q_min, auto_q_start(p, lambda));
    for (int r = 0; r <= kMaxRestarts; ++r) {
        RiccatiStart rs = riccati_start(p, lambda, q);
        if (rs.converged) return {q, rs, r};
        q *= 1.06;
    }
    throw NormalizationError("recessive: large-q expansion did not converge at any q_start");
}

double relative_gap(const Sol& a, const Sol& b) {
    double f = std::exp(a.ls - b.ls);
    double norm = std::max(std::abs(b.psi), std::abs(b.dpsi));
    return std::max(std::abs(a.psi * f - b.psi), std::abs(a.dpsi * f - b.dpsi)) / norm;
}

}  // namespace

cplx ScaledPair::value() const { return psi * std::exp(log_scale); }
cplx ScaledPair::derivative() const { return dpsi * std::exp(log_scale); }
cplx ScaledPair::log_value() const { return std::log(psi) + log_scale; }
cplx ScaledPair::log_neg_derivative() const { return std::log(-dpsi) + log_scale; }

RiccatiStart riccati_start(const PolynomialPotential& p, cplx lambda, double q) {
    int N = p.degree();
    std::vector<cplx> c = shifted_coeffs(p, lambda);
    ActionNormalization an = action_normalization(p, lambda);
    RiccatiStart out;
    auto& a = out.coeffs;
    a.push_back(-1.0);
    double lq = std::log(q);
    double e0 = N / 2.0;
    out.y = -std::exp(e0 * lq);
    out.log_psi = an.C - std::exp((e0 + 1) * lq) / (e0 + 1);
    double min_seen = std::numeric_limits<double>::infinity();
    // divergence is judged against terms above rounding level: a coefficient that cancels to
    // rounding noise must not make the next ordinary term look like growth
    double min_resolved = std::numeric_limits<double>::infinity();
    int small_run = 0;
    int kmax = std::max(800, 48 * (N + 2));
    for (int k = 1; k <= kmax; ++k) {
        cplx Q = 0.0;
        if (k % 2 == 0 && k / 2 <= N) Q = c[N - k / 2];
        cplx D = 0.0;
        if (k >= N + 2) D = a[k - N - 2] * (N / 2.0 - (k - N - 2) / 2.0);
        cplx conv = 0.0;
        for (int i = 1; i < k; ++i) conv += a[i] * a[k - i];
        cplx ak = -(Q - D - conv) / 2.0;
        a.push_back(ak);
        double e = (N - k) / 2.0;
        double qe = std::exp(e * lq);
        cplx ty = ak * qe;
        cplx tl = (k == N + 2) ? ak * lq : ak * qe * q / (e + 1);
        out.y += ty;
        out.log_psi += tl;
        if (k <= N + 2) continue;
        double mag = std::max(std::abs(ty) / std::abs(out.y), std::abs(tl) / std::max(1.0, std::abs(out.log_psi)));
        if (mag > 0.0) min_seen = std::min(min_seen, mag);
        if (mag >= 1e-17) min_resolved = std::min(min_resolved, mag);
        if (mag < 1e-17) {
            if (++small_run >= N + 2) {
                out.converged = true;
                out.truncation = min_seen;
                if (!std::isfinite(out.truncation)) out.truncation = 0.0;
                break;
            }
        } else {
            small_run = 0;
            if (mag > 1e6 * min_resolved) break;  // asymptotic series diverging before it converged
        }
    }
    if (!out.converged) out.truncation = min_seen;
    if (!std::isfinite(out.truncation)) out.truncation = 0.0;  // series terminated
    return out;
}

RecessiveResult solve_recessive(const PolynomialPotential& p, cplx lambda, const RecessiveOptions& opts) {
    if (!(opts.tol >= 1e-12 && opts.tol <= 1e-6)) throw DomainError("recessive: tol must lie in [1e-12, 1e-6]");
    if (!std::isfinite(std::abs(lambda))) throw DomainError("recessive: lambda must be finite");
    std::vector<cplx> P = shifted_coeffs(p, lambda);
    Start st = find_start(p, lambda, opts.q_start);

    RecessiveResult out;
    out.q_start = st.q;
    out.step_stats.riccati_terms = int(st.r.coeffs.size());
    out.step_stats.restarts = st.restarts;

    Sol s0;
    s0.psi = std::exp(cplx(0.0, st.r.log_psi.imag()));
    s0.dpsi = st.r.y * s0.psi;
    s0.ls = st.r.log_psi.real();
    s0.renormalize();

    Prufer pr;
    pr.active = opts.count_nodes && p.is_real() && lambda.imag() == 0.0;
    if (pr.active) pr.start(s0.psi, s0.dpsi);
    double theta_start = pr.theta;

    std::vector<Sol> sols{s0};
    std::vector<double> schedule;
    integrate(P, opts.tol, st.q, {0.0}, sols, nullptr, nullptr, &schedule, &pr, out.step_stats.steps);
    const Sol& r = sols[0];
    out.scaled = {r.psi, r.dpsi, r.ls};
    out.psi0 = out.scaled.value();
    out.dpsi0 = out.scaled.derivative();
    out.error_estimate = st.r.truncation;

    if (opts.estimate_error) {
        std::vector<Sol> fine{s0};
        int dummy = 0;
        integrate(P, opts.tol, st.q, {0.0}, fine, nullptr, &schedule, nullptr, nullptr, dummy);
        out.error_estimate = std::max(out.error_estimate, relative_gap(r, fine[0]));
    }

    if (pr.active) {
        // Shift so that the starting angle lies in (pi/2, pi).
        double shift = std::floor(theta_start / kPi) * kPi;
        double th0 = pr.theta - shift;
        out.prufer_angle = th0;
        out.dirichlet_count = int(-std::floor(th0 / kPi));
        out.neumann_count = int(-std::floor(th0 / kPi - 0.5));
    }
    return out;
}

RecessiveResult solve_recessive(const PolynomialPotential& p, cplx lambda, double tol) {
    RecessiveOptions o;
    o.tol = tol;
    return solve_recessive(p, lambda, o);
}

DeterminantPair determinant_pair(const PolynomialPotential& p, cplx lambda, double tol) {
    RecessiveOptions o;
    o.tol = tol;
    o.estimate_error = false;
    auto r = solve_recessive(p, lambda, o);
    return {-r.dpsi0, r.psi0};
}

std::vector<ScaledPair> recessive_values(const PolynomialPotential& p, cplx lambda, const std::vector<double>& qs,
                                         double tol) {
    if (qs.empty()) return {};
    for (double q : qs)
        if (!(q >= 0.0)) throw DomainError("recessive_values: points must be >= 0");
    std::vector<double> order(qs);
    std::sort(order.begin(), order.end(), std::greater<>());
    std::vector<cplx> P = shifted_coeffs(p, lambda);
    Start st = find_start(p, lambda, order.front());
    Sol s0;
    s0.psi = std::exp(cplx(0.0, st.r.log_psi.imag()));
    s0.dpsi = st.r.y * s0.psi;
    s0.ls = st.r.log_psi.real();
    s0.renormalize();
    std::vector<Sol> sols{s0};
    std::vector<std::vector<Sol>> at;
    int steps = 0;
    integrate(P, tol, st.q, order, sols, &at, nullptr, nullptr, nullptr, steps);
    std::vector<ScaledPair> out;
    for (double q : qs) {
        std::size_t i = std::find(order.begin(), order.end(), q) - order.begin();
        const Sol& s = at[i][0];
        out.push_back({s.psi, s.dpsi, s.ls});
    }
    return out;
}

double wronskian_drift(const PolynomialPotential& p, cplx lambda, double tol) {
    std::vector<cplx> P = shifted_coeffs(p, lambda);
    Start st = find_start(p, lambda, 0.0);
    Sol a;
    a.psi = std::exp(cplx(0.0, st.r.log_psi.imag()));
    a.dpsi = st.r.y * a.psi;
    a.ls = st.r.log_psi.real();
    a.renormalize();
    Sol b;
    b.psi = 1.0;
    b.dpsi = -st.r.y;  // growing direction
    b.renormalize();
    auto W = [](const Sol& x, const Sol& y) {
        return (x.psi * y.dpsi - x.dpsi * y.psi) * std::exp(x.ls + y.ls);
    };
    cplx W0 = W(a, b);
    // Sample densely along the path.
    std::vector<double> stops;
    for (int i = 1; i <= 64; ++i) stops.push_back(st.q * (1.0 - i / 64.0));
    std::vector<Sol> sols{a, b};
    std::vector<std::vector<Sol>> at;
    int steps = 0;
    integrate(P, tol, st.q, stops, sols, &at, nullptr, nullptr, nullptr, steps);
    double drift = 0.0;
    for (const auto& s : at) {
        // Relative to the larger of |W0| and the product of the solution norms: once the second
        // solution is dominated by the recessive one the Wronskian is a cancellation of large terms.
        double scale = std::max(std::abs(s[0].psi), std::abs(s[0].dpsi)) *
                       std::max(std::abs(s[1].psi), std::abs(s[1].dpsi)) * std::exp(s[0].ls + s[1].ls);
        drift = std::max(drift, std::abs(W(s[0], s[1]) - W0) / std::max(std::abs(W0), scale));
    }
    return drift;
}

}  // namespace specdet
