#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "specdet/closedform.hpp"
#include "specdet/qi.hpp"
#include "specdet/recessive.hpp"
#include "specdet/verify.hpp"
#include "specdet/zetadet.hpp"

#ifndef SPECDET_VERSION
#define SPECDET_VERSION "unknown"
#endif

using namespace specdet;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0, kExitVerify = 1, kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string subcommand;
    std::string potential = "q^4";
    std::string parity = "both";
    int count = 20;
    std::string grid;
    double tol = 1e-10;
    std::string format = "csv";
    std::string out;
    int threads = 1;
    int degree = 4;
    double lambda = 0.0;
    std::string suite = "all";
    std::string junit;

    json to_json() const {
        json j = {{"subcommand", subcommand}, {"format", format}, {"threads", threads}};
        if (subcommand == "spectrum" || subcommand == "zeta" || subcommand == "det") {
            j["potential"] = potential;
            j["parity"] = parity;
            j["count"] = count;
            j["tol"] = tol;
        }
        if (subcommand == "zeta" || subcommand == "det" || subcommand == "qi" || subcommand == "binomial")
            j["grid"] = grid;
        if (subcommand == "zeta") j["lambda"] = lambda;
        if (subcommand == "binomial") j["degree"] = degree;
        if (subcommand == "verify") j["suite"] = suite;
        return j;
    }
};

// Output table: cells are numbers or strings; CSV and JSON carry the same rows and metadata.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
    json extra = json::object();
};

Parity cli_parity(const std::string& s) {
    if (s == "even") return Parity::Plus;
    if (s == "odd") return Parity::Minus;
    if (s == "both") return Parity::Whole;
    throw UsageError("parity must be even, odd or both");
}

std::vector<double> parse_grid(const std::string& g) {
    if (g.empty()) throw UsageError("--grid a:b:h is required");
    std::vector<double> parts;
    std::stringstream ss(g);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("bad grid component '" + item + "'");
        }
    }
    if (parts.size() == 1) return parts;
    if (parts.size() != 3) throw UsageError("grid must be a:b:h or a single value");
    double a = parts[0], b = parts[1], h = parts[2];
    if (!(h > 0) || b < a) throw UsageError("empty grid '" + g + "'");
    long n = std::lround(std::floor((b - a) / h + 1e-9));
    if (n > 1000000) throw UsageError("grid too large");
    std::vector<double> v;
    for (long i = 0; i <= n; ++i) v.push_back(a + i * h);
    return v;
}

std::string num(double x) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", x);
    return b;
}

json jnum(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string cell_csv(const json& c) {
    if (c.is_null()) return "nan";
    if (c.is_string()) return c.get<std::string>();
    if (c.is_boolean()) return c.get<bool>() ? "true" : "false";
    if (c.is_number_integer()) return std::to_string(c.get<long long>());
    return num(c.get<double>());
}

void write_output(const RunConfig& cfg, const Table& t) {
    std::ostringstream os;
    if (cfg.format == "json") {
        json rows = json::array();
        for (const auto& r : t.rows) {
            json o = json::object();
            for (std::size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = r[i];
            rows.push_back(o);
        }
        json j = {{"tool", "specdet_cli"}, {"version", SPECDET_VERSION}, {"config", cfg.to_json()},
                  {"columns", t.columns}, {"rows", rows}};
        for (auto& [k, v] : t.extra.items()) j[k] = v;
        os << j.dump(2) << "\n";
    } else {
        os << "# tool=specdet_cli\n# version=" << SPECDET_VERSION << "\n";
        const json c = cfg.to_json();
        for (auto& [k, v] : c.items()) os << "# " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        for (auto& [k, v] : t.extra.items()) os << "# " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
        os << "\n";
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_csv(r[i]);
            os << "\n";
        }
    }
    if (cfg.out.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(cfg.out);
        if (!f) throw UsageError("cannot open output file " + cfg.out);
        f << os.str();
    }
}

// Worker pool over grid points; rows come back in grid order.
template <class F>
std::vector<std::vector<json>> map_grid(const std::vector<double>& grid, int threads, F row) {
    std::vector<std::vector<json>> out(grid.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) out[i] = row(grid[i]);
        return out;
    }
    std::vector<std::future<void>> workers;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < threads; ++t)
        workers.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next++; i < grid.size(); i = next++) out[i] = row(grid[i]);
        }));
    for (auto& w : workers) w.get();
    return out;
}

PolynomialPotential parse_potential(const std::string& s) {
    try {
        auto p = s.find('{') != std::string::npos ? PolynomialPotential::from_json(s) : PolynomialPotential::parse(s);
        if (p.degree() < 1) throw UsageError("potential degree must be >= 1");
        return p;
    } catch (const ParseError& e) {
        throw UsageError(std::string("bad potential: ") + e.what());
    } catch (const DomainError& e) {
        throw UsageError(std::string("bad potential: ") + e.what());
    }
}

int cmd_spectrum(const RunConfig& cfg) {
    auto p = parse_potential(cfg.potential);
    if (cfg.count < 1 || cfg.count > 10000) throw UsageError("--count must lie in [1, 10000]");
    SpectrumOptions o;
    o.tol = cfg.tol;
    o.threads = cfg.threads;
    auto spec = eigenvalues(p, cli_parity(cfg.parity), cfg.count, o);
    Table t;
    t.columns = {"k", "parity", "E", "error"};
    for (const auto& l : spec.levels)
        t.rows.push_back({l.k, l.parity == Parity::Plus ? "even" : "odd", l.value, spec.tol});
    write_output(cfg, t);
    return kExitOk;
}

int cmd_zeta(const RunConfig& cfg) {
    auto p = parse_potential(cfg.potential);
    auto grid = parse_grid(cfg.grid);
    SpectrumOptions o;
    o.tol = cfg.tol;
    o.threads = cfg.threads;
    auto spec = eigenvalues(p, Parity::Whole, std::max(cfg.count, 2), o);
    Parity par = cli_parity(cfg.parity);
    Table t;
    t.columns = {"s", "zeta_re", "zeta_im", "error", "pole_residue"};
    t.rows = map_grid(grid, cfg.threads, [&](double s) -> std::vector<json> {
        try {
            auto z = zeta(spec, s, cfg.lambda, par);
            return {s, z.value.real(), z.value.imag(), z.error_estimate, nullptr};
        } catch (const PoleError& e) {
            return {s, nullptr, nullptr, nullptr, e.residue.real()};
        }
    });
    write_output(cfg, t);
    return kExitOk;
}

int cmd_det(const RunConfig& cfg) {
    auto p = parse_potential(cfg.potential);
    auto grid = parse_grid(cfg.grid);
    SpectrumOptions o;
    o.tol = cfg.tol;
    o.threads = cfg.threads;
    auto spec = eigenvalues(p, Parity::Whole, std::max(cfg.count, 2), o);
    Table t;
    t.columns = {"lambda", "recessive_plus", "recessive_minus", "spectral_plus", "spectral_minus",
                 "spectral_err_plus", "spectral_err_minus", "recessive_err"};
    t.rows = map_grid(grid, cfg.threads, [&](double l) -> std::vector<json> {
        auto r = solve_recessive(p, l);
        auto a = determinant_spectral(spec, l, Parity::Plus), b = determinant_spectral(spec, l, Parity::Minus);
        return {l, jnum(-r.dpsi0.real()), jnum(r.psi0.real()), jnum(a.value.real()), jnum(b.value.real()),
                a.error_estimate, b.error_estimate, r.error_estimate};
    });
    write_output(cfg, t);
    return kExitOk;
}

int cmd_qi(const RunConfig& cfg) {
    auto grid = parse_grid(cfg.grid);
    for (double v : grid)
        if (v < -15 || v > 10) throw UsageError("qi grid must lie within [-15, 10]");
    Table t;
    t.columns = {"v", "qi_plus", "qi_minus", "asym_plus", "asym_minus", "log_abs_plus", "log_abs_minus", "error"};
    t.rows = map_grid(grid, cfg.threads, [](double v) -> std::vector<json> {
        auto e = qi_eval(v);
        double ap = NAN, am = NAN;
        if (v > 0) {
            auto a = qi_asymptotic(v, QiSide::Decay);
            ap = a.plus, am = a.minus;
        } else if (v < 0) {
            auto a = qi_asymptotic(-v, QiSide::Oscillatory);
            ap = a.plus, am = a.minus;
        }
        double p = e.qi_plus.real(), m = e.qi_minus.real();
        return {v, p, m, jnum(ap), jnum(am), jnum(std::log(std::abs(p))), jnum(std::log(std::abs(m))),
                e.error_estimate};
    });
    write_output(cfg, t);
    return kExitOk;
}

int cmd_binomial(const RunConfig& cfg) {
    int N = cfg.degree;
    if (N < 2 || N % 2) throw UsageError("--degree must be even and >= 2");
    auto grid = parse_grid(cfg.grid);
    Table t;
    t.columns = {"v", "closed_plus", "closed_minus", "recessive_plus", "recessive_minus"};
    t.rows = map_grid(grid, cfg.threads, [N](double v) -> std::vector<json> {
        auto c = binomial_determinants(N, v);
        // for N = 2 the binomial term is the constant v
        auto d = N == 2 ? determinant_pair(PolynomialPotential::monomial(2), v)
                        : determinant_pair(PolynomialPotential::binomial(N, N / 2 - 1, v), 0.0);
        return {v, c.plus.real(), c.minus.real(), d.plus.real(), d.minus.real()};
    });
    json levels = json::array();
    for (int k = 0; k < 6; ++k) levels.push_back(binomial_level(N, k));
    t.extra["zeros"] = levels;
    write_output(cfg, t);
    return kExitOk;
}

int write_reports(const RunConfig& cfg, const std::vector<VerificationReport>& reports) {
    bool pass = true;
    for (const auto& r : reports) pass = pass && r.pass;
    std::string body = cfg.format == "json" ? reports_to_json(reports) + "\n" : reports_to_text(reports);
    if (cfg.out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(cfg.out);
        if (!f) throw UsageError("cannot open output file " + cfg.out);
        f << body;
        std::cout << reports_to_text(reports);
    }
    if (!cfg.junit.empty()) {
        std::ofstream f(cfg.junit);
        if (!f) throw UsageError("cannot open output file " + cfg.junit);
        f << reports_to_junit(reports);
    }
    return pass ? kExitOk : kExitVerify;
}

int cmd_verify(const RunConfig& cfg) {
    auto names = suite_names();
    if (cfg.suite != "all" && std::find(names.begin(), names.end(), cfg.suite) == names.end())
        throw UsageError("unknown suite '" + cfg.suite + "'");
    return write_reports(cfg, run_suite(cfg.suite, cfg.threads));
}

int cmd_table1(const RunConfig& cfg) {
    auto r = check_table1();
    if (cfg.format == "json") return write_reports(cfg, {r});
    std::ostringstream os;
    os << "# tool=specdet_cli\n# version=" << SPECDET_VERSION << "\n";
    char b[160];
    std::snprintf(b, sizeof b, "%-26s %14s %14s %10s %8s  %s\n", "entry", "computed", "reference", "|diff|", "tol", "");
    os << b;
    for (const auto& s : r.samples) {
        std::snprintf(b, sizeof b, "%-26s %14.7f %14.7f %10.2e %8.0e  %s\n", s.point.c_str(), s.value, s.expected,
                      s.residual, s.tolerance, s.pass ? "ok" : "FAIL");
        os << b;
    }
    if (cfg.out.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(cfg.out);
        if (!f) throw UsageError("cannot open output file " + cfg.out);
        f << os.str();
    }
    return r.pass ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral determinants of polynomial potentials"};
    app.set_version_flag("--version", std::string(SPECDET_VERSION));
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* s) {
        s->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        s->add_option("--out", cfg.out, "Output path (default stdout)");
        s->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1, 256));
    };
    auto add_potential = [&](CLI::App* s) {
        s->add_option("--potential", cfg.potential, "Polynomial, e.g. \"q^4 - 2 q^2\", or JSON");
        s->add_option("--parity", cfg.parity, "Parity sector")->check(CLI::IsMember({"even", "odd", "both"}));
        s->add_option("--count", cfg.count, "Number of levels");
        s->add_option("--tol", cfg.tol, "Eigenvalue tolerance")->check(CLI::PositiveNumber);
    };

    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of -d^2/dq^2 + V(|q|)");
    add_potential(spectrum);
    add_common(spectrum);
    auto* zeta = app.add_subcommand("zeta", "Spectral zeta function on an s-grid");
    add_potential(zeta);
    add_common(zeta);
    zeta->add_option("--grid", cfg.grid, "s-grid a:b:h")->required();
    zeta->add_option("--lambda", cfg.lambda, "Spectral shift");
    auto* det = app.add_subcommand("det", "Determinants on a real lambda-grid, recessive and spectral routes");
    add_potential(det);
    add_common(det);
    det->add_option("--grid", cfg.grid, "lambda-grid a:b:h")->required();
    auto* qi = app.add_subcommand("qi", "Qi(v) with asymptotic forms on a v-grid");
    add_common(qi);
    qi->add_option("--grid", cfg.grid, "v-grid a:b:h within [-15, 10]")->required();
    auto* binomial = app.add_subcommand("binomial", "Closed-form determinants of q^N + v q^{N/2-1}");
    add_common(binomial);
    binomial->add_option("--grid", cfg.grid, "v-grid a:b:h")->required();
    binomial->add_option("--degree", cfg.degree, "Even degree N");
    auto* verify = app.add_subcommand("verify", "Identity verification suites");
    add_common(verify);
    verify->add_option("suite", cfg.suite, "Suite name or 'all'");
    verify->add_option("--junit", cfg.junit, "Also write a JUnit XML report");
    auto* table1 = app.add_subcommand("table1", "Recompute the zeta-value table");
    add_common(table1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();

    try {
        if (cfg.subcommand == "spectrum") return cmd_spectrum(cfg);
        if (cfg.subcommand == "zeta") return cmd_zeta(cfg);
        if (cfg.subcommand == "det") return cmd_det(cfg);
        if (cfg.subcommand == "qi") return cmd_qi(cfg);
        if (cfg.subcommand == "binomial") return cmd_binomial(cfg);
        if (cfg.subcommand == "verify") return cmd_verify(cfg);
        if (cfg.subcommand == "table1") return cmd_table1(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerify;
    }
    return kExitUsage;
}
