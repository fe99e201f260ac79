#include "fracspec/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracspec/asymptotics.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/filtering.hpp"
#include "fracspec/nystrom.hpp"

namespace fracspec::cli {

namespace {

constexpr int kMaxN = 64;
constexpr int kMaxL = 200000;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Cell num(double v) { return {format_number(v), true}; }
Cell integer(long v) { return {std::to_string(v), true}; }
Cell text(std::string s) { return {std::move(s), false}; }

Table constants_table(const RunConfig& c) {
    ProcessConstants k = constants_for(c.process);
    Table t{{"name", "value"}, {}};
    auto add = [&](const char* name, double v) { t.rows.push_back({text(name), num(v)}); };
    add("hurst", k.hurst);
    add("beta", k.beta);
    add("alpha", k.alpha);
    add("lambda_prefactor", k.lambda_prefactor);
    add("ell_H", k.ell_H);
    add("b_alpha", k.b_alpha);
    add("d0", k.d0);
    add("d2", k.d2);
    add("b0", k.b0);
    add("b1", k.b1);
    add("b2", k.b2);
    add("delta", k.delta);
    add("sigma1", k.sigma1);
    add("sigma2", k.sigma2);
    add("phase_angle", k.phase_angle);
    add("c_exp", k.c_exp);
    add("s_exp", k.s_exp);
    add("C_mean", k.C_mean);
    if (k.has_aux) {
        add("A1", k.A1);
        add("A2", k.A2);
        add("B1", k.B1);
        add("B2", k.B2);
        add("A3", k.A3);
        add("B3", k.B3);
        add("C_tilde_printed", k.C_tilde_printed);
    }
    return t;
}

Table eigs_table(const RunConfig& c) {
    std::vector<SpectralEstimate> est = solve(c.process, NystromGrid(c.L), c.n_max, c.tol);
    Table t{{"n", "lambda_hat", "nu_hat"}, {}};
    for (const SpectralEstimate& e : est) {
        t.rows.push_back({integer(e.n), num(e.lambda_hat), e.nu_hat ? num(*e.nu_hat) : text("")});
    }
    return t;
}

Table asym_table(const RunConfig& c) {
    Table t{{"n", "nu_tilde", "lambda_tilde", "endpoint", "mean"}, {}};
    for (int n = 1; n <= c.n_max; ++n) {
        t.rows.push_back({integer(n), num(nu_asym(c.process, n)), num(lambda_asym(c.process, n)),
                          num(endpoint_value(c.process, n)), num(mean_functional(c.process, n))});
    }
    return t;
}

Table compare_table(const RunConfig& c) {
    std::vector<ComparisonRow> rows = compare(c.process, solve(c.process, NystromGrid(c.L), c.n_max, c.tol));
    Table t{{"n", "lambda_hat", "nu_hat", "lambda_tilde", "nu_tilde", "rel_err_lambda_pct", "rel_err_nu_pct"}, {}};
    for (const ComparisonRow& r : rows) {
        t.rows.push_back({integer(r.n), num(r.lambda_hat), num(r.nu_hat), num(r.lambda_tilde), num(r.nu_tilde),
                          num(100.0 * r.rel_err_lambda), num(100.0 * r.rel_err_nu)});
    }
    return t;
}

Table eigenfunction_table(const RunConfig& c) {
    NystromGrid grid(c.L);
    std::vector<SpectralEstimate> est = solve(c.process, grid, c.n, c.tol);
    Eigen::VectorXd f = vector_to_function(est[c.n - 1].vector, grid);
    EigenfunctionApprox approx(c.process);

    std::vector<double> xs(grid.size());
    std::vector<double> fs(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        xs[i] = grid.node(i);
        fs[i] = f[i];
    }
    ExpLayerFit fit = approx.fit_exp_layer(c.n, xs, fs);

    Table t{{"x", "phi_numeric", "phi_asym", "phi_osc_only"}, {}};
    for (int i = 0; i < c.x_grid; ++i) {
        const double x = static_cast<double>(i) / (c.x_grid - 1);
        const double pos = x * c.L;
        const int i0 = std::min(static_cast<int>(std::floor(pos)), c.L - 1);
        const double w = pos - i0;
        const double phi = (1.0 - w) * f[i0] + w * f[i0 + 1];
        t.rows.push_back(
            {num(x), num(phi), num(approx.value(c.n, x, &fit)), num(phi - approx.oscillatory(c.n, x))});
    }
    return t;
}

Table filtering_table(const RunConfig& c) {
    const MmseMode mode = parse_mode(c.mode);
    Table t{{"eps", "mode", "x", "p_series", "p_asym", "ratio", "n_terms", "tail"}, {}};
    for (double eps : c.eps) {
        ChannelModel model{c.mu, eps, c.horizon, c.process};
        const double x = mode == MmseMode::Endpoint ? 1.0 : c.x;
        MmseResult s = mmse_series(model, mode, x, c.n_terms);
        MmseResult a = mmse_asym(model, mode);
        t.rows.push_back({num(eps), text(mode_name(mode)), num(x), num(s.value), num(a.value),
                          num(s.value / a.value), integer(s.n_terms.value_or(0)), num(s.tail)});
    }
    return t;
}

std::string error_record(const std::string& kind, const std::string& message) {
    nlohmann::json j{{"error", kind}, {"message", message}};
    return j.dump();
}

}  // namespace

void RunConfig::validate() const {
    process.validate();
    if (n_max < 1 || n_max > kMaxN) {
        throw DomainError("n_max must lie in [1, 64]");
    }
    if (n < 1 || n > kMaxN) {
        throw DomainError("n must lie in [1, 64]");
    }
    if (L < 8 || L > kMaxL) {
        throw DomainError("L must lie in [8, 200000]");
    }
    if (x_grid < 2) {
        throw DomainError("x_grid must be >= 2");
    }
    if (!(tol > 0.0)) {
        throw DomainError("tol must be positive");
    }
    if (command == Command::Filtering) {
        if (eps.empty()) {
            throw DomainError("eps list must not be empty");
        }
        for (double e : eps) {
            ChannelModel{mu, e, horizon, process}.validate();
        }
        MmseMode m = parse_mode(mode);
        if (m == MmseMode::Interior && !(x > 0.0 && x <= 1.0)) {
            throw DomainError("x must lie in (0,1]");
        }
        if (n_terms && *n_terms < 10) {
            throw DomainError("n_terms must be >= 10");
        }
    }
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

Table execute(const RunConfig& config) {
    config.validate();
    switch (config.command) {
    case Command::Constants:
        return constants_table(config);
    case Command::Eigs:
        return eigs_table(config);
    case Command::Asym:
        return asym_table(config);
    case Command::Compare:
        return compare_table(config);
    case Command::Eigenfunction:
        return eigenfunction_table(config);
    case Command::Filtering:
        return filtering_table(config);
    }
    return {};
}

std::string to_csv(const Table& table) {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        os << (i ? "," : "") << table.header[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << row[i].text;
        }
        os << '\n';
    }
    return os.str();
}

std::string to_json(const Table& table) {
    std::ostringstream os;
    os << '[';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        os << (r ? ",\n " : "") << '{';
        const auto& row = table.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? ", " : "") << nlohmann::json(table.header[i]).dump() << ": ";
            if (row[i].numeric) {
                os << row[i].text;
            } else if (row[i].text.empty()) {
                os << "null";
            } else {
                os << nlohmann::json(row[i].text).dump();
            }
        }
        os << '}';
    }
    os << "]\n";
    return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::string process = "fbm";
    std::string output = "csv";
    std::string out_path;
    int n_terms = 0;

    CLI::App app{"Covariance operator spectra of fBm, fOU and integrated fBm"};
    app.require_subcommand(1);
    struct Entry {
        const char* name;
        Command cmd;
        const char* help;
    };
    const Entry commands[] = {
        {"constants", Command::Constants, "asymptotic constants of a process"},
        {"eigs", Command::Eigs, "Nystrom eigenvalues and nu_hat"},
        {"asym", Command::Asym, "asymptotic nu, lambda, endpoint value and mean"},
        {"compare", Command::Compare, "Nystrom against asymptotic eigenvalues"},
        {"eigenfunction", Command::Eigenfunction, "Nystrom and asymptotic eigenfunction n on a grid"},
        {"filtering", Command::Filtering, "filtering error: eigen-series against the closed form"}};
    for (const auto& [name, cmd, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->callback([&cfg, cmd = cmd] { cfg.command = cmd; });
        sub->add_option("--process", process, "fbm | fou | ifbm");
        sub->add_option("--hurst", cfg.process.hurst, "Hurst index H in (0,1)");
        sub->add_option("--beta", cfg.process.drift, "fOU drift");
        sub->add_option("--L", cfg.L, "Nystrom subintervals");
        sub->add_option("--n-max", cfg.n_max, "number of eigenpairs");
        sub->add_option("--n", cfg.n, "eigenfunction index");
        sub->add_option("--x-grid", cfg.x_grid, "output points on [0,1]");
        sub->add_option("--tol", cfg.tol, "eigenpair residual tolerance relative to lambda_1");
        sub->add_option("--mu", cfg.mu, "channel gain");
        sub->add_option("--T", cfg.horizon, "horizon");
        sub->add_option("--eps", cfg.eps, "noise intensities")->delimiter(',');
        sub->add_option("--mode", cfg.mode, "interior | endpoint");
        sub->add_option("--x", cfg.x, "interior evaluation point");
        sub->add_option("--n-terms", n_terms, "series terms (default: automatic cutoff)");
        sub->add_option("--output", output, "csv | json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", out_path, "output file (default stdout)");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << error_record("usage", e.what()) << '\n';
        return 2;
    }

    Table table;
    try {
        cfg.process.kind = parse_kind(process);
        cfg.output = output == "json" ? Output::Json : Output::Csv;
        if (n_terms != 0) {
            cfg.n_terms = n_terms;
        }
        if (!out_path.empty()) {
            cfg.out_path = out_path;
        }
        cfg.validate();
    } catch (const std::exception& e) {
        err << error_record("usage", e.what()) << '\n';
        return 2;
    }

    try {
        table = execute(cfg);
    } catch (const ConvergenceError& e) {
        nlohmann::json j{{"error", "numerical"},
                         {"message", e.what()},
                         {"best_estimate", e.best_estimate()},
                         {"error_bound", e.error_bound()}};
        err << j.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << error_record("numerical", e.what()) << '\n';
        return 1;
    }

    const std::string body = cfg.output == Output::Json ? to_json(table) : to_csv(table);
    if (cfg.out_path) {
        std::ofstream f(*cfg.out_path, std::ios::binary);
        if (!f || !(f << body) || !f.flush()) {
            err << error_record("usage", "cannot write output path " + *cfg.out_path) << '\n';
            return 2;
        }
    } else {
        out << body;
    }
    return 0;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace fracspec::cli
