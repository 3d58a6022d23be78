// Command-line front end: certification suites, boost matrices, residual
// order scans and twin-phase quadrature, with table/json/csv output.
//
// Exit codes: 0 pass, 1 check failure, 2 usage or parse error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "schrocov/covariance.hpp"
#include "schrocov/noninertial.hpp"
#include "schrocov/report.hpp"
#include "schrocov/spacetime.hpp"

namespace {

using namespace schrocov;

Vec3 parse_vec3(const std::string& s) {
    std::stringstream ss(s);
    std::string item;
    std::vector<double> parts;
    while (std::getline(ss, item, ',')) {
        std::size_t consumed = 0;
        parts.push_back(std::stod(item, &consumed));
        if (consumed != item.size()) throw std::invalid_argument("bad vector component '" + item + "'");
    }
    if (parts.size() != 3) throw std::invalid_argument("expected a comma-separated triple, got '" + s + "'");
    return {parts[0], parts[1], parts[2]};
}

std::vector<double> parse_list(const std::string& s) {
    std::stringstream ss(s);
    std::string item;
    std::vector<double> values;
    while (std::getline(ss, item, ',')) {
        std::size_t consumed = 0;
        values.push_back(std::stod(item, &consumed));
        if (consumed != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    }
    if (values.empty()) throw std::invalid_argument("expected a comma-separated list, got '" + s + "'");
    return values;
}

BoostKind parse_kind(const std::string& s) {
    if (s == "galilei") return BoostKind::Galilei;
    if (s == "extended") return BoostKind::Extended;
    if (s == "lorentz") return BoostKind::Lorentz;
    throw std::invalid_argument("unknown boost kind '" + s + "'");
}

struct RunConfig {
    enum class Command { Verify, Matrix, OrderScan, TwinPhase };
    Command command = Command::Verify;
    OutputFormat format = OutputFormat::Table;
    std::uint64_t seed = 42;

    double m = 1.0;
    Vec3 p{1.0, 0.0, 0.0};
    Vec3 v{0.2, 0.0, 0.0};
    double c = 10.0;
    int batch = 100;
    Sabotage sabotage = Sabotage::None;

    std::string kind = "extended";

    std::string scan;
    std::vector<double> c_values{10.0, 20.0, 40.0, 80.0};
    int entry_row = 0;
    int entry_col = 0;
    double slope_tol = 0.01;
    double max_exponent = -1.9;

    std::vector<std::string> trajectories;
};

int run_verify(const RunConfig& cfg) {
    VerifyConfig vc;
    vc.m = cfg.m;
    vc.p = cfg.p;
    vc.v = cfg.v;
    vc.c = cfg.c;
    vc.seed = cfg.seed;
    vc.batch = cfg.batch;
    vc.sabotage = cfg.sabotage;
    const CovarianceReport report = run_verify_suite(vc);
    std::cout << render_verify(report, cfg.seed, cfg.format);
    return report.overall ? 0 : 1;
}

int run_matrix(const RunConfig& cfg) {
    const BoostSpec spec{cfg.v, cfg.c, parse_kind(cfg.kind)};
    std::cout << render_matrix(boost_matrix(spec), spec, cfg.format);
    return 0;
}

int run_order_scan(const RunConfig& cfg) {
    OrderScanResult result;
    std::string criterion;
    bool passed = false;
    Json inputs{{"m", cfg.m},
                {"p", {cfg.p.x, cfg.p.y, cfg.p.z}},
                {"v", {cfg.v.x, cfg.v.y, cfg.v.z}},
                {"c_values", cfg.c_values}};

    if (cfg.scan == "inverse-entry") {
        result = scan_inverse_entry(cfg.v, cfg.entry_row, cfg.entry_col, cfg.c_values);
        const double expected = expected_inverse_entry_exponent(cfg.entry_row, cfg.entry_col);
        inputs["entry"] = {cfg.entry_row, cfg.entry_col};
        inputs["expected_exponent"] = expected;
        criterion = "fitted exponent within " + detail::fmt_short(cfg.slope_tol) + " of " +
                    detail::fmt_short(expected) + " with fit quality >= 0.999";
        passed = result.converged_to_zero ||
                 (std::abs(result.fitted_exponent - expected) <= cfg.slope_tol && result.fit_quality >= 0.999);
    } else if (cfg.scan == "lorentz-gap" || cfg.scan == "truncation-gap") {
        result = cfg.scan == "lorentz-gap" ? scan_lorentz_gap(cfg.m, cfg.p, cfg.v, cfg.c_values)
                                           : scan_truncation_gap(cfg.m, cfg.p, cfg.v, cfg.c_values);
        inputs["max_exponent"] = cfg.max_exponent;
        criterion = "fitted exponent <= " + detail::fmt_short(cfg.max_exponent) + " with fit quality >= 0.999";
        passed = result.converged_to_zero ||
                 (result.fitted_exponent <= cfg.max_exponent && result.fit_quality >= 0.999);
    } else {
        throw std::invalid_argument("unknown scan '" + cfg.scan + "'");
    }

    std::cout << render_order_scan(result, cfg.scan, inputs, criterion, passed, cfg.format);
    return passed ? 0 : 1;
}

int run_twin_phase(const RunConfig& cfg) {
    std::vector<TwinPhaseRow> rows;
    for (const std::string& spec : cfg.trajectories)
        rows.push_back({spec, twin_phase(parse_trajectory(spec), cfg.m)});
    std::optional<double> difference;
    if (rows.size() == 2) difference = rows[0].result.phi - rows[1].result.phi;
    std::cout << render_twin_phase(rows, cfg.m, difference, cfg.format);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boost covariance certification for free plane waves"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format = "table";
    std::string p_str = "1,0,0";
    std::string v_str;
    std::string c_str;
    std::string entry_str = "0,0";
    std::string sabotage;

    CLI::App* verify = app.add_subcommand("verify", "run the full covariance check suite");
    verify->add_option("--m", cfg.m, "particle mass");
    verify->add_option("--p", p_str, "momentum as x,y,z (default 1,0,0)");
    verify->add_option("--v", v_str, "boost velocity as x,y,z (default 0.2,0,0)");
    verify->add_option("--c", c_str, "speed of light (default 10)");
    verify->add_option("--seed", cfg.seed, "seed for the randomized batch (default 42)");
    verify->add_option("--batch", cfg.batch, "randomized batch size (default 100)");
    verify->add_option("--sabotage", sabotage, "test hook: drop-c2-terms zeroes the 1/c^2 matrix entries")
        ->check(CLI::IsMember({"drop-c2-terms"}));

    CLI::App* matrix = app.add_subcommand("matrix", "print a boost matrix");
    matrix->add_option("--kind", cfg.kind, "galilei | extended | lorentz (default extended)");
    matrix->add_option("--v", v_str, "boost velocity as x,y,z")->required();
    matrix->add_option("--c", c_str, "speed of light (default 10)");

    CLI::App* scan = app.add_subcommand("order-scan", "fit a residual's power law in c");
    scan->add_option("--scan", cfg.scan, "inverse-entry | lorentz-gap | truncation-gap")->required();
    scan->add_option("--entry", entry_str, "matrix entry row,col for inverse-entry (default 0,0)");
    scan->add_option("--m", cfg.m, "particle mass (default 1)");
    scan->add_option("--p", p_str, "momentum as x,y,z (default 1,0,0)");
    scan->add_option("--v", v_str, "boost velocity as x,y,z (default 0.1,0,0)");
    scan->add_option("--c", c_str, "comma-separated c values (default 10,20,40,80)");
    scan->add_option("--tol", cfg.slope_tol, "two-sided slope tolerance for closed-form scans (default 0.01)");
    scan->add_option("--max-exponent", cfg.max_exponent,
                     "upper bound on the fitted exponent for measured scans (default -1.9)");

    CLI::App* twin = app.add_subcommand("twin-phase", "accumulated phase of non-inertial histories");
    twin->add_option("--m", cfg.m, "particle mass")->required();
    twin->add_option("--traj", cfg.trajectories,
                     "trajectory spec: rest | quad:a=..,t1=.. | bump:amp=..,t1=.. | file:<path>")
        ->required();

    for (CLI::App* sub : {verify, matrix, scan, twin})
        sub->add_option("--format", format, "table | json | csv (default table)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        cfg.format = parse_format(format);
        if (!v_str.empty()) cfg.v = parse_vec3(v_str);
        cfg.p = parse_vec3(p_str);
        if (!entry_str.empty()) {
            const auto entry = parse_list(entry_str);
            if (entry.size() != 2) throw std::invalid_argument("--entry expects row,col");
            cfg.entry_row = static_cast<int>(entry[0]);
            cfg.entry_col = static_cast<int>(entry[1]);
        }
        if (sabotage == "drop-c2-terms") cfg.sabotage = Sabotage::DropC2Terms;

        if (app.got_subcommand(verify)) {
            if (!c_str.empty()) cfg.c = parse_list(c_str).at(0);
            cfg.command = RunConfig::Command::Verify;
            return run_verify(cfg);
        }
        if (app.got_subcommand(matrix)) {
            if (!c_str.empty()) cfg.c = parse_list(c_str).at(0);
            cfg.command = RunConfig::Command::Matrix;
            return run_matrix(cfg);
        }
        if (app.got_subcommand(scan)) {
            if (v_str.empty()) cfg.v = {0.1, 0.0, 0.0};
            if (!c_str.empty()) cfg.c_values = parse_list(c_str);
            cfg.command = RunConfig::Command::OrderScan;
            return run_order_scan(cfg);
        }
        cfg.command = RunConfig::Command::TwinPhase;
        return run_twin_phase(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
