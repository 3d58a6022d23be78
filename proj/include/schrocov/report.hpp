#pragma once

#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "schrocov/covariance.hpp"
#include "schrocov/noninertial.hpp"
#include "schrocov/spacetime.hpp"

namespace schrocov {

inline constexpr const char* kVersion = "0.1.0";

enum class OutputFormat { Table, Json, Csv };

inline OutputFormat parse_format(const std::string& s) {
    if (s == "table") return OutputFormat::Table;
    if (s == "json") return OutputFormat::Json;
    if (s == "csv") return OutputFormat::Csv;
    throw std::invalid_argument("unknown output format '" + s + "' (expected table, json or csv)");
}

namespace detail {

inline std::string fmt_double(double x, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, x);
    return buf;
}

inline std::string fmt_full(double x) { return fmt_double(x, "%.17g"); }
inline std::string fmt_short(double x) { return fmt_double(x, "%.6g"); }

}  // namespace detail

using Json = nlohmann::ordered_json;

inline Json verdict_to_json(const CheckVerdict& v) {
    Json j;
    j["name"] = v.name;
    j["residual"] = v.residual;
    j["threshold"] = v.threshold;
    j["passed"] = v.passed;
    j["details"] = Json(v.details);
    return j;
}

inline Json report_to_json(const CovarianceReport& report, std::uint64_t seed) {
    Json j;
    j["suite"] = "verify";
    j["inputs"] = Json(report.inputs);
    Json verdicts = Json::array();
    for (const CheckVerdict& v : report.verdicts) verdicts.push_back(verdict_to_json(v));
    j["verdicts"] = std::move(verdicts);
    j["overall"] = report.overall;
    j["seed"] = seed;
    j["version"] = kVersion;
    return j;
}

inline std::string render_verify(const CovarianceReport& report, std::uint64_t seed, OutputFormat fmt) {
    std::ostringstream out;
    switch (fmt) {
        case OutputFormat::Json:
            out << report_to_json(report, seed).dump(2) << '\n';
            break;
        case OutputFormat::Csv:
            out << "name,residual,threshold,passed\n";
            for (const CheckVerdict& v : report.verdicts)
                out << v.name << ',' << detail::fmt_full(v.residual) << ',' << detail::fmt_full(v.threshold)
                    << ',' << (v.passed ? "true" : "false") << '\n';
            break;
        case OutputFormat::Table: {
            std::size_t width = 4;
            for (const CheckVerdict& v : report.verdicts) width = std::max(width, v.name.size());
            out << "check";
            out << std::string(width - 1, ' ') << "residual      threshold     status\n";
            for (const CheckVerdict& v : report.verdicts) {
                out << v.name << std::string(width + 4 - v.name.size(), ' ');
                std::string residual = detail::fmt_short(v.residual);
                residual.resize(14, ' ');
                std::string threshold = detail::fmt_short(v.threshold);
                threshold.resize(14, ' ');
                out << residual << threshold
                    << (is_inconclusive(v) ? "INCONCLUSIVE" : (v.passed ? "PASS" : "FAIL")) << '\n';
            }
            out << "overall: " << (report.overall ? "PASS" : "FAIL") << '\n';
            break;
        }
    }
    return out.str();
}

inline std::string render_matrix(const FrameMatrix& m, const BoostSpec& b, OutputFormat fmt) {
    std::ostringstream out;
    switch (fmt) {
        case OutputFormat::Json: {
            Json j;
            j["suite"] = "matrix";
            j["inputs"] = Json{{"kind", to_string(b.kind)}, {"v", {b.v.x, b.v.y, b.v.z}}, {"c", b.c}};
            Json rows = Json::array();
            for (int i = 0; i < 4; ++i) {
                Json row = Json::array();
                for (int j2 = 0; j2 < 4; ++j2) row.push_back(m(i, j2));
                rows.push_back(std::move(row));
            }
            j["matrix"] = std::move(rows);
            j["version"] = kVersion;
            out << j.dump(2) << '\n';
            break;
        }
        case OutputFormat::Csv:
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) out << (j ? "," : "") << detail::fmt_full(m(i, j));
                out << '\n';
            }
            break;
        case OutputFormat::Table:
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    std::string cell = detail::fmt_short(m(i, j));
                    cell.insert(0, cell.size() < 13 ? 13 - cell.size() : 0, ' ');
                    out << cell << (j == 3 ? "" : " ");
                }
                out << '\n';
            }
            break;
    }
    return out.str();
}

inline std::string render_order_scan(const OrderScanResult& r, const std::string& scan_name,
                                     const Json& inputs, const std::string& criterion, bool passed,
                                     OutputFormat fmt) {
    std::ostringstream out;
    switch (fmt) {
        case OutputFormat::Json: {
            Json j;
            j["suite"] = "order-scan";
            j["scan"] = scan_name;
            j["inputs"] = inputs;
            Json samples = Json::array();
            for (const OrderScanSample& s : r.samples)
                samples.push_back(Json{{"c", s.c}, {"residual", s.residual}});
            j["samples"] = std::move(samples);
            j["fitted_exponent"] = r.fitted_exponent;  // NaN serializes as null
            j["fit_quality"] = r.fit_quality;
            j["converged_to_zero"] = r.converged_to_zero;
            j["criterion"] = criterion;
            j["passed"] = passed;
            j["version"] = kVersion;
            out << j.dump(2) << '\n';
            break;
        }
        case OutputFormat::Csv:
            out << "c,residual\n";
            for (const OrderScanSample& s : r.samples)
                out << detail::fmt_full(s.c) << ',' << detail::fmt_full(s.residual) << '\n';
            break;
        case OutputFormat::Table:
            out << "c             residual\n";
            for (const OrderScanSample& s : r.samples) {
                std::string c = detail::fmt_short(s.c);
                c.resize(14, ' ');
                out << c << detail::fmt_short(s.residual) << '\n';
            }
            if (r.converged_to_zero)
                out << "fitted exponent: undefined (converged to machine zero)\n";
            else
                out << "fitted exponent: " << detail::fmt_short(r.fitted_exponent)
                    << "  fit quality: " << detail::fmt_short(r.fit_quality) << '\n';
            out << "criterion: " << criterion << '\n';
            out << (passed ? "PASS" : "FAIL") << '\n';
            break;
    }
    return out.str();
}

struct TwinPhaseRow {
    std::string spec;
    TwinPhaseResult result;
};

inline std::string render_twin_phase(const std::vector<TwinPhaseRow>& rows, double m,
                                     std::optional<double> difference, OutputFormat fmt) {
    std::ostringstream out;
    switch (fmt) {
        case OutputFormat::Json: {
            Json j;
            j["suite"] = "twin-phase";
            Json specs = Json::array();
            for (const TwinPhaseRow& r : rows) specs.push_back(r.spec);
            j["inputs"] = Json{{"m", m}, {"trajectories", std::move(specs)}};
            Json results = Json::array();
            for (const TwinPhaseRow& r : rows)
                results.push_back(Json{{"trajectory", r.spec},
                                       {"phi", r.result.phi},
                                       {"estimated_error", r.result.estimated_error},
                                       {"evaluations", r.result.evaluations}});
            j["results"] = std::move(results);
            if (difference) j["difference"] = *difference;
            j["version"] = kVersion;
            out << j.dump(2) << '\n';
            break;
        }
        case OutputFormat::Csv:
            out << "trajectory,phi,estimated_error,evaluations\n";
            for (const TwinPhaseRow& r : rows)
                out << r.spec << ',' << detail::fmt_full(r.result.phi) << ','
                    << detail::fmt_full(r.result.estimated_error) << ',' << r.result.evaluations << '\n';
            if (difference) out << "difference," << detail::fmt_full(*difference) << ",,\n";
            break;
        case OutputFormat::Table:
            for (const TwinPhaseRow& r : rows)
                out << r.spec << ": phi = " << detail::fmt_double(r.result.phi, "%.12g")
                    << "  (error estimate " << detail::fmt_short(r.result.estimated_error) << ", "
                    << r.result.evaluations << " evaluations)\n";
            if (difference) out << "difference: " << detail::fmt_double(*difference, "%.12g") << '\n';
            break;
    }
    return out.str();
}

}  // namespace schrocov
