#include "runner.hpp"

#include "expression.hpp"

#include "discenv/envelope.hpp"
#include "discenv/error.hpp"
#include "discenv/hartogs.hpp"
#include "discenv/oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

namespace discenv::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// RFC 4180 quoting.
std::string field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string point_text(PointView p) {
    std::string out;
    for (std::size_t c = 0; c < p.size(); ++c) {
        if (c) out += "; ";
        out += num(p[c].real()) + (p[c].imag() < 0 ? "-" : "+") + num(std::abs(p[c].imag())) + "i";
    }
    return out;
}

/// Files are assembled in memory and committed only when the whole run succeeded.
class Outputs {
public:
    void add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }

    void commit(const fs::path& dir) const {
        fs::create_directories(dir);
        for (const auto& [name, content] : files_) {
            const fs::path target = dir / name;
            const fs::path tmp = dir / ("." + name + ".tmp");
            {
                std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
                out << content;
                if (!out) throw std::runtime_error("cannot write " + tmp.string());
            }
            fs::rename(tmp, target);
        }
    }

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

struct Check {
    std::string name;
    bool passed;
    std::string detail;
};

Json checks_json(const std::vector<Check>& checks) {
    Json out = Json::array();
    for (const auto& c : checks) out.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return out;
}

bool all_passed(const std::vector<Check>& checks) {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

Json metadata(const Json& cfg) {
    const EnvelopeRequest defaults{planar_annulus_pair(), obstacles::constant(0.0), Point{0.0}, {}};
    return {{"version", kVersion},
            {"seed", cfg["seed"]},
            {"quadrature", cfg["quadrature"]},
            {"defaults",
             {{"feasibility_tol", defaults.feasibility_tol},
              {"margin_offset", defaults.margin_offset},
              {"refine_factor", defaults.refine_factor},
              {"quadrature_tol", defaults.quadrature_tol},
              {"probe_radii", defaults.probe_radii},
              {"probe_angles", defaults.probe_angles}}}};
}

// ---------------------------------------------------------------------------
// Pointwise commands: envelope, oracle, compare
// ---------------------------------------------------------------------------

struct Row {
    Point point;
    double envelope = NAN;
    double oracle = NAN;
    double gap = NAN;
    bool feasible = true;
    double max_violation = 0.0;
    std::string family;
    std::vector<double> params;
    std::vector<double> trace;
    double runtime = 0.0;
};

class OracleEvaluator {
public:
    OracleEvaluator(const Json& cfg, const DomainPair& pair, const Obstacle& phi, Outputs& outputs) : phi_(phi) {
        const Json& o = cfg["oracle"];
        type_ = o["type"];
        if (type_ == "closed_form") {
            expr_ = std::make_unique<Expression>(o["expression"].get<std::string>(), coordinate_names(pair.dim()));
        } else if (type_ == "grid") {
            ObstacleSolverConfig gc;
            gc.spacing = o["spacing"];
            if (!o["half_width"].is_null()) gc.half_width = o["half_width"].get<double>();
            gc.tolerance = o["tolerance"];
            gc.max_sweeps = o["max_sweeps"];
            gc.richardson = o["richardson"];
            auto sol = grid_obstacle_solver(pair, phi, o["caps"].get<std::vector<double>>(), gc);
            std::ostringstream csv;
            sol.field.write_csv(csv);
            outputs.add("grid_field.csv", csv.str());
            grid_info_ = {{"caps", sol.caps},
                          {"obstacle_sup", sol.obstacle_sup},
                          {"sweeps", sol.sweeps},
                          {"richardson_difference", sol.richardson_difference},
                          {"richardson_estimate", sol.richardson_estimate}};
            field_ = std::make_unique<GridField>(std::move(sol.field));
        } else if (type_ == "kiselman") {
            hartogs_ = std::make_unique<HartogsPair>(build_hartogs(cfg["pair"]));
            resolution_ = o["resolution"];
        }
    }

    double operator()(PointView x) const {
        if (expr_) return expr_->real(x);
        if (field_) return field_->interpolate(x[0]);
        return kiselman_psi(*hartogs_, phi_, x.first(x.size() - 1), resolution_).value;
    }

    const Json& grid_info() const { return grid_info_; }

private:
    std::string type_;
    Obstacle phi_;
    std::unique_ptr<Expression> expr_;
    std::unique_ptr<GridField> field_;
    std::unique_ptr<HartogsPair> hartogs_;
    std::size_t resolution_ = 2000;
    Json grid_info_ = nullptr;
};

int run_pointwise(Command command, const Json& cfg, Outputs& outputs, Json& report, bool quiet, std::ostream& log) {
    const bool with_envelope = command != Command::Oracle;
    const bool with_oracle = command != Command::Envelope;
    const DomainPair pair = build_pair(cfg["pair"]);
    const Obstacle phi = build_obstacle(cfg["obstacle"], cfg["pair"]);
    const auto points = build_points(cfg["points"]);

    std::unique_ptr<OracleEvaluator> oracle;
    if (with_oracle) oracle = std::make_unique<OracleEvaluator>(cfg, pair, phi, outputs);

    std::vector<Row> rows;
    for (std::size_t i = 0; i < points.size(); ++i) {
        Row row;
        row.point = points[i];
        const auto t0 = std::chrono::steady_clock::now();
        if (with_envelope) {
            EnvelopeRequest req{pair, phi, points[i], build_families(cfg["families"], pair, points[i])};
            req.grid = QuadratureGrid(cfg["quadrature"].get<std::size_t>());
            req.starts = cfg["starts"];
            req.budget = cfg["budget"];
            req.seed = cfg["seed"];
            req.penalty_weight = cfg["penalty_weight"];
            const auto r = minimize_envelope(req);
            row.envelope = r.value;
            row.feasible = r.feasible;
            row.max_violation = r.max_violation;
            row.family = r.family;
            row.params = r.params;
            row.trace = r.trace;
        }
        if (with_oracle) row.oracle = (*oracle)(points[i]);
        if (with_envelope && with_oracle) row.gap = row.envelope - row.oracle;
        row.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!quiet) {
            log << "point " << i << " (" << point_text(row.point) << "):";
            if (with_envelope) log << " envelope " << num(row.envelope);
            if (with_oracle) log << " oracle " << num(row.oracle);
            log << "\n";
        }
        rows.push_back(std::move(row));
    }

    std::vector<Check> checks;
    bool infeasible = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (with_envelope && !r.feasible) {
            infeasible = true;
            checks.push_back({"feasible[" + std::to_string(i) + "]", false,
                              "max violation " + num(r.max_violation)});
        }
        if (with_envelope && with_oracle) {
            const double tol = cfg["tolerances"]["gap"];
            checks.push_back({"gap[" + std::to_string(i) + "]", std::abs(r.gap) <= tol,
                              "|" + num(r.gap) + "| <= " + num(tol)});
        }
    }

    std::ostringstream csv;
    csv << "index,point,envelope,oracle,gap,feasible,max_violation,family\r\n";
    Json jrows = Json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        auto opt = [](double v) { return std::isnan(v) ? std::string() : num(v); };
        csv << i << ',' << field(point_text(r.point)) << ',' << opt(r.envelope) << ',' << opt(r.oracle) << ','
            << opt(r.gap) << ',' << (with_envelope ? (r.feasible ? "true" : "false") : "") << ','
            << (with_envelope ? num(r.max_violation) : "") << ',' << field(r.family) << "\r\n";
        Json jr = {{"point", point_to_json(r.point)}, {"runtime_seconds", r.runtime}};
        if (with_envelope) {
            jr["envelope"] = r.envelope;
            jr["feasible"] = r.feasible;
            jr["max_violation"] = r.max_violation;
            jr["family"] = r.family;
            jr["params"] = r.params;
            jr["trace"] = r.trace;
        }
        if (with_oracle) jr["oracle"] = r.oracle;
        if (with_envelope && with_oracle) jr["gap"] = r.gap;
        jrows.push_back(std::move(jr));
    }
    outputs.add("results.csv", csv.str());
    report["rows"] = jrows;
    if (oracle && !oracle->grid_info().is_null()) report["grid"] = oracle->grid_info();
    report["checks"] = checks_json(checks);
    report["passed"] = all_passed(checks);
    if (infeasible) return kExitInfeasible;
    return all_passed(checks) ? kExitOk : kExitTolerance;
}

// ---------------------------------------------------------------------------
// Homotopy and Cesaro
// ---------------------------------------------------------------------------

std::vector<Expression> compile(const Json& sources, const std::vector<std::string>& vars) {
    std::vector<Expression> out;
    for (const auto& s : sources) out.emplace_back(s.get<std::string>(), vars);
    return out;
}

int run_homotopy(const Json& cfg, Outputs& outputs, Json& report) {
    const HartogsPair pair = build_hartogs(cfg["pair"]);
    const Json& h = cfg["homotopy"];
    const auto comps = compile(h["disc"], {"zeta"});
    const AnalyticDisc f = disc_from_function(pair.dim(), h["samples"].get<std::size_t>(),
                                              [&](Complex zeta, std::span<Complex> out) {
                                                  const Complex v[1] = {zeta};
                                                  for (std::size_t c = 0; c < comps.size(); ++c) out[c] = comps[c](v);
                                              });
    const auto trace = homotopy_trace(pair, f, h["steps"].get<std::size_t>());

    const double tol_centre = cfg["tolerances"]["centre"], tol_modulus = cfg["tolerances"]["modulus"];
    double worst_centre = 0.0, worst_modulus = 0.0, min_margin = INFINITY;
    bool constant_winding = true;
    std::ostringstream csv;
    csv << "t,min_margin,centre_deviation,winding,modulus_error\r\n";
    Json steps = Json::array();
    for (const auto& s : trace.steps) {
        worst_centre = std::max(worst_centre, s.centre_deviation);
        worst_modulus = std::max(worst_modulus, s.modulus_error);
        min_margin = std::min(min_margin, s.min_margin);
        constant_winding = constant_winding && s.winding == trace.steps.front().winding;
        csv << num(s.t) << ',' << num(s.min_margin) << ',' << num(s.centre_deviation) << ',' << s.winding << ','
            << num(s.modulus_error) << "\r\n";
        steps.push_back({{"t", s.t},
                         {"min_margin", s.min_margin},
                         {"centre_deviation", s.centre_deviation},
                         {"winding", s.winding},
                         {"modulus_error", s.modulus_error}});
    }
    const std::vector<Check> checks{
        {"centre_deviation", worst_centre <= tol_centre, num(worst_centre) + " <= " + num(tol_centre)},
        {"boundary_in_W", min_margin > 0.0, "min margin " + num(min_margin)},
        {"winding_constant", constant_winding, "winding " + std::to_string(trace.steps.front().winding)},
        {"modulus", worst_modulus <= tol_modulus, num(worst_modulus) + " <= " + num(tol_modulus)},
    };
    std::ostringstream js;
    trace.write_json(js);
    outputs.add("results.csv", csv.str());
    outputs.add("homotopy_trace.json", js.str());
    report["steps"] = steps;
    report["holomorphy_residual"] = f.holomorphy_residual();
    report["checks"] = checks_json(checks);
    report["passed"] = all_passed(checks);
    return all_passed(checks) ? kExitOk : kExitTolerance;
}

int run_cesaro(const Json& cfg, Outputs& outputs, Json& report) {
    const Json& c = cfg["cesaro"];
    const auto comps = compile(c["loop"], {"zeta", "w"});
    const std::size_t mw = c["w_samples"], mz = c["z_samples"], n = comps.size();
    std::vector<AnalyticDisc> slices;
    std::vector<std::vector<Complex>> centre(n, std::vector<Complex>(mw));
    for (std::size_t l = 0; l < mw; ++l) {
        const Complex w = unit_root(l, mw);
        slices.push_back(disc_from_function(n, mz, [&](Complex zeta, std::span<Complex> out) {
            const Complex v[2] = {zeta, w};
            for (std::size_t k = 0; k < n; ++k) out[k] = comps[k](v);
        }));
        const Complex v0[2] = {0.0, w};
        for (std::size_t k = 0; k < n; ++k) centre[k][l] = comps[k](v0);
    }
    const DiscLoop loop(std::move(slices));
    const AnalyticDisc h = disc_from_samples(centre);

    std::ostringstream csv;
    csv << "order,sup_error\r\n";
    Json errors = Json::array();
    std::vector<double> errs;
    for (const auto& j : c["orders"]) {
        const double e = sup_distance(cesaro_mean(loop, h, j.get<std::size_t>()), loop);
        errs.push_back(e);
        csv << j.get<std::size_t>() << ',' << num(e) << "\r\n";
        errors.push_back({{"order", j}, {"sup_error", e}});
    }
    const double tol = cfg["tolerances"]["cesaro"];
    const std::vector<Check> checks{
        {"improves", errs.back() < errs.front(), num(errs.back()) + " < " + num(errs.front())},
        {"converged", errs.back() < tol, num(errs.back()) + " < " + num(tol)},
    };
    outputs.add("results.csv", csv.str());
    report["errors"] = errors;
    report["loop_holomorphy_residual"] = loop.max_holomorphy_residual();
    report["checks"] = checks_json(checks);
    report["passed"] = all_passed(checks);
    return all_passed(checks) ? kExitOk : kExitTolerance;
}

}  // namespace

int run_command(Command command, const RunOptions& options, std::ostream& log) {
    Json cfg;
    try {
        ConfigSource src = load_config(options.config_path);
        if (src.doc.is_object()) {
            if (options.seed) src.doc["seed"] = *options.seed;
            if (options.out_dir) src.doc["output"] = *options.out_dir;
        }
        cfg = effective_config(src, command);
    } catch (const SchemaError& e) {
        log << "error: " << e.what() << "\n";
        return kExitSchema;
    }

    Outputs outputs;
    Json report = {{"command", command_name(command)}, {"config", cfg}, {"metadata", metadata(cfg)}};
    int code = kExitOk;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        switch (command) {
            case Command::Homotopy: code = run_homotopy(cfg, outputs, report); break;
            case Command::Cesaro: code = run_cesaro(cfg, outputs, report); break;
            default: code = run_pointwise(command, cfg, outputs, report, options.quiet, log); break;
        }
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitComputation;
    }
    report["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report["exit_code"] = code;
    outputs.add("report.json", report.dump(2) + "\n");
    try {
        outputs.commit(cfg["output"].get<std::string>());
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitComputation;
    }
    if (!options.quiet) {
        for (const auto& c : report["checks"])
            log << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << ": "
                << c["detail"].get<std::string>() << "\n";
        log << "wrote " << cfg["output"].get<std::string>() << "/report.json\n";
    }
    return code;
}

int emit_plot(const std::string& report_path, const std::string& kind, const std::optional<std::string>& out,
              std::size_t point, std::ostream& log) {
    if (kind != "profile" && kind != "convergence" && kind != "homotopy") {
        log << "error: unknown plot kind \"" << kind << "\" (expected profile, convergence or homotopy)\n";
        return kExitSchema;
    }
    Json report;
    {
        std::ifstream in(report_path);
        if (!in) {
            log << "error: cannot read " << report_path << "\n";
            return kExitSchema;
        }
        try {
            in >> report;
        } catch (const Json::exception& e) {
            log << "error: " << report_path << ": " << e.what() << "\n";
            return kExitSchema;
        }
    }
    auto missing = [&](const std::string& what) {
        log << "error: " << report_path << " has no " << what << "\n";
        return kExitSchema;
    };
    auto value = [](const Json& j, const char* key) {
        return j.contains(key) && j[key].is_number() ? num(j[key].get<double>()) : std::string();
    };

    std::ostringstream csv;
    if (kind == "profile") {
        if (!report.contains("rows")) return missing("per-point rows");
        csv << "# columns: x (real part of the first coordinate), envelope, oracle, gap\r\n";
        csv << "x,envelope,oracle,gap\r\n";
        for (const auto& r : report["rows"])
            csv << num(r["point"][0][0].get<double>()) << ',' << value(r, "envelope") << ',' << value(r, "oracle")
                << ',' << value(r, "gap") << "\r\n";
    } else if (kind == "convergence") {
        if (!report.contains("rows") || point >= report["rows"].size() || !report["rows"][point].contains("trace"))
            return missing("envelope trace for point " + std::to_string(point));
        csv << "# columns: iteration, best_value (best penalized objective of the reported start)\r\n";
        csv << "iteration,best_value\r\n";
        const auto& tr = report["rows"][point]["trace"];
        for (std::size_t k = 0; k < tr.size(); ++k) csv << k << ',' << num(tr[k].get<double>()) << "\r\n";
    } else {
        if (!report.contains("steps")) return missing("homotopy trace");
        csv << "# columns: t, min_margin (smallest W-margin of the boundary), winding\r\n";
        csv << "t,min_margin,winding\r\n";
        for (const auto& s : report["steps"])
            csv << num(s["t"].get<double>()) << ',' << num(s["min_margin"].get<double>()) << ','
                << s["winding"].get<int>() << "\r\n";
    }
    const fs::path target = out ? fs::path(*out) : fs::path(report_path).parent_path() / ("plot_" + kind + ".csv");
    Outputs o;
    o.add(target.filename().string(), csv.str());
    try {
        o.commit(target.parent_path().empty() ? fs::path(".") : target.parent_path());
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitComputation;
    }
    return kExitOk;
}

}  // namespace discenv::cli
