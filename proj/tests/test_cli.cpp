#include "config.hpp"
#include "expression.hpp"
#include "runner.hpp"

#include "discenv/error.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace discenv;
using namespace discenv::cli;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        std::random_device rd;
        dir = fs::temp_directory_path() / ("discenv-cli-" + std::to_string(rd()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    }
    std::string out(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const char* kAnnulus = R"j({
  "experiment": "annulus",
  "pair": {"type": "planar_annulus"},
  "obstacle": {"builtin": "log_abs_last", "lower": 0, "upper": 0.6931471805599453},
  "points": [[0.0], [0.5], [1.25], [1.9]],
  "quadrature": 128,
  "starts": 3,
  "budget": 400,
  "oracle": {"type": "closed_form", "expression": "max(log(abs(z1)), 0)"}
})j";

int run(Command c, const std::string& config, const std::string& out, std::ostream& log,
        std::optional<std::uint64_t> seed = {}) {
    RunOptions o;
    o.config_path = config;
    o.out_dir = out;
    o.seed = seed;
    o.quiet = true;
    return run_command(c, o, log);
}

}  // namespace

TEST_CASE("expression grammar") {
    const Expression e("Re(z1) + 2*Im(z2)^2 - abs(z1)/4 + max(log(abs(z2)), -1)", coordinate_names(2));
    const Complex v[2] = {Complex(0.6, 0.8), Complex(0.0, 0.5)};
    CHECK(e.real(v) == doctest::Approx(0.6 + 0.5 - 0.25 + std::log(0.5)).epsilon(1e-15));
    const Expression h("exp(i*pi*zeta) * (zeta - 0.5)^-1", {"zeta"});
    const Complex z[1] = {Complex(1.0, 0.0)};
    CHECK(std::abs(h(z) - Complex(-2.0, 0.0)) < 1e-14);
    CHECK(Expression("-z1^2", coordinate_names(1)).real(std::array<Complex, 1>{3.0}) == -9.0);
    CHECK(Expression("min(2, 3) - -1", {}).real(std::span<const Complex>{}) == 3.0);
    CHECK(std::isinf(Expression("log(abs(z1))", coordinate_names(1)).real(std::array<Complex, 1>{0.0})));

    for (const char* bad : {"Re(z1", "z3", "sin(z1)", "z1 ^ 1.5", "max(z1)", "2 +", "z1 $ 2"}) {
        CHECK_THROWS_AS(Expression(bad, coordinate_names(2)), ConfigError);
    }
    try {
        Expression("z1 + foo", coordinate_names(1));
        FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
        CHECK(std::string(err.what()).find("column 6") != std::string::npos);
    }
    CHECK_THROWS_AS(Expression("z1", coordinate_names(1)).real(std::array<Complex, 1>{Complex(0, 1)}),
                    EvaluationError);
}

TEST_CASE("config parser records source lines") {
    const auto src = parse_config("{\n  \"a\": 1,\n  \"b\": {\n    \"c\": [1,\n 2]\n  }\n}", "cfg");
    CHECK(src.line_of("/a") == 2);
    CHECK(src.line_of("/b") == 3);
    CHECK(src.line_of("/b/c") == 4);
    CHECK(src.line_of("/b/c/1") == 5);
    CHECK(src.line_of("/b/c/7") == 4);
    CHECK_THROWS_AS(parse_config("{\"a\": }", "cfg"), SchemaError);
}

TEST_CASE("effective config fills defaults and rejects unknown keys") {
    const auto src = parse_config(kAnnulus, "ann");
    const Json cfg = effective_config(src, Command::Compare);
    CHECK(cfg["seed"] == 1);
    CHECK(cfg["families"] == "default");
    CHECK(cfg["tolerances"]["gap"] == 2e-2);
    CHECK(cfg["points"][2] == Json::array({Json::array({1.25, 0.0})}));
    // The effective config is a fixed point.
    CHECK(effective_config(parse_config(cfg.dump(), "eff"), Command::Compare) == cfg);

    std::string text = kAnnulus;
    text.replace(text.find("\"starts\""), 8, "\"strats\"");
    try {
        effective_config(parse_config(text, "typo.json"), Command::Compare);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).rfind("typo.json:7: /strats: unknown key", 0) == 0);
    }
    CHECK_THROWS_AS(effective_config(src, Command::Homotopy), SchemaError);
}

TEST_CASE("family names") {
    CHECK(parse_family("blaschke3").tag() == "blaschke3");
    CHECK(parse_family("vertical2").tag() == "vertical2");
    CHECK(parse_family("polynomial1").tag() == "polynomial1");
    for (const char* bad : {"blaschke", "blaschke0", "Blaschke1", "shell2", "poly2", "vertical-1"})
        CHECK_THROWS_AS(parse_family(bad), ConfigError);
}

TEST_CASE("compare on the annulus matches the closed form and is reproducible") {
    Scratch s;
    std::ostringstream log;
    const auto cfg = s.write("ann.json", kAnnulus);
    REQUIRE(run(Command::Compare, cfg, s.out("a"), log) == kExitOk);
    const Json report = Json::parse(slurp(s.dir / "a" / "report.json"));
    for (const auto& row : report["rows"]) {
        CHECK(row["feasible"] == true);
        CHECK(std::abs(row["gap"].get<double>()) <= 2e-2);
        CHECK(row["gap"].get<double>() >= -1e-9);
    }
    const std::string csv = slurp(s.dir / "a" / "results.csv");
    CHECK(csv.rfind("index,point,envelope,oracle,gap,feasible,max_violation,family\r\n", 0) == 0);

    REQUIRE(run(Command::Compare, cfg, s.out("b"), log) == kExitOk);
    CHECK(slurp(s.dir / "b" / "results.csv") == csv);

    // Re-running from the embedded effective config reproduces the results.
    const auto eff = s.write("eff.json", report["config"].dump());
    REQUIRE(run(Command::Compare, eff, s.out("c"), log) == kExitOk);
    CHECK(slurp(s.dir / "c" / "results.csv") == csv);

    // A seed override lands in the embedded config.
    REQUIRE(run(Command::Compare, cfg, s.out("d"), log, 5) == kExitOk);
    CHECK(Json::parse(slurp(s.dir / "d" / "report.json"))["config"]["seed"] == 5);
}

TEST_CASE("schema violations exit 2 without outputs") {
    Scratch s;
    std::ostringstream log;
    std::string text = kAnnulus;
    text.replace(text.find("\"quadrature\""), 0, "\"families\": [\"constant\", \"blaschk1\"],\n  ");
    REQUIRE(run(Command::Envelope, s.write("fam.json", text), s.out("f"), log) == kExitSchema);
    CHECK_FALSE(fs::exists(s.dir / "f"));
    CHECK(log.str().find("fam.json:6: /families/1: unknown family \"blaschk1\"") != std::string::npos);

    text = kAnnulus;
    text.replace(text.find("[1.9]"), 5, "[2.5]");
    REQUIRE(run(Command::Envelope, s.write("pt.json", text), s.out("p"), log) == kExitSchema);
    CHECK_FALSE(fs::exists(s.dir / "p"));
    CHECK(log.str().find("/points/3: point lies outside X") != std::string::npos);

    REQUIRE(run(Command::Envelope, s.write("junk.json", "{\"experiment\": 3"), s.out("j"), log) == kExitSchema);
    CHECK_FALSE(fs::exists(s.dir / "j"));
}

TEST_CASE("infeasible envelope exits 3") {
    Scratch s;
    std::ostringstream log;
    std::string text = kAnnulus;
    text.replace(text.find("\"quadrature\""), 0, "\"families\": [\"constant\"],\n  ");
    CHECK(run(Command::Compare, s.write("inf.json", text), s.out("i"), log) == kExitInfeasible);
    const Json report = Json::parse(slurp(s.dir / "i" / "report.json"));
    CHECK(report["rows"][0]["feasible"] == false);
    CHECK(report["passed"] == false);
}

TEST_CASE("tolerance failure exits 1") {
    Scratch s;
    std::ostringstream log;
    std::string text = kAnnulus;
    text.replace(text.find("max(log(abs(z1)), 0)"), 20, "max(log(abs(z1)), 0) + 0.5");
    CHECK(run(Command::Compare, s.write("tol.json", text), s.out("t"), log) == kExitTolerance);
    CHECK(fs::exists(s.dir / "t" / "results.csv"));
}

TEST_CASE("grid oracle writes the field") {
    Scratch s;
    std::ostringstream log;
    const auto cfg = s.write("grid.json", R"j({
      "experiment": "grid",
      "pair": {"type": "planar_annulus"},
      "obstacle": {"builtin": "log_abs_last", "lower": 0, "upper": 0.6931471805599453},
      "points": [[0.0], [1.5]],
      "oracle": {"type": "grid", "spacing": 0.03125}
    })j");
    REQUIRE(run(Command::Oracle, cfg, s.out("g"), log) == kExitOk);
    CHECK(slurp(s.dir / "g" / "grid_field.csv").rfind("x,y,value,mask\n", 0) == 0);
    const Json report = Json::parse(slurp(s.dir / "g" / "report.json"));
    CHECK(std::abs(report["rows"][0]["oracle"].get<double>()) <= 2e-2);
    CHECK(std::abs(report["rows"][1]["oracle"].get<double>() - std::log(1.5)) <= 2e-2);
    CHECK_FALSE(report["rows"][0].contains("envelope"));
}

TEST_CASE("homotopy and plot data") {
    Scratch s;
    std::ostringstream log;
    const auto cfg = s.write("hom.json", R"j({
      "experiment": "homotopy",
      "pair": {"type": "hartogs", "r": 0.25, "R": 1},
      "homotopy": {"disc": ["0.2 + 0.3*zeta", "0.5*(zeta - 0.3)/(1 - 0.3*zeta)*exp(0.1*zeta)"], "steps": 8}
    })j");
    REQUIRE(run(Command::Homotopy, cfg, s.out("h"), log) == kExitOk);
    const Json report = Json::parse(slurp(s.dir / "h" / "report.json"));
    CHECK(report["steps"].size() == 9);
    CHECK(report["steps"][4]["winding"] == 1);
    CHECK(fs::exists(s.dir / "h" / "homotopy_trace.json"));

    const std::string rep = (s.dir / "h" / "report.json").string();
    REQUIRE(emit_plot(rep, "homotopy", std::nullopt, 0, log) == kExitOk);
    std::istringstream plot(slurp(s.dir / "h" / "plot_homotopy.csv"));
    std::string line;
    std::getline(plot, line);
    CHECK(line.rfind("# columns: t, min_margin", 0) == 0);
    std::getline(plot, line);
    CHECK(line == "t,min_margin,winding\r");
    std::size_t rows = 0;
    while (std::getline(plot, line)) ++rows;
    CHECK(rows == 9);

    CHECK(emit_plot(rep, "scatter", std::nullopt, 0, log) == kExitSchema);
    CHECK(emit_plot(rep, "profile", std::nullopt, 0, log) == kExitSchema);
}

TEST_CASE("profile and convergence plots from an envelope run") {
    Scratch s;
    std::ostringstream log;
    REQUIRE(run(Command::Compare, s.write("ann.json", kAnnulus), s.out("a"), log) == kExitOk);
    const std::string rep = (s.dir / "a" / "report.json").string();
    REQUIRE(emit_plot(rep, "profile", s.out("profile.csv"), 0, log) == kExitOk);
    std::istringstream prof(slurp(s.dir / "profile.csv"));
    std::string line;
    std::getline(prof, line);
    std::getline(prof, line);
    CHECK(line == "x,envelope,oracle,gap\r");
    std::getline(prof, line);
    CHECK(line.rfind("0,", 0) == 0);

    REQUIRE(emit_plot(rep, "convergence", s.out("conv.csv"), 1, log) == kExitOk);
    std::istringstream conv(slurp(s.dir / "conv.csv"));
    std::getline(conv, line);
    std::getline(conv, line);
    CHECK(line == "iteration,best_value\r");
    double prev = INFINITY;
    while (std::getline(conv, line)) {
        const double v = std::stod(line.substr(line.find(',') + 1));
        CHECK(v <= prev);
        prev = v;
    }
    CHECK(emit_plot(rep, "convergence", std::nullopt, 99, log) == kExitSchema);
}

TEST_CASE("cesaro command") {
    Scratch s;
    std::ostringstream log;
    const auto cfg = s.write("ces.json", R"j({
      "experiment": "cesaro",
      "cesaro": {"loop": ["0.1*w + 0.05*zeta*exp(0.2*Re(w))", "zeta*(0.5 + 0.02*w^2) + 0.01*Im(w)"]}
    })j");
    REQUIRE(run(Command::Cesaro, cfg, s.out("c"), log) == kExitOk);
    const Json report = Json::parse(slurp(s.dir / "c" / "report.json"));
    const auto& errs = report["errors"];
    REQUIRE(errs.size() == 6);
    for (std::size_t k = 1; k < errs.size(); ++k)
        CHECK(errs[k]["sup_error"].get<double>() < errs[k - 1]["sup_error"].get<double>());

    const auto bad = s.write("ces_bad.json", R"j({
      "experiment": "cesaro",
      "cesaro": {"loop": ["w"], "w_samples": 512}
    })j");
    CHECK(run(Command::Cesaro, bad, s.out("x"), log) == kExitSchema);
}
