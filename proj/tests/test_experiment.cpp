#include "frontrelax/errors.hpp"
#include "frontrelax/experiment.hpp"
#include "frontrelax/report.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace frontrelax;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("frontrelax_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config_error_path(const Json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.field_path();
    }
    return "";
}

void write_verdict(const fs::path& dir, const std::vector<bool>& checks) {
    fs::create_directories(dir);
    Json j{{"schema_version", kSchemaVersion}, {"kind", "profile_oracle"}, {"seed", 1}};
    Json arr = Json::array();
    for (std::size_t i = 0; i < checks.size(); ++i) {
        arr.push_back(to_json(make_check("c" + std::to_string(i), "p", checks[i] ? 0.0 : 2.0, 0.0, 1.0)));
    }
    j["checks"] = arr;
    std::ofstream(dir / "verdict.json") << j.dump();
}

}  // namespace

TEST_CASE("config defaults and overrides") {
    const ExperimentConfig c = parse_config(Json{{"kind", "relaxation_rates"}, {"seed", 42},
                                                 {"evolution", {{"final_time", 100.0}, {"sigma0", {{"width", 2.0}}}}}});
    CHECK(c.kind == "relaxation_rates");
    CHECK(c.seed == 42);
    CHECK(c.a == 0.25);
    CHECK(c.evolution.final_time == 100.0);
    CHECK(c.evolution.sigma0.width == 2.0);
    CHECK(c.evolution.sigma0.kind == "gaussian");
    CHECK(c.grid.y_nodes == 2048);
}

TEST_CASE("config errors carry the field path") {
    CHECK(config_error_path(Json::object()) == "kind");
    CHECK(config_error_path(Json{{"kind", "nope"}}) == "kind");
    CHECK(config_error_path(Json{{"kind", "profile_oracle"}, {"bogus", 1}}) == "bogus");
    CHECK(config_error_path(Json{{"kind", "profile_oracle"}, {"evolution", {{"dtt", 0.1}}}}) == "evolution.dtt");
    CHECK(config_error_path(Json{{"kind", "profile_oracle"}, {"evolution", {{"dt", "x"}}}}) == "evolution.dt");
    CHECK(config_error_path(Json{{"kind", "profile_oracle"}, {"model", {{"a", 0.7}}}}) == "model.a");
    CHECK(config_error_path(Json{{"kind", "profile_oracle"}, {"grid", {{"y_nodes", 1000}}}}) == "grid.y_nodes");
    CHECK(config_error_path(Json{{"kind", "profile_oracle"}, {"schema_version", 2}}) == "schema_version");
    CHECK(config_error_path(Json{{"kind", "profile_oracle"}, {"seed", -1}}) == "seed");
    CHECK(config_error_path(Json{{"kind", "profile_oracle"}, {"profile_oracle", {{"a_values", {0.1, "x"}}}}}) ==
          "profile_oracle.a_values[1]");
    CHECK(config_error_path(Json{{"kind", "profile_oracle"},
                                 {"evolution", {{"sigma0", {{"kind", "square"}}}}}}) == "evolution.sigma0.kind");
    CHECK(config_error_path(Json{{"kind", "profile_oracle"}, {"evolution", {{"epsilon", 0.2}}}}) ==
          "evolution.epsilon");
}

TEST_CASE("shipped configs parse") {
    const fs::path dir = fs::path(FRONTRELAX_SOURCE_DIR) / "configs";
    int count = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".json") continue;
        CHECK_NOTHROW(load_config(e.path()));
        ++count;
    }
    CHECK(count >= 7);
}

TEST_CASE("checks and spreads") {
    CHECK(make_check("x", "p", 1.0, 0.0, 1.0).passed);
    CHECK_FALSE(make_check("x", "p", 1.0 + 1e-12, 0.0, 1.0).passed);
    CHECK_FALSE(make_check("x", "p", std::nan(""), -1e300, 1e300).passed);
    CHECK(median_spread({1.0, 2.0, 4.0}) == doctest::Approx(2.0));
    CHECK(median_spread({3.0, 3.0}) == doctest::Approx(1.0));
    CHECK(median_spread({0.5, 1.0, 1.0, 3.0}) == doctest::Approx(3.0));
}

TEST_CASE("report counting") {
    const fs::path root = scratch("report");
    CHECK_THROWS_AS(emit_report(root), ReportError);

    write_verdict(root / "a", {true, true});
    ReportSummary s = emit_report(root);
    CHECK(s.runs_passed == 1);
    CHECK(s.runs_failed == 0);
    CHECK(s.checks_passed == 2);
    CHECK(fs::exists(root / "summary.json"));
    CHECK(fs::exists(root / "summary.txt"));

    write_verdict(root / "b", {true, false, false});
    write_verdict(root / "c", {false});
    fs::create_directories(root / "d");
    std::ofstream(root / "d" / "error.json") << Json{{"kind", "spectral_report"},
                                                     {"error", {{"type", "AssumptionViolation"}, {"message", "m"}}}}.dump();
    s = emit_report(root);
    CHECK(s.runs_passed == 1);
    CHECK(s.runs_failed == 3);
    CHECK(s.checks_passed == 3);
    CHECK(s.checks_failed == 3);

    fs::create_directories(root / "e");
    std::ofstream(root / "e" / "ledger.csv") << "t\n";
    try {
        emit_report(root);
        FAIL("expected a report error");
    } catch (const ReportError& e) {
        CHECK(std::string(e.what()).find("e") != std::string::npos);
    }
}

TEST_CASE("integral lemma run writes a reproducible verdict") {
    const fs::path root = scratch("integrals");
    ExperimentConfig cfg = parse_config(Json{{"kind", "integral_lemmas"}, {"seed", 3}});
    cfg.output_dir = (root / "one").string();
    CHECK(run_experiment(cfg) == 0);
    cfg.output_dir = (root / "two").string();
    CHECK(run_experiment(cfg) == 0);
    const std::string a = slurp(root / "one" / "verdict.json");
    CHECK(a == slurp(root / "two" / "verdict.json"));
    CHECK(slurp(root / "one" / "integral_bounds.csv") == slurp(root / "two" / "integral_bounds.csv"));
    const Json j = Json::parse(a);
    CHECK(j.at("schema_version") == kSchemaVersion);
    CHECK(j.at("seed") == 3);
    CHECK(j.at("passed") == true);
}

TEST_CASE("module errors become a structured error record") {
    const fs::path root = scratch("error");
    ExperimentConfig cfg = parse_config(Json{{"kind", "relaxation_rates"},
                                             {"grid", {{"y_half_length", 30.0}, {"y_nodes", 64}, {"z_nodes", 64},
                                                       {"z_half_length", 16.0}}}});
    cfg.output_dir = root.string();
    CHECK(run_experiment(cfg) == 2);
    const Json j = Json::parse(slurp(root / "error.json"));
    CHECK(j.at("error").at("type") == "ValidityError");
    CHECK(j.at("schema_version") == kSchemaVersion);
}

TEST_CASE("profile oracle experiment") {
    const fs::path root = scratch("profile");
    ExperimentConfig cfg = parse_config(Json{{"kind", "profile_oracle"},
                                             {"grid", {{"z_half_length", 30.0}, {"z_nodes", 1024}}},
                                             {"profile_oracle", {{"a_values", {0.25}}}}});
    cfg.output_dir = root.string();
    CHECK(run_experiment(cfg) == 0);
    const Json j = Json::parse(slurp(root / "verdict.json"));
    const double c = j.at("details").at("profiles").at(0).at("speed_extrapolated");
    CHECK(std::abs(c - std::sqrt(2.0) / 4.0) <= 1e-6);
}
