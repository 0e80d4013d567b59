#include "frontrelax/report.hpp"

#include "frontrelax/errors.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace frontrelax {

namespace fs = std::filesystem;

namespace {

Json read_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ReportError("cannot read " + p.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ReportError("malformed " + p.string() + ": " + e.what());
    }
}

bool is_summary(const fs::path& p) {
    const auto name = p.filename().string();
    return name == "summary.json" || name == "summary.txt";
}

std::string format_value(const Json& v) {
    if (v.is_null()) return "-";
    std::ostringstream os;
    os << std::setprecision(4) << v.get<double>();
    return os.str();
}

}  // namespace

ReportSummary collect_report(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw ReportError("not a directory: " + dir.string());

    // Directories with artifacts, and which of them carry a record.
    std::vector<fs::path> artifact_dirs;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file() || is_summary(entry.path())) continue;
        const auto ext = entry.path().extension();
        if (ext != ".csv" && ext != ".json") continue;
        const fs::path parent = entry.path().parent_path();
        if (std::find(artifact_dirs.begin(), artifact_dirs.end(), parent) == artifact_dirs.end()) {
            artifact_dirs.push_back(parent);
        }
    }
    std::sort(artifact_dirs.begin(), artifact_dirs.end());
    if (artifact_dirs.empty()) throw ReportError("no run artifacts under " + dir.string());

    ReportSummary out;
    std::vector<std::string> gaps;
    Json runs = Json::array();
    std::ostringstream txt;
    for (const auto& d : artifact_dirs) {
        const std::string rel = fs::relative(d, dir).generic_string();
        const bool has_verdict = fs::exists(d / "verdict.json");
        const bool has_error = fs::exists(d / "error.json");
        if (!has_verdict && !has_error) {
            gaps.push_back(rel);
            continue;
        }
        RunSummary r;
        r.directory = rel;
        const Json j = read_json(d / (has_verdict ? "verdict.json" : "error.json"));
        r.kind = j.value("kind", "");
        Json run{{"directory", rel}, {"kind", r.kind}};
        txt << "== " << rel << " (" << r.kind << ")\n";
        if (!has_verdict) {
            r.errored = true;
            run["error"] = j.value("error", Json::object());
            txt << "  ERROR " << run["error"].value("type", "") << ": " << run["error"].value("message", "")
                << "\n";
        } else {
            for (const auto& c : j.at("checks")) {
                const bool ok = c.at("passed").get<bool>();
                (ok ? r.checks_passed : r.checks_failed) += 1;
                txt << "  " << (ok ? "PASS" : "FAIL") << "  " << std::left << std::setw(48)
                    << c.at("name").get<std::string>() << " value=" << format_value(c.at("value")) << " bounds=["
                    << format_value(c.at("lower")) << ", " << format_value(c.at("upper")) << "]  "
                    << c.at("property").get<std::string>() << "\n";
            }
            run["checks"] = j.at("checks");
        }
        r.passed = !r.errored && r.checks_failed == 0;
        run["passed"] = r.passed;
        run["checks_passed"] = r.checks_passed;
        run["checks_failed"] = r.checks_failed;
        runs.push_back(run);
        (r.passed ? out.runs_passed : out.runs_failed) += 1;
        out.checks_passed += r.checks_passed;
        out.checks_failed += r.checks_failed;
        out.runs.push_back(std::move(r));
    }
    if (!gaps.empty()) {
        std::string list;
        for (const auto& g : gaps) list += "\n  " + g;
        throw ReportError("runs without verdict.json or error.json:" + list);
    }
    out.merged = Json{{"schema_version", kSchemaVersion},
                      {"runs_passed", out.runs_passed},
                      {"runs_failed", out.runs_failed},
                      {"checks_passed", out.checks_passed},
                      {"checks_failed", out.checks_failed},
                      {"runs", runs}};
    std::ostringstream head;
    head << "runs: " << out.runs_passed << " pass, " << out.runs_failed << " fail; checks: " << out.checks_passed
         << " pass, " << out.checks_failed << " fail\n";
    out.text = head.str() + txt.str();
    return out;
}

ReportSummary emit_report(const fs::path& dir) {
    ReportSummary s = collect_report(dir);
    std::ofstream js(dir / "summary.json");
    std::ofstream tx(dir / "summary.txt");
    if (!js || !tx) throw ReportError("cannot write summary files into " + dir.string());
    js << s.merged.dump(2) << '\n';
    tx << s.text;
    return s;
}

}  // namespace frontrelax
