#pragma once

#include "frontrelax/experiment.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace frontrelax {

struct RunSummary {
    std::string directory;  ///< relative to the report root
    std::string kind;
    bool errored = false;
    bool passed = false;
    int checks_passed = 0;
    int checks_failed = 0;
};

struct ReportSummary {
    std::vector<RunSummary> runs;
    int runs_passed = 0;
    int runs_failed = 0;
    int checks_passed = 0;
    int checks_failed = 0;
    Json merged;      ///< summary.json content
    std::string text; ///< summary.txt content
};

/// Merges every verdict.json / error.json below `dir`. A directory holding experiment artifacts
/// (csv or json files) without either record is a gap. Raises ReportError when nothing is found
/// or when gaps exist, listing them.
ReportSummary collect_report(const std::filesystem::path& dir);

/// collect_report, then writes summary.json and summary.txt into `dir`.
ReportSummary emit_report(const std::filesystem::path& dir);

}  // namespace frontrelax
