#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "snowaug/cli/bosch.hpp"
#include "snowaug/cli/run_config.hpp"
#include "snowaug/eval/predictions.hpp"

namespace snowaug {

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitPartial = 1, kExitUsage = 2 };

int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_mix(const RunConfig& config, std::ostream& out, std::ostream& err);

struct EvalOptions {
    std::filesystem::path gt_dir;
    std::filesystem::path pred_dir;
    AnnotationFormat gt_format = AnnotationFormat::Yolo;
    PredictionFormat pred_format = PredictionFormat::Absolute;
    double threshold = 0.5;
    /// Empty: <pred_dir>/report.json
    std::filesystem::path report;
};

int cmd_eval(const EvalOptions& options, std::ostream& out, std::ostream& err);
int cmd_import_bosch(const BoschImportOptions& options, std::ostream& out, std::ostream& err);
int cmd_inspect(const std::filesystem::path& root, AnnotationFormat format, std::ostream& out, std::ostream& err);

/// Full command-line front end (argument parsing included).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace snowaug
