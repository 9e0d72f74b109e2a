#include "snowaug/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <ostream>

#include "snowaug/core/error.hpp"
#include "snowaug/core/image_io.hpp"
#include "snowaug/dataset/mix.hpp"
#include "snowaug/eval/report.hpp"

namespace snowaug {

namespace fs = std::filesystem;

namespace {

int run_mix_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (config.io.input.empty() || config.io.output.empty()) {
        err << "error: input and output directories are required\n";
        return kExitUsage;
    }
    std::error_code ec;
    if (!fs::is_directory(config.io.input, ec)) {
        err << "error: cannot read input directory " << config.io.input.string() << '\n';
        return kExitUsage;
    }

    LoadedDataset dataset;
    try {
        dataset = load_dataset(config.io.input, config.io.format);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (dataset.dropped_boxes > 0) {
        err << "warning: dropped " << dataset.dropped_boxes << " boxes with no area inside their image\n";
    }

    Manifest manifest;
    try {
        manifest = mix_datasets(dataset.items, config.snow, config.mix, config.io.output,
                                MixOptions{config.io.format, config.workers});
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    const std::size_t failed = manifest.count(Branch::Failed);
    out << manifest.count(Branch::Original) << " original, " << manifest.count(Branch::Synthetic) << " synthetic, "
        << failed << " failed\n";
    for (const auto& r : manifest.records) {
        if (r.branch == Branch::Failed) err << "failed: " << r.source << ": " << r.error << '\n';
    }
    return failed > 0 ? kExitPartial : kExitOk;
}

}  // namespace

int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    RunConfig forced = config;
    forced.mix.p_synthetic = 1.0;
    return run_mix_command(forced, out, err);
}

int cmd_mix(const RunConfig& config, std::ostream& out, std::ostream& err) { return run_mix_command(config, out, err); }

int cmd_eval(const EvalOptions& options, std::ostream& out, std::ostream& err) {
    if (!(options.threshold > 0.0 && options.threshold < 1.0)) {
        err << "error: --threshold must lie in (0, 1)\n";
        return kExitUsage;
    }
    EvalReport report;
    try {
        const auto gt = load_dataset(options.gt_dir, options.gt_format);
        const auto cases = load_eval_cases(gt.items, options.pred_dir, options.pred_format);
        report = evaluate(cases, options.threshold);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    const fs::path report_path = options.report.empty() ? options.pred_dir / "report.json" : options.report;
    auto doc = report.to_json();
    doc["iou_threshold"] = options.threshold;
    const std::string text = doc.dump(2) + "\n";
    try {
        write_file_bytes(report_path, std::vector<std::uint8_t>(text.begin(), text.end()));
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    out << report.table();
    return kExitOk;
}

int cmd_import_bosch(const BoschImportOptions& options, std::ostream& out, std::ostream& err) {
    BoschImportResult result;
    try {
        result = import_bosch(options);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    out << "imported " << result.images << " images (" << result.copied_images << " copied), " << result.boxes
        << " boxes";
    if (result.skipped_images > 0) out << ", " << result.skipped_images << " not in subset";
    out << '\n';
    return kExitOk;
}

int cmd_inspect(const fs::path& root, AnnotationFormat format, std::ostream& out, std::ostream& err) {
    LoadedDataset ds;
    try {
        ds = load_dataset(root, format);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    std::size_t boxes = 0;
    std::map<int, std::size_t> classes;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> sizes;
    double min_w = 0, max_w = 0, sum_w = 0, min_h = 0, max_h = 0, sum_h = 0;
    for (const auto& item : ds.items) {
        ++sizes[{item.width, item.height}];
        for (const auto& b : item.annotations) {
            if (boxes == 0) {
                min_w = max_w = b.width();
                min_h = max_h = b.height();
            }
            min_w = std::min(min_w, b.width());
            max_w = std::max(max_w, b.width());
            min_h = std::min(min_h, b.height());
            max_h = std::max(max_h, b.height());
            sum_w += b.width();
            sum_h += b.height();
            ++classes[b.class_id];
            ++boxes;
        }
    }
    out << "images: " << ds.items.size() << '\n';
    out << "boxes: " << boxes << '\n';
    out << "dropped boxes: " << ds.dropped_boxes << '\n';
    for (const auto& [size, n] : sizes) out << "resolution " << size.first << "x" << size.second << ": " << n << '\n';
    for (const auto& [cls, n] : classes) out << "class " << cls << ": " << n << '\n';
    if (boxes > 0) {
        const auto n = static_cast<double>(boxes);
        out << "box width px: min " << min_w << " mean " << sum_w / n << " max " << max_w << '\n';
        out << "box height px: min " << min_h << " mean " << sum_h / n << " max " << max_h << '\n';
    }
    return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synthetic snow augmentation and detection evaluation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::string format = "yolo";
    auto* seed_opt = app.add_option("--seed", seed, "Master seed for all randomness");
    auto* workers_opt = app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    auto* config_opt = app.add_option("--config", config_path, "Config file");
    auto* format_opt = app.add_option("--format", format, "Annotation format (yolo or jsonl)")
                           ->check(CLI::IsMember({"yolo", "yolo-txt", "jsonl"}));

    std::string input, output;
    auto* generate = app.add_subcommand("generate", "Synthesize snow for every image");
    generate->add_option("input", input, "Input dataset root");
    generate->add_option("output", output, "Output dataset root");

    auto* mix = app.add_subcommand("mix", "Emit a mixed original/synthetic training set");
    mix->add_option("input", input, "Input dataset root");
    mix->add_option("output", output, "Output dataset root");
    double p_synthetic = 0.5;
    auto* p_opt = mix->add_option("--p-synthetic", p_synthetic, "Probability of emitting the synthetic image");

    EvalOptions eval_opts;
    std::string gt_dir, pred_dir, pred_format = "absolute", report_path;
    auto* eval = app.add_subcommand("eval", "Score detector predictions against ground truth");
    eval->add_option("gt", gt_dir, "Ground-truth dataset root")->required();
    eval->add_option("predictions", pred_dir, "Prediction directory")->required();
    eval->add_option("--pred-format", pred_format, "absolute, yolo or jsonl")
        ->check(CLI::IsMember({"absolute", "abs", "yolo", "jsonl"}));
    eval->add_option("--threshold", eval_opts.threshold, "IoU gate (strict)");
    eval->add_option("--report", report_path, "JSON report path (default <predictions>/report.json)");

    BoschImportOptions bosch_opts;
    std::string yaml_file, bosch_out;
    auto* import = app.add_subcommand("import-bosch", "Convert a Bosch YAML index to the yolo layout");
    import->add_option("yaml", yaml_file, "Bosch annotation YAML")->required();
    import->add_option("output", bosch_out, "Output dataset root")->required();
    import->add_option("--width", bosch_opts.default_width, "Image width when the image file is absent");
    import->add_option("--height", bosch_opts.default_height, "Image height when the image file is absent");
    std::string subset_file;
    import->add_option("--subset", subset_file, "File listing the images to import, one per line");

    std::string inspect_root;
    auto* inspect = app.add_subcommand("inspect", "Print dataset statistics");
    inspect->add_option("root", inspect_root, "Dataset root")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (generate->parsed() || mix->parsed()) {
        RunConfig config;
        try {
            if (*config_opt) config = load_config_file(config_path);
            if (*seed_opt) config.set_seed(seed);
            if (*workers_opt) config.workers = workers;
            if (*format_opt) config.io.format = parse_annotation_format(format);
            if (!input.empty()) config.io.input = input;
            if (!output.empty()) config.io.output = output;
            if (mix->parsed() && *p_opt) config.mix.p_synthetic = p_synthetic;
            config.validate();
        } catch (const Error& e) {
            err << "config error: " << e.what() << '\n';
            return kExitUsage;
        }
        return generate->parsed() ? cmd_generate(config, out, err) : cmd_mix(config, out, err);
    }
    if (eval->parsed()) {
        eval_opts.gt_dir = gt_dir;
        eval_opts.pred_dir = pred_dir;
        eval_opts.gt_format = parse_annotation_format(format);
        eval_opts.pred_format = parse_prediction_format(pred_format);
        eval_opts.report = report_path;
        return cmd_eval(eval_opts, out, err);
    }
    if (import->parsed()) {
        bosch_opts.yaml_file = yaml_file;
        bosch_opts.output = bosch_out;
        bosch_opts.subset_file = subset_file;
        return cmd_import_bosch(bosch_opts, out, err);
    }
    return cmd_inspect(inspect_root, parse_annotation_format(format), out, err);
}

}  // namespace snowaug
