#include "snowaug/dataset/mix.hpp"

#include <cmath>
#include <cstdio>

#include "snowaug/core/error.hpp"
#include "snowaug/core/image_io.hpp"
#include "snowaug/core/parallel.hpp"
#include "snowaug/core/seed.hpp"
#include "snowaug/synthesis/snow.hpp"

namespace snowaug {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Keeps the branch stream apart from the synthesis stream when both masters
// come from the same --seed.
constexpr std::uint64_t kBranchDomain = 0x6d69782d6272616eULL;

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct ItemOutput {
    ManifestRecord record;
    std::string jsonl_line;
};

}  // namespace

void MixPolicy::validate() const {
    if (!(p_synthetic >= 0.0 && p_synthetic <= 1.0)) throw ConfigError("mix.p_synthetic must lie in [0, 1]");
}

std::string_view branch_name(Branch branch) noexcept {
    switch (branch) {
        case Branch::Original: return "original";
        case Branch::Synthetic: return "synthetic";
        case Branch::Failed: return "error";
    }
    return "error";
}

std::size_t Manifest::count(Branch branch) const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.branch == branch;
    return n;
}

json Manifest::to_json() const {
    json items = json::array();
    for (const auto& r : records) {
        json j = {{"index", r.index},   {"source", r.source}, {"output", r.output},
                  {"branch", std::string(branch_name(r.branch))}, {"seed", r.seed}};
        if (r.branch == Branch::Failed) j["error"] = r.error;
        j["config_digest"] = config_digest;
        items.push_back(std::move(j));
    }
    return json{
        {"schema_version", kSchemaVersion},
        {"config_digest", config_digest},
        {"master_seed", master_seed},
        {"p_synthetic", p_synthetic},
        {"summary",
         {{"original", count(Branch::Original)}, {"synthetic", count(Branch::Synthetic)}, {"failed", count(Branch::Failed)}}},
        {"items", std::move(items)},
    };
}

std::string config_digest(const SnowConfig& snow, const MixPolicy& policy) {
    std::string canon = snow.canonical();
    canon += "snow.seed=" + std::to_string(snow.seed) + "\n";
    canon += "mix.p_synthetic=" + fmt_double(policy.p_synthetic) + "\n";
    canon += "mix.seed=" + std::to_string(policy.seed) + "\n";
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(canon)));
    return buf;
}

bool choose_synthetic(const MixPolicy& policy, std::size_t index) {
    Rng rng(derive_item_seed(policy.seed ^ kBranchDomain, index));
    return rng.uniform() < policy.p_synthetic;
}

Manifest mix_datasets(const std::vector<DatasetItem>& items, const SnowConfig& snow, const MixPolicy& policy,
                      const fs::path& out, const MixOptions& options) {
    snow.validate();
    policy.validate();

    std::error_code ec;
    fs::create_directories(out / "images", ec);
    if (ec) throw IoError("cannot create " + (out / "images").string() + ": " + ec.message());
    if (options.format == AnnotationFormat::Yolo) {
        fs::create_directories(out / "labels", ec);
        if (ec) throw IoError("cannot create " + (out / "labels").string() + ": " + ec.message());
    }

    std::vector<ItemOutput> results(items.size());
    parallel_for(items.size(), options.workers, [&](std::size_t i) {
        const DatasetItem& item = items[i];
        ManifestRecord& rec = results[i].record;
        rec.index = i;
        rec.source = item.name.empty() ? item.image_path.generic_string() : item.name;
        rec.seed = derive_item_seed(snow.seed, i);
        const bool synthetic = choose_synthetic(policy, i);
        try {
            std::string file;
            std::size_t width = item.width;
            std::size_t height = item.height;
            if (synthetic) {
                const ImageBuffer source = read_image(item.image_path);
                Rng rng(rec.seed);
                const ImageBuffer snowy = synthesize_snow(source, snow, rng);
                width = snowy.width();
                height = snowy.height();
                file = item.stem() + ".png";
                write_png(out / "images" / file, snowy);
            } else {
                file = item.image_path.filename().string();
                fs::copy_file(item.image_path, out / "images" / file, fs::copy_options::overwrite_existing);
            }
            // Synthesis restores the source dimensions, so boxes carry over.
            if (options.format == AnnotationFormat::Yolo) {
                const auto text = format_yolo_labels(item.annotations, static_cast<double>(width),
                                                     static_cast<double>(height));
                write_file_bytes(out / "labels" / (item.stem() + ".txt"),
                                 std::vector<std::uint8_t>(text.begin(), text.end()));
            } else {
                results[i].jsonl_line = format_jsonl_record("images/" + file, width, height, item.annotations);
            }
            rec.output = "images/" + file;
            rec.branch = synthetic ? Branch::Synthetic : Branch::Original;
        } catch (const std::exception& e) {
            rec.branch = Branch::Failed;
            rec.error = e.what();
        }
    });

    Manifest manifest;
    manifest.config_digest = config_digest(snow, policy);
    manifest.master_seed = snow.seed;
    manifest.p_synthetic = policy.p_synthetic;
    manifest.records.reserve(results.size());
    std::string index;
    for (auto& r : results) {
        if (!r.jsonl_line.empty()) index += r.jsonl_line + "\n";
        manifest.records.push_back(std::move(r.record));
    }
    if (options.format == AnnotationFormat::Jsonl) {
        write_file_bytes(out / "annotations.jsonl", std::vector<std::uint8_t>(index.begin(), index.end()));
    }
    const std::string text = manifest.to_json().dump(2) + "\n";
    write_file_bytes(out / "manifest.json", std::vector<std::uint8_t>(text.begin(), text.end()));
    return manifest;
}

}  // namespace snowaug
