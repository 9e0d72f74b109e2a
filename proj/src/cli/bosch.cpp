#include "snowaug/cli/bosch.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "snowaug/core/error.hpp"
#include "snowaug/core/geometry.hpp"
#include "snowaug/core/image_io.hpp"
#include "snowaug/dataset/dataset.hpp"

namespace snowaug {

namespace fs = std::filesystem;

namespace {

double box_field(const YAML::Node& box, const char* key, const std::string& file, std::size_t line) {
    const auto node = box[key];
    if (!node || !node.IsScalar()) throw ParseError(file, line, std::string("box lacks '") + key + "'");
    try {
        return node.as<double>();
    } catch (const YAML::Exception&) {
        throw ParseError(file, line, std::string("box field '") + key + "' is not a number");
    }
}

std::size_t line_of(const YAML::Node& node) { return static_cast<std::size_t>(node.Mark().line + 1); }

std::set<std::string> read_subset(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot read subset list " + file.string());
    std::set<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        names.insert(line.substr(first, last - first + 1));
    }
    return names;
}

}  // namespace

BoschImportResult import_bosch(const BoschImportOptions& options) {
    const std::string file = options.yaml_file.string();
    YAML::Node root;
    try {
        root = YAML::LoadFile(file);
    } catch (const YAML::BadFile&) {
        throw IoError("cannot read " + file);
    } catch (const YAML::Exception& e) {
        throw ParseError(file, static_cast<std::size_t>(e.mark.line + 1), e.msg);
    }
    if (!root.IsSequence()) throw ParseError(file, 0, "expected a top-level list of image entries");

    const fs::path base = options.yaml_file.parent_path();
    std::error_code ec;
    fs::create_directories(options.output / "images", ec);
    if (!ec) fs::create_directories(options.output / "labels", ec);
    if (ec) throw IoError("cannot create " + options.output.string() + ": " + ec.message());

    const bool use_subset = !options.subset_file.empty();
    std::set<std::string> subset;
    if (use_subset) subset = read_subset(options.subset_file);
    std::set<std::string> subset_seen;

    BoschImportResult result;
    std::map<std::string, int> used_names;
    for (const auto& entry : root) {
        const std::size_t entry_line = line_of(entry);
        if (!entry.IsMap() || !entry["path"] || !entry["path"].IsScalar()) {
            throw ParseError(file, entry_line, "entry needs a 'path'");
        }
        const std::string written = entry["path"].as<std::string>();
        const fs::path rel = written;
        const fs::path src = rel.is_absolute() ? rel : base / rel;
        if (use_subset) {
            const std::string file_name = rel.filename().string();
            const bool by_path = subset.count(written) > 0;
            if (!by_path && subset.count(file_name) == 0) {
                ++result.skipped_images;
                continue;
            }
            subset_seen.insert(by_path ? written : file_name);
        }

        std::string name = rel.stem().string();
        if (const int n = used_names[name]++; n > 0) name += "_" + std::to_string(n);

        double width = static_cast<double>(options.default_width);
        double height = static_cast<double>(options.default_height);
        if (fs::is_regular_file(src)) {
            const auto size = probe_image_size(src);
            width = static_cast<double>(size.width);
            height = static_cast<double>(size.height);
            fs::copy_file(src, options.output / "images" / (name + src.extension().string()),
                          fs::copy_options::overwrite_existing);
            ++result.copied_images;
        } else {
            result.warnings.push_back(file + ":" + std::to_string(entry_line) + ": image " + src.string() +
                                      " not found; normalizing with the default size");
        }

        std::vector<BoundingBox> boxes;
        const auto boxes_node = entry["boxes"];
        if (boxes_node && !boxes_node.IsNull()) {
            if (!boxes_node.IsSequence()) throw ParseError(file, entry_line, "'boxes' must be a list");
            for (const auto& b : boxes_node) {
                const std::size_t line = line_of(b);
                if (!b.IsMap()) throw ParseError(file, line, "box must be a mapping");
                BoundingBox box{box_field(b, "x_min", file, line), box_field(b, "y_min", file, line),
                                box_field(b, "x_max", file, line), box_field(b, "y_max", file, line), 0};
                if (!box.valid()) {
                    result.warnings.push_back(file + ":" + std::to_string(line) + ": skipping box with max < min");
                    continue;
                }
                try {
                    boxes.push_back(clamp_box(box, width, height));
                } catch (const DegenerateBox& e) {
                    result.warnings.push_back(file + ":" + std::to_string(line) + ": skipping " + e.what());
                }
            }
        }

        const auto text = format_yolo_labels(boxes, width, height);
        write_file_bytes(options.output / "labels" / (name + ".txt"), std::vector<std::uint8_t>(text.begin(), text.end()));
        ++result.images;
        result.boxes += boxes.size();
    }
    for (const auto& name : subset) {
        if (subset_seen.count(name) == 0) result.warnings.push_back("subset entry " + name + " not found in " + file);
    }
    return result;
}

}  // namespace snowaug
