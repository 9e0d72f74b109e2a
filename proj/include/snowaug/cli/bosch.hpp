#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace snowaug {

struct BoschImportOptions {
    std::filesystem::path yaml_file;
    std::filesystem::path output;
    /// Used to normalize boxes when an image referenced by the index is not
    /// present next to it.
    std::size_t default_width = 1280;
    std::size_t default_height = 720;
    /// Optional list of images to keep, one per line ('#' comments allowed).
    /// A line matches an entry's path as written in the YAML or its file name.
    std::filesystem::path subset_file;
};

struct BoschImportResult {
    std::size_t images = 0;
    std::size_t boxes = 0;
    std::size_t copied_images = 0;
    /// Entries left out because they are not in the subset list.
    std::size_t skipped_images = 0;
    std::vector<std::string> warnings;
};

/// Converts a Bosch traffic-light YAML index into the yolo layout
/// (<out>/images, <out>/labels). Every light state maps to class 0.
/// Throws ParseError for malformed YAML or an unexpected structure.
BoschImportResult import_bosch(const BoschImportOptions& options);

}  // namespace snowaug
