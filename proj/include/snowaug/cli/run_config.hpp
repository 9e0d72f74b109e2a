#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "snowaug/dataset/dataset.hpp"
#include "snowaug/dataset/mix.hpp"
#include "snowaug/synthesis/config.hpp"

namespace snowaug {

struct IoConfig {
    std::filesystem::path input;
    std::filesystem::path output;
    AnnotationFormat format = AnnotationFormat::Yolo;
};

struct RunConfig {
    SnowConfig snow;
    MixPolicy mix;
    IoConfig io;
    std::size_t workers = 1;

    /// Single reproducibility handle; feeds both snow.seed and mix.seed.
    void set_seed(std::uint64_t seed) {
        snow.seed = seed;
        mix.seed = seed;
    }

    /// Throws ConfigError.
    void validate() const;
};

/// A parsed value: number (kept as text until its key decides int vs real),
/// quoted string, or array of numbers.
struct ConfigValue {
    enum class Kind { Number, String, Array } kind = Kind::Number;
    std::string text;
    std::vector<std::string> items;
    std::size_t line = 0;
};

using ConfigDocument = std::map<std::string, ConfigValue>;

/// Parses the flat key-value config syntax:
///
///   # comment
///   seed = 7
///   [snow]
///   scale_array = [0.5, 1.0, 2.0, 3.0, 4.0]
///   [io]
///   format = "yolo"
///
/// A [section] header prefixes the keys below it ("snow.scale_array").
/// Dotted keys may also be written out in full. Duplicates are rejected.
ConfigDocument parse_config_text(std::string_view text, const std::string& source_name = "<config>");

/// Applies a document on top of `base`. Unknown keys and malformed or
/// out-of-range values raise ConfigError; the result is validated.
RunConfig apply_config(const ConfigDocument& doc, RunConfig base = {});

RunConfig load_config_file(const std::filesystem::path& path);

}  // namespace snowaug
