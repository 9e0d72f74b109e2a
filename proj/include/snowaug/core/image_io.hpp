#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "snowaug/core/image.hpp"

namespace snowaug {

struct ImageSize {
    std::size_t width = 0;
    std::size_t height = 0;
};

/// Decodes PNG or JPEG (detected by signature). Gray and gray+alpha inputs
/// are expanded to RGB, alpha is dropped, 16-bit PNG is reduced to 8 bits.
ImageBuffer read_image(const std::filesystem::path& path);

/// Reads only the header.
ImageSize probe_image_size(const std::filesystem::path& path);

/// Lossless PNG encoding with fixed settings, so equal rasters always give
/// equal bytes.
std::vector<std::uint8_t> encode_png(const ImageBuffer& image);
ImageBuffer decode_png(const std::vector<std::uint8_t>& bytes);
void write_png(const std::filesystem::path& path, const ImageBuffer& image);

bool is_image_file(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
/// Creates missing parent directories.
void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace snowaug
