#include "snowaug/core/image_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

// jpeglib.h needs FILE and size_t declared first.
#include <jpeglib.h>

#include "snowaug/core/error.hpp"

namespace snowaug {

namespace fs = std::filesystem;

// zlib level for written PNGs; the pipeline writes many large, noisy images.
constexpr int kPngCompressionLevel = 3;

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path.string());
    return bytes;
}

void write_file_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

bool is_image_file(const fs::path& path) {
    auto ext = path.extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

namespace {

bool has_png_signature(const std::vector<std::uint8_t>& b) {
    return b.size() >= 8 && png_sig_cmp(b.data(), 0, 8) == 0;
}

bool has_jpeg_signature(const std::vector<std::uint8_t>& b) {
    return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF;
}

// ---- JPEG (ingest only) ----------------------------------------------------

struct JpegErrorManager {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

// Only trivially destructible locals live across setjmp here. Returns false
// with `message` filled on a decoder error. `out` must be null on entry when
// only the header is wanted.
bool decode_jpeg_raw(const std::uint8_t* data, std::size_t size, bool header_only, std::size_t* width,
                     std::size_t* height, std::vector<std::uint8_t>* out, char* message) {
    jpeg_decompress_struct cinfo;
    JpegErrorManager jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    if (setjmp(jerr.jump)) {
        std::strncpy(message, jerr.message, JMSG_LENGTH_MAX);
        jpeg_destroy_decompress(&cinfo);
        return false;
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, data, static_cast<unsigned long>(size));
    jpeg_read_header(&cinfo, TRUE);
    *width = cinfo.image_width;
    *height = cinfo.image_height;
    if (header_only) {
        jpeg_destroy_decompress(&cinfo);
        return true;
    }
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    const std::size_t stride = static_cast<std::size_t>(cinfo.output_width) * 3;
    // out was sized by the caller from the header pass.
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = out->data() + static_cast<std::size_t>(cinfo.output_scanline) * stride;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return true;
}

ImageBuffer decode_jpeg(const std::vector<std::uint8_t>& bytes, const std::string& name) {
    std::size_t w = 0, h = 0;
    char message[JMSG_LENGTH_MAX] = {0};
    if (!decode_jpeg_raw(bytes.data(), bytes.size(), true, &w, &h, nullptr, message)) {
        throw IoError(name + ": " + message);
    }
    std::vector<std::uint8_t> data(w * h * 3);
    if (!decode_jpeg_raw(bytes.data(), bytes.size(), false, &w, &h, &data, message)) {
        throw IoError(name + ": " + message);
    }
    return ImageBuffer(w, h, std::move(data));
}

ImageBuffer decode_png_named(const std::vector<std::uint8_t>& bytes, const std::string& name) {
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
        throw IoError(name + ": " + img.message);
    }
    // Decode as RGBA so alpha is never composited, then drop it.
    img.format = PNG_FORMAT_RGBA;
    std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, rgba.data(), 0, nullptr)) {
        std::string msg = img.message;
        png_image_free(&img);
        throw IoError(name + ": " + msg);
    }
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    std::vector<std::uint8_t> rgb(n * 3);
    for (std::size_t i = 0; i < n; ++i) {
        rgb[i * 3 + 0] = rgba[i * 4 + 0];
        rgb[i * 3 + 1] = rgba[i * 4 + 1];
        rgb[i * 3 + 2] = rgba[i * 4 + 2];
    }
    return ImageBuffer(img.width, img.height, std::move(rgb));
}

std::uint32_t be32(const std::uint8_t* p) {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
}

}  // namespace

ImageBuffer decode_png(const std::vector<std::uint8_t>& bytes) { return decode_png_named(bytes, "<memory>"); }

ImageBuffer read_image(const fs::path& path) {
    const auto bytes = read_file_bytes(path);
    if (has_png_signature(bytes)) return decode_png_named(bytes, path.string());
    if (has_jpeg_signature(bytes)) return decode_jpeg(bytes, path.string());
    throw IoError(path.string() + ": not a PNG or JPEG file");
}

ImageSize probe_image_size(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> head(24);
    in.read(reinterpret_cast<char*>(head.data()), 24);
    head.resize(static_cast<std::size_t>(in.gcount()));
    if (has_png_signature(head) && head.size() >= 24 && std::memcmp(head.data() + 12, "IHDR", 4) == 0) {
        return {be32(head.data() + 16), be32(head.data() + 20)};
    }
    if (has_jpeg_signature(head)) {
        in.close();
        const auto bytes = read_file_bytes(path);
        std::size_t w = 0, h = 0;
        char message[JMSG_LENGTH_MAX] = {0};
        if (!decode_jpeg_raw(bytes.data(), bytes.size(), true, &w, &h, nullptr, message)) {
            throw IoError(path.string() + ": " + message);
        }
        return {w, h};
    }
    throw IoError(path.string() + ": not a PNG or JPEG file");
}

namespace {

void append_png_bytes(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void flush_png(png_structp) {}

// Runs the libpng write calls; libpng reports errors by longjmp, so this
// frame holds no objects with destructors.
bool write_png_rows(png_structp png, png_infop info, std::vector<std::uint8_t>* out, png_bytepp rows,
                    png_uint_32 width, png_uint_32 height) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_set_write_fn(png, out, append_png_bytes, flush_png);
    png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, kPngCompressionLevel);
    png_write_info(png, info);
    png_write_image(png, rows);
    png_write_end(png, nullptr);
    return true;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const ImageBuffer& image) {
    if (image.empty()) throw InvalidArgument("encode_png: empty image");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png encode: out of memory");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png encode: out of memory");
    }
    const std::size_t stride = image.width() * 3;
    auto* base = const_cast<std::uint8_t*>(image.pixels().data());
    std::vector<png_bytep> rows(image.height());
    for (std::size_t y = 0; y < rows.size(); ++y) rows[y] = base + y * stride;

    std::vector<std::uint8_t> out;
    out.reserve(stride * image.height() / 2);
    const bool ok = write_png_rows(png, info, &out, rows.data(), static_cast<png_uint_32>(image.width()),
                                   static_cast<png_uint_32>(image.height()));
    png_destroy_write_struct(&png, &info);
    if (!ok) throw IoError("png encode failed");
    return out;
}

void write_png(const fs::path& path, const ImageBuffer& image) { write_file_bytes(path, encode_png(image)); }

}  // namespace snowaug
