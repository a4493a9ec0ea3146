#include "image_files.hpp"

#include <png.h>

#include <algorithm>
#include <cstring>
#include <string>

#include <spdlog/spdlog.h>

#include "zup/volume_io.hpp"

namespace zup::cli {

namespace fs = std::filesystem;

namespace {

bool is_png(const fs::path& path) {
    std::string ext = path.extension().string();
    std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png";
}

}  // namespace

Image read_slice(const fs::path& path) {
    if (!fs::exists(path)) throw IoError("no such file '" + path.string() + "'");
    if (!is_png(path)) {
        const Volume v = read_volume(path);
        if (v.depth() > 1) {
            spdlog::warn("'{}' has {} pages; using the first", path.string(), v.depth());
        }
        return v.slice(0);
    }
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
        throw FormatError("cannot read PNG '" + path.string() + "': " + image.message);
    }
    image.format = PNG_FORMAT_GRAY;
    std::vector<unsigned char> buf(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
        png_image_free(&image);
        throw FormatError("cannot decode PNG '" + path.string() + "': " + image.message);
    }
    const int h = static_cast<int>(image.height);
    const int w = static_cast<int>(image.width);
    std::vector<double> data(buf.size());
    std::ranges::transform(buf, data.begin(), [](unsigned char c) { return c / 255.0; });
    return Image(h, w, std::move(data));
}

void write_rgb_png(const fs::path& path, int height, int width, const std::vector<unsigned char>& rgb) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, rgb.data(), 0, nullptr)) {
        throw IoError("cannot write PNG '" + path.string() + "': " + image.message);
    }
}

}  // namespace zup::cli
