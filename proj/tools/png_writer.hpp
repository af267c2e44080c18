#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace crossframe::tools {

// Minimal 8-bit grayscale PNG emitter (zlib-compressed IDAT).
// pixels are row-major, top row first.
void write_png_gray(const std::filesystem::path& path, std::size_t width, std::size_t height,
                    const std::vector<std::uint8_t>& pixels);

}  // namespace crossframe::tools
