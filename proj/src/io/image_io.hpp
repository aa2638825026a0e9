#pragma once

#include <filesystem>

#include "core/types.hpp"

namespace evrecon::io {

// Grayscale PGM (P5/P2) and PNG, 8 or 16 bit, mapped linearly to [0, 1].
// The format is chosen by extension (.pgm / .png).
Image read_image(const std::filesystem::path& path);
void write_image(const Image& img, const std::filesystem::path& path, int bit_depth = 8);

// Affine rescale of a frame onto [0, 1]. Constant frames are returned as is.
Image normalize_range(const Image& img);

// Linear map of a signed image from [-m, m] onto [0, 1], m = max |value|.
Image signed_to_display(const Image& img);

}  // namespace evrecon::io
