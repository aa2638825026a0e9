#pragma once

#include <filesystem>
#include <vector>

#include "core/types.hpp"

namespace evrecon::io {

// Middlebury .flo: f32 202021.25, i32 W, i32 H, interleaved f32 (u, v) rows.
std::vector<std::uint8_t> encode_flo(const FlowField& flow);
FlowField decode_flo(const std::vector<std::uint8_t>& bytes);

void write_flo(const FlowField& flow, const std::filesystem::path& path);
FlowField read_flo(const std::filesystem::path& path);

}  // namespace evrecon::io
