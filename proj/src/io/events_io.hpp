#pragma once

#include <filesystem>
#include <vector>

#include "core/events.hpp"

namespace evrecon::io {

// Binary layout (little-endian): 16-byte magic "EVST0001" zero padded, u32 W,
// u32 H, u64 count, f64 t_start, f64 t_end, then count packed 13-byte records
// (u16 x, u16 y, f64 t, i8 polarity).
std::vector<std::uint8_t> encode_events(const EventStream& s);
EventStream decode_events(const std::vector<std::uint8_t>& bytes);

// Text layout: "# evst W H", an optional "# window t_start t_end" line, then
// one "t x y p" line per event.
std::string events_to_text(const EventStream& s);
EventStream events_from_text(const std::string& text);

enum class EventFormat { binary, text };

void write_events(const EventStream& s, const std::filesystem::path& path,
                  EventFormat format = EventFormat::binary);
// Detects the format from the leading bytes.
EventStream read_events(const std::filesystem::path& path);

}  // namespace evrecon::io
