#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "versa/event.hpp"

namespace versa {

// Canonical on-disk format: JSON Lines, one Event per line, keys in a fixed
// order. Stream metadata lives in a `<stem>.meta.json` sidecar.

std::string to_json_line(const Event& event);

/// `line` is 1-based and only used for diagnostics.
Event event_from_json_line(std::string_view text, std::size_t line);

std::string serialize_events(const VersaStream& stream);

/// Parses JSONL text; blank lines are skipped.
std::vector<Event> parse_events(std::string_view text);

std::string serialize_meta(const VersaStream& stream);

/// `<match_id>_p<period>.versa.jsonl`
std::string canonical_filename(const VersaStream& stream);
std::string exceptions_filename(const VersaStream& stream);

/// `dir/m1_p1.versa.jsonl` -> `dir/m1_p1.meta.json`
std::filesystem::path meta_path_for(const std::filesystem::path& stream_path);

/// Reads a canonical stream file and its sidecar when present. Without a
/// sidecar, match id and period come from the filename (or the events) and
/// team ids from the events. Throws Errc::EmptyStream on a file with no events.
VersaStream read_stream(const std::filesystem::path& path);

/// Writes the JSONL file and its sidecar.
void write_stream(const VersaStream& stream, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
/// Creates missing parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace versa
