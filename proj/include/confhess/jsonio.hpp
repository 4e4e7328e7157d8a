#pragma once

#include <string>

#include <json.hpp>

namespace confhess {

// Canonical text form used for every JSON artifact: 2-space indent, sorted
// object keys (library default), shortest round-trip float formatting,
// trailing newline. Reruns with identical data are byte-identical.
std::string dump_json(const nlohmann::json& j);

// Throw InputError with a diagnostic instead of the library's parse exception.
nlohmann::json parse_json_text(const std::string& text);
nlohmann::json parse_json_file(const std::string& path);

std::string read_text_file(const std::string& path);

// Write via temp file + rename in the destination directory.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace confhess
