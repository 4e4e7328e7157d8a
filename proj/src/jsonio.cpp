#include "confhess/jsonio.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "confhess/common.hpp"

namespace confhess {

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json parse_json_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("JSON parse error: ") + e.what());
  }
}

nlohmann::json parse_json_file(const std::string& path) {
  return parse_json_text(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path dir = target.parent_path();
  if (dir.empty()) dir = ".";
  fs::path tmp = dir / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open file for writing: " + tmp.string());
    out << text;
    if (!out.good()) throw InputError("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace confhess
