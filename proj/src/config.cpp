#include "pkv/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include "pkv/error.hpp"

namespace pkv {
namespace {

constexpr std::string_view kKeys[] = {"level",         "min_doc_freq", "max_phrase_len", "min_phrase_score",
                                      "stopword_path", "host",         "port",           "cors",
                                      "static_dir"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::BadConfig, std::string(key) + ": not a number: '" + std::string(value) + "'");
  }
  return out;
}

}  // namespace

void Config::set(std::string_view key, std::string_view value) {
  if (key == "level") {
    auto parsed = parse_level(value);
    if (!parsed) throw Error(ErrorCode::BadConfig, "level: unknown value '" + std::string(value) + "'");
    level = *parsed;
  } else if (key == "min_doc_freq") {
    min_doc_freq = parse_number<std::uint32_t>(key, value);
  } else if (key == "max_phrase_len") {
    extract.max_phrase_len = parse_number<std::size_t>(key, value);
    if (extract.max_phrase_len == 0) throw Error(ErrorCode::BadConfig, "max_phrase_len must be >= 1");
  } else if (key == "min_phrase_score") {
    // from_chars for double is missing from older libstdc++.
    try {
      std::size_t used = 0;
      extract.min_phrase_score = std::stod(std::string(value), &used);
      if (used != value.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::BadConfig, "min_phrase_score: not a number: '" + std::string(value) + "'");
    }
  } else if (key == "stopword_path") {
    stopword_path = value;
  } else if (key == "host") {
    host = value;
  } else if (key == "port") {
    port = parse_number<int>(key, value);
    if (port < 0 || port > 65535) throw Error(ErrorCode::BadConfig, "port out of range");
  } else if (key == "cors") {
    cors_origin = value;
  } else if (key == "static_dir") {
    static_dir = value;
  } else {
    throw Error(ErrorCode::BadConfig, "unknown key '" + std::string(key) + "'");
  }
}

void Config::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty() || view.front() == '[') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::BadConfig, path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(view.substr(0, eq));
    auto value = trim(view.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    set(key, value);
  }
}

void Config::load_env(const std::function<const char*(const char*)>& lookup) {
  for (auto key : kKeys) {
    std::string name = "PKV_";
    for (char c : key) name.push_back(static_cast<char>(c >= 'a' && c <= 'z' ? c - 32 : c));
    if (const char* value = lookup(name.c_str())) set(key, value);
  }
}

void Config::load_env() {
  load_env([](const char* name) { return std::getenv(name); });
}

}  // namespace pkv
