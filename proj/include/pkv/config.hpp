#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include "pkv/cpc.hpp"
#include "pkv/extract.hpp"

namespace pkv {

/// Runtime settings. Sources are applied lowest precedence first: defaults,
/// then a key=value config file, then PKV_* environment variables, then CLI
/// flags.
struct Config {
  GranularityLevel level = GranularityLevel::MainGroup;
  std::uint32_t min_doc_freq = 2;
  ExtractConfig extract;
  std::string stopword_path;

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cors_origin;
  std::string static_dir;

  /// Keys: level, min_doc_freq, max_phrase_len, min_phrase_score,
  /// stopword_path, host, port, cors, static_dir. Throws Error(BadConfig).
  void set(std::string_view key, std::string_view value);

  /// "key = value" lines; '#' comments, [section] headers and surrounding
  /// quotes on values are ignored. Throws Error(FileNotFound/BadConfig).
  void load_file(const std::filesystem::path& path);

  /// Reads PKV_<KEY> for every known key, e.g. PKV_MIN_DOC_FREQ.
  void load_env(const std::function<const char*(const char*)>& lookup);
  void load_env();
};

}  // namespace pkv
