#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "pkv/config.hpp"

namespace pkv {

/// Process exit statuses shared by the CLI commands.
enum ExitStatus : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitIo = 2,            // unreadable input, bad index file, unwritable output
  kExitEmptyVocabulary = 3,
  kExitUnknownPhrase = 4,
};

int cmd_build(const std::filesystem::path& input, const std::filesystem::path& output, const Config& config,
              std::ostream& out, std::ostream& err);

/// Prints up to k rows "rank<TAB>phrase<TAB>similarity".
int cmd_query(const std::filesystem::path& index_path, const std::string& phrase, std::size_t k, std::ostream& out,
              std::ostream& err);

/// One JSON line per phrase: {"phrase", "dims":[[code, count]...], "doc_freq"}.
int cmd_export(const std::filesystem::path& index_path, const std::filesystem::path& output, std::ostream& out,
               std::ostream& err);

/// Blocks serving HTTP until the process is stopped.
int cmd_serve(const std::filesystem::path& index_path, const Config& config, std::ostream& out, std::ostream& err);

}  // namespace pkv
