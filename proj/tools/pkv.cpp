// pkv: build, query, serve and export patent key-phrase similarity indexes.

#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "pkv/commands.hpp"
#include "pkv/error.hpp"

namespace {

// CLI flags override only when given, so file/env values survive otherwise.
template <class T>
void override_if(pkv::Config& config, const char* key, const std::optional<T>& value) {
  if (!value) return;
  if constexpr (std::is_same_v<T, std::string>) {
    config.set(key, *value);
  } else {
    config.set(key, std::to_string(*value));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Patent key-phrase embedding and synonym search"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "key=value config file");

  std::string input, output, index_path, phrase;
  std::optional<std::string> level, stopwords, cors, host, static_dir;
  std::optional<std::uint32_t> min_doc_freq;
  std::optional<std::size_t> max_phrase_len;
  std::optional<int> port;
  std::size_t k = 10;

  auto* build = app.add_subcommand("build", "Extract, embed and index a JSONL patent corpus");
  build->add_option("--input", input, "JSONL corpus")->required();
  build->add_option("--output", output, "index file to write")->required();
  build->add_option("--level", level, "section|class|subclass|group|subgroup");
  build->add_option("--min-doc-freq", min_doc_freq, "drop phrases seen in fewer patents");
  build->add_option("--max-phrase-len", max_phrase_len, "longest key phrase in tokens");
  build->add_option("--stopwords", stopwords, "extra stop-word file");

  auto* query = app.add_subcommand("query", "Print the nearest phrases of PHRASE");
  query->add_option("--index", index_path, "index file")->required();
  query->add_option("phrase", phrase, "query phrase")->required();
  query->add_option("-k", k, "number of rows")->check(CLI::PositiveNumber);

  auto* serve = app.add_subcommand("serve", "Serve the HTTP search API");
  serve->add_option("--index", index_path, "index file")->required();
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "listen port");
  serve->add_option("--cors", cors, "allowed CORS origin");
  serve->add_option("--static", static_dir, "directory served at /");

  auto* exp = app.add_subcommand("export", "Write phrase vectors as JSONL");
  exp->add_option("--index", index_path, "index file")->required();
  exp->add_option("--output", output, "JSONL output file")->required();

  CLI11_PARSE(app, argc, argv);

  pkv::Config config;
  try {
    if (!config_path.empty()) config.load_file(config_path);
    config.load_env();
    override_if(config, "level", level);
    override_if(config, "min_doc_freq", min_doc_freq);
    override_if(config, "max_phrase_len", max_phrase_len);
    override_if(config, "stopword_path", stopwords);
    override_if(config, "host", host);
    override_if(config, "port", port);
    override_if(config, "cors", cors);
    override_if(config, "static_dir", static_dir);
  } catch (const pkv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pkv::kExitFailure;
  }

  if (*build) return pkv::cmd_build(input, output, config, std::cout, std::cerr);
  if (*query) return pkv::cmd_query(index_path, phrase, k, std::cout, std::cerr);
  if (*serve) return pkv::cmd_serve(index_path, config, std::cout, std::cerr);
  if (*exp) return pkv::cmd_export(index_path, output, std::cout, std::cerr);
  return pkv::kExitFailure;
}
