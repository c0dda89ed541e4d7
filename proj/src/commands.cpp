#include "pkv/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "json.hpp"
#include "pkv/api.hpp"
#include "pkv/http_server.hpp"
#include "pkv/index.hpp"
#include "pkv/pipeline.hpp"

namespace pkv {
namespace {

int status_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::FileNotFound:
    case ErrorCode::IoFailure:
    case ErrorCode::BadMagic:
    case ErrorCode::VersionMismatch:
    case ErrorCode::ChecksumMismatch:
      return kExitIo;
    case ErrorCode::EmptyVocabulary:
      return kExitEmptyVocabulary;
    case ErrorCode::UnknownPhrase:
    case ErrorCode::NotFound:
      return kExitUnknownPhrase;
    default:
      return kExitFailure;
  }
}

}  // namespace

int cmd_build(const std::filesystem::path& input, const std::filesystem::path& output, const Config& config,
              std::ostream& out, std::ostream& err) {
  try {
    const auto start = std::chrono::steady_clock::now();
    BuildResult built = build_embeddings(input, config);
    const SimilarityIndex index = build_index(built.set);
    save_index(index, output);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto& r = built.report;
    out << "records accepted:   " << r.records_accepted << "\n"
        << "records rejected:   " << r.records_rejected << "\n"
        << "phrases extracted:  " << r.phrases_extracted << "\n"
        << "phrases indexed:    " << r.phrases_final << "\n"
        << "dimensions:         " << r.dimensions << " (" << level_name(config.level) << ")\n"
        << "wall time:          " << std::fixed << std::setprecision(3) << seconds << " s\n"
        << "index written to " << output.string() << "\n";
    for (const auto& e : r.errors) err << "warning: " << e << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return status_for(e);
  }
}

int cmd_query(const std::filesystem::path& index_path, const std::string& phrase, std::size_t k, std::ostream& out,
              std::ostream& err) {
  SimilarityIndex index;
  try {
    index = load_index(index_path);
  } catch (const Error& e) {
    err << "error: " << index_path.string() << ": " << e.what() << "\n";
    return kExitIo;
  }
  const auto id = index.find(phrase);
  if (!id) {
    err << "unknown phrase: '" << normalize_query(phrase) << "'\n";
    const auto suggestions = index.suggestions(phrase);
    if (!suggestions.empty()) {
      err << "did you mean:\n";
      for (const auto& s : suggestions) err << "  " << s << "\n";
    }
    return kExitUnknownPhrase;
  }

  std::size_t rank = 0;
  while (rank < k) {
    const std::size_t limit = std::min(k - rank, SimilarityIndex::kMaxLimit);
    const SearchPage page = index.search_id(*id, rank, limit);
    for (const auto& r : page.results) {
      out << ++rank << '\t' << r.phrase << '\t' << format_similarity(r.similarity) << '\n';
    }
    if (page.results.size() < limit) break;
  }
  return kExitOk;
}

int cmd_export(const std::filesystem::path& index_path, const std::filesystem::path& output, std::ostream& out,
               std::ostream& err) {
  SimilarityIndex index;
  try {
    index = load_index(index_path);
  } catch (const Error& e) {
    err << "error: " << index_path.string() << ": " << e.what() << "\n";
    return kExitIo;
  }
  std::ofstream file(output, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot write " << output.string() << "\n";
    return kExitIo;
  }
  for (std::uint32_t id = 0; id < index.phrase_count(); ++id) {
    nlohmann::ordered_json line;
    line["phrase"] = index.phrase(id);
    auto dims = nlohmann::ordered_json::array();
    const auto d = index.vector_dims(id);
    const auto c = index.vector_counts(id);
    for (std::size_t k = 0; k < d.size(); ++k) dims.push_back({index.dimension_text(d[k]), c[k]});
    line["dims"] = std::move(dims);
    line["doc_freq"] = index.doc_freq(id);
    file << line.dump() << '\n';
  }
  file.close();
  if (!file) {
    err << "error: write failed for " << output.string() << "\n";
    return kExitIo;
  }
  out << "exported " << index.phrase_count() << " phrases to " << output.string() << "\n";
  return kExitOk;
}

int cmd_serve(const std::filesystem::path& index_path, const Config& config, std::ostream& out, std::ostream& err) {
  SimilarityIndex index;
  try {
    index = load_index(index_path);
  } catch (const Error& e) {
    err << "error: " << index_path.string() << ": " << e.what() << "\n";
    return kExitIo;
  }
  try {
    HttpServer server(index, {config.host, config.port, config.cors_origin, config.static_dir});
    const int port = server.bind();
    out << "serving " << index.phrase_count() << " phrases on http://" << config.host << ":" << port << std::endl;
    server.serve();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return status_for(e);
  }
  return kExitOk;
}

}  // namespace pkv
