#include "pkv/pipeline.hpp"

#include <chrono>
#include <istream>

#include "pkv/corpus.hpp"
#include "pkv/error.hpp"

namespace pkv {
namespace {

BuildResult run(CorpusReader& reader, const Config& config) {
  const auto start = std::chrono::steady_clock::now();
  const StopWordList stops = load_stopwords(config);
  EmbeddingBuilder builder(config.level);
  BuildReport report;
  std::size_t cpc_rejects = 0;

  auto note = [&](std::size_t line, const std::string& message) {
    if (report.errors.size() < BuildReport::kMaxReportedErrors) {
      report.errors.push_back("line " + std::to_string(line) + ": " + message);
    }
  };

  while (auto entry = reader.next()) {
    if (!entry->ok()) {
      note(entry->line_number, entry->error().what());
      continue;
    }
    const PatentRecord& rec = entry->record();
    const auto phrases = extract_phrases(rec.abstract, stops, config.extract);
    try {
      builder.add_record(rec, phrases);
    } catch (const Error& e) {
      ++cpc_rejects;
      note(entry->line_number, e.what());
    }
  }

  report.records_accepted = reader.totals().accepted - cpc_rejects;
  report.records_rejected = reader.totals().rejected + cpc_rejects;
  report.phrases_extracted = builder.phrase_count();

  BuildResult result{finalize(builder, config.min_doc_freq), {}};
  report.phrases_final = result.set.phrases.size();
  report.dimensions = result.set.registry.size();
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.report = std::move(report);
  return result;
}

}  // namespace

StopWordList load_stopwords(const Config& config) {
  StopWordList stops = StopWordList::builtin();
  if (!config.stopword_path.empty()) stops.merge(StopWordList::from_file(config.stopword_path));
  return stops;
}

BuildResult build_embeddings(const std::filesystem::path& corpus, const Config& config) {
  CorpusReader reader(corpus);
  return run(reader, config);
}

BuildResult build_embeddings(std::istream& corpus, const Config& config) {
  CorpusReader reader(corpus);
  return run(reader, config);
}

}  // namespace pkv
