// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Every tolerance and workload size is fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pkv/api.hpp"
#include "pkv/embed.hpp"
#include "pkv/extract.hpp"
#include "pkv/index.hpp"
#include "pkv/pipeline.hpp"
#include "pkv/text.hpp"
#include "support/oracle.hpp"
#include "support/synthetic.hpp"

using namespace pkv;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned parameters.
constexpr int kOracleCorpora = 50;
constexpr std::size_t kOracleMaxPatents = 200;
constexpr std::size_t kOracleMaxPhrases = 500;
constexpr double kOracleTolerance = 1e-9;

constexpr std::size_t kLatencyPhrases = 2'500'000;
constexpr std::size_t kLatencyDims = 10'000;
constexpr std::size_t kLatencyMeanNnz = 20;
constexpr std::size_t kLatencyQueries = 2000;
constexpr std::size_t kLatencyLimit = 20;
constexpr double kLatencyMedianMs = 200.0;
constexpr double kLatencyP99Ms = 500.0;
constexpr double kBuildLimitSeconds = 30.0 * 60.0;

constexpr double kNormRelTolerance = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

EmbeddingSet run_pipeline(const std::vector<PatentRecord>& records, std::uint32_t min_doc_freq) {
  std::stringstream jsonl;
  for (const auto& r : records) jsonl << serialize_patent_record(r) << "\n";
  Config config;
  config.min_doc_freq = min_doc_freq;
  return build_embeddings(jsonl, config).set;
}

PatentRecord make_record(std::string id, std::string abstract, std::vector<std::string> cpc, int year) {
  PatentRecord r;
  r.patent_id = std::move(id);
  r.abstract = std::move(abstract);
  r.cpc_codes = std::move(cpc);
  r.application_date = {year, 3, 15};
  return r;
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240501);
  std::size_t queries = 0, compared = 0;
  for (int c = 0; c < kOracleCorpora; ++c) {
    pkv::testing::CorpusSpec spec;
    spec.patents = 20 + rng() % (kOracleMaxPatents - 19);
    spec.phrases = 10 + rng() % (kOracleMaxPhrases - 9);
    spec.cpc_pool = 5 + rng() % 40;
    spec.id_prefix = "OR" + std::to_string(c) + "-";
    const auto pool = pkv::testing::phrase_pool(rng, spec.phrases);
    const auto set = run_pipeline(pkv::testing::random_corpus(rng, spec, pool), 1);
    if (set.phrases.size() > kOracleMaxPhrases) return {false, "vocabulary exceeded phrase bound"};
    const auto index = build_index(set);
    for (std::uint32_t q = 0; q < set.phrases.size(); ++q) {
      const auto expected = pkv::testing::brute_force_ranking(set, q);
      const auto page = index.search(set.phrases[q].phrase, 0, SimilarityIndex::kMaxLimit);
      if (page.query_id != q || page.total != expected.size() || page.results.size() != expected.size()) {
        return {false, "corpus " + std::to_string(c) + " query '" + set.phrases[q].phrase + "': result count differs"};
      }
      for (std::size_t k = 0; k < expected.size(); ++k) {
        if (page.results[k].phrase != expected[k].phrase ||
            std::fabs(page.results[k].similarity - expected[k].similarity) > kOracleTolerance) {
          return {false, "corpus " + std::to_string(c) + " query '" + set.phrases[q].phrase + "' rank " +
                             std::to_string(k + 1) + " differs"};
        }
      }
      ++queries;
      compared += expected.size();
    }
  }
  return {true, std::to_string(kOracleCorpora) + " corpora, " + std::to_string(queries) + " queries, " +
                    std::to_string(compared) + " ranked results equal to brute force (tol 1e-9)"};
}

Outcome latency() {
  const auto t0 = Clock::now();
  SimilarityIndex index;
  double build_s = 0;
  {
    const auto set = pkv::testing::clustered_embedding_set(7, kLatencyPhrases, kLatencyDims, kLatencyMeanNnz);
    const auto t1 = Clock::now();
    index = build_index(set);
    build_s = ms_since(t1) / 1000.0;
  }
  std::size_t nnz = 0;
  for (std::uint32_t d = 0; d < index.dimension_count(); ++d) nnz += index.posting_ids(d).size();
  const double setup_s = ms_since(t0) / 1000.0;

  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(index.phrase_count() - 1));
  std::vector<std::string> queries;
  for (std::size_t i = 0; i < kLatencyQueries; ++i) queries.push_back(index.phrase(pick(rng)));
  for (std::size_t i = 0; i < 20; ++i) index.search(queries[i], 0, kLatencyLimit);  // warm-up

  std::vector<double> times;
  times.reserve(queries.size());
  for (const auto& q : queries) {
    const auto start = Clock::now();
    const auto page = index.search(q, 0, kLatencyLimit);
    times.push_back(ms_since(start));
    if (page.results.empty() && page.total != 0) return {false, "empty page for nonempty result"};
  }
  std::sort(times.begin(), times.end());
  const double median = times[times.size() / 2];
  const double p99 = times[static_cast<std::size_t>(std::ceil(0.99 * times.size())) - 1];
  const bool pass = median < kLatencyMedianMs && p99 < kLatencyP99Ms && build_s < kBuildLimitSeconds;
  return {pass, std::to_string(index.phrase_count()) + " phrases, " + std::to_string(index.dimension_count()) +
                    " dims, " + fmt("%.1f", static_cast<double>(nnz) / index.phrase_count()) + " nnz/phrase; median " +
                    fmt("%.2f", median) + " ms (< 200), p99 " + fmt("%.2f", p99) + " ms (< 500), index build " +
                    fmt("%.1f", build_s) + " s (< 1800), total setup " + fmt("%.1f", setup_s) + " s, " +
                    std::to_string(std::max(1u, std::thread::hardware_concurrency())) + " hw threads"};
}

Outcome clustering() {
  std::mt19937_64 rng(31);
  const auto pool = pkv::testing::phrase_pool(rng, 80);
  const std::vector<std::string> pool_a(pool.begin(), pool.begin() + 40), pool_b(pool.begin() + 40, pool.end());
  std::vector<PatentRecord> records;
  std::set<std::string> in_a(pool_a.begin(), pool_a.end());
  auto add_group = [&](const std::vector<std::string>& group, char section, const std::string& hub) {
    for (int n = 0; n < 60; ++n) {
      std::vector<std::string> phrases;
      for (int k = 0; k < 4; ++k) phrases.push_back(group[rng() % group.size()]);
      std::vector<std::string> codes = {hub};
      char code[32];
      std::snprintf(code, sizeof code, "%c%02d%c %d/%02d", section, 1 + static_cast<int>(rng() % 20),
                    static_cast<char>('A' + rng() % 6), 1 + static_cast<int>(rng() % 30), static_cast<int>(rng() % 50));
      codes.push_back(code);
      records.push_back(make_record(std::string(1, section) + std::to_string(n),
                                    pkv::testing::abstract_from(rng, phrases), codes, 2000 + n % 15));
    }
  };
  add_group(pool_a, 'A', "A61K 9/00");
  add_group(pool_b, 'H', "H04L 9/00");
  const auto set = run_pipeline(records, 1);
  const auto index = build_index(set);

  double min_within = 2.0, max_cross = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < set.phrases.size(); ++i) {
    for (std::size_t j = i + 1; j < set.phrases.size(); ++j) {
      const double sim = cosine(set.phrases[i].cpc_vector, set.phrases[j].cpc_vector);
      const bool same = in_a.count(set.phrases[i].phrase) == in_a.count(set.phrases[j].phrase);
      if (same) {
        min_within = std::min(min_within, sim);
      } else {
        max_cross = std::max(max_cross, sim);
      }
      ++pairs;
    }
  }
  // The search path must agree: no query returns a phrase from the other cluster.
  for (std::uint32_t q = 0; q < index.phrase_count(); ++q) {
    for (const auto& r : index.search_id(q, 0, SimilarityIndex::kMaxLimit).results) {
      if (in_a.count(r.phrase) != in_a.count(index.phrase(q))) return {false, "cross-cluster search hit"};
    }
  }
  const bool pass = max_cross == 0.0 && min_within > max_cross;
  return {pass, std::to_string(set.phrases.size()) + " phrases, " + std::to_string(pairs) + " pairs; min within " +
                    fmt("%.6f", min_within) + ", max cross " + fmt("%.6f", max_cross)};
}

Outcome variant_retrieval() {
  std::mt19937_64 rng(5);
  const auto pool = pkv::testing::phrase_pool(rng, 150);
  pkv::testing::CorpusSpec spec;
  spec.patents = 300;
  spec.sections = "ABCDEFGH";
  auto records = pkv::testing::random_corpus(rng, spec, pool);
  const std::vector<std::vector<std::string>> codes = {
      {"H04W 88/02", "H04M 1/725"}, {"H04M 1/0202"}, {"H04W 4/80", "G06F 3/0488"}, {"H04M 1/72403", "H04W 88/02"}};
  for (std::size_t i = 0; i < codes.size(); ++i) {
    records.push_back(make_record("TBL" + std::to_string(i),
                                  "A Smartphone with a " + pool[i] + ". The smart phone has the " + pool[20 + i] + ".",
                                  codes[i], 2008 + static_cast<int>(i)));
  }
  const auto set = run_pipeline(records, 2);
  const auto index = build_index(set);
  const auto page = index.search("smartphone", 0, 10);
  if (page.results.empty()) return {false, "no results for smartphone"};
  const auto& top = page.results.front();
  const std::string shown = format_similarity(top.similarity);
  const auto api = SearchApi(index).search({{"q", "smartphone"}, {"limit", "1"}});
  const bool api_ok = api.status == 200 && api.body.find("\"phrase\":\"smart phone\",\"similarity\":1.000000") !=
                                               std::string::npos;
  const bool pass = top.phrase == "smart phone" && shown == "1.000000" && api_ok;
  return {pass, "rank 1 '" + top.phrase + "' similarity " + shown + " of " + std::to_string(page.total) + " results"};
}

Outcome normalization() {
  std::mt19937_64 rng(17);
  const StopWordList& stops = StopWordList::builtin();
  const std::vector<std::string> extras = {"ABC123",  "x86",   "3d",      "mp3",     "2019",
                                           "12.5",    "RÉSEAU", "Straße",  "devices", "coupling",
                                           "COUPLINGS", "supercalifragilisticexpialidociousness"};
  std::size_t abstracts = 0, phrases_checked = 0;
  std::vector<std::string> vocabulary;
  for (int t = 0; t < 400; ++t) {
    auto pool = pkv::testing::phrase_pool(rng, 6);
    for (auto& p : pool) {
      if (rng() % 3 == 0) p += "s";
      if (rng() % 4 == 0) p += " " + extras[rng() % extras.size()];
      if (rng() % 5 == 0) std::transform(p.begin(), p.end(), p.begin(), [](unsigned char ch) { return std::toupper(ch); });
    }
    const auto text = pkv::testing::abstract_from(rng, pool);
    ++abstracts;
    for (const auto& phrase : extract_phrases(text, stops)) {
      ++phrases_checked;
      if (text::has_uppercase(phrase)) return {false, "uppercase survived in '" + phrase + "'"};
      std::vector<std::string> tokens;
      std::istringstream split(phrase);
      for (std::string tok; split >> tok;) {
        if (is_cryptic_token(tok)) return {false, "cryptic token in '" + phrase + "'"};
        tokens.push_back(tok);
      }
      const auto again = normalize_phrase(tokens, stops);
      if (!again || *again != phrase) return {false, "normalize not idempotent on '" + phrase + "'"};
      if (normalize_query(phrase) != phrase) return {false, "query normalization changed '" + phrase + "'"};
      vocabulary.push_back(phrase);
    }
  }
  std::sort(vocabulary.begin(), vocabulary.end());
  vocabulary.erase(std::unique(vocabulary.begin(), vocabulary.end()), vocabulary.end());
  const auto variants = merge_variants(vocabulary);
  for (const auto& v : vocabulary) {
    const auto& c = variants.canonical(v);
    if (variants.canonical(c) != c) return {false, "variant map not idempotent at '" + v + "'"};
  }
  std::set<std::string> final_vocab;
  for (const auto& v : vocabulary) final_vocab.insert(variants.canonical(v));
  for (const auto& v : final_vocab) {
    if (v.size() > 1 && v.back() == 's' && final_vocab.count(v.substr(0, v.size() - 1))) {
      return {false, "plural pair survived: '" + v + "'"};
    }
  }
  return {true, std::to_string(abstracts) + " abstracts, " + std::to_string(phrases_checked) + " phrases, " +
                    std::to_string(final_vocab.size()) + " final vocabulary entries"};
}

Outcome conservation() {
  // Hand-counted fixture: smartphone occurs in EP1 (2 codes) and EP2 (2 codes).
  Config config;
  config.min_doc_freq = 1;
  const auto fixture = build_embeddings(fs::path(PKV_TEST_DATA) / "fixture.jsonl", config).set;
  const std::map<std::string, std::uint64_t> hand = {
      {"smartphone", 4}, {"smart phone", 4}, {"sensor", 4}, {"wheel hub", 2}, {"touch screen", 2}, {"charged", 2}};
  for (const auto& [phrase, total] : hand) {
    const auto pos = fixture.find(phrase);
    if (!pos || fixture.phrases[*pos].cpc_vector.total() != total) return {false, "fixture count for '" + phrase + "'"};
  }

  std::mt19937_64 rng(404);
  std::size_t phrases = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto pool = pkv::testing::phrase_pool(rng, 60);
    pkv::testing::CorpusSpec spec;
    spec.patents = 120;
    spec.id_prefix = "CN" + std::to_string(trial) + "-";
    // Each record lists the phrases its abstract was written from; the hand
    // count adds the record's code count once per distinct phrase.
    std::vector<PatentRecord> records = pkv::testing::random_corpus(rng, spec, pool);
    std::map<std::string, std::uint64_t> expected;
    for (auto& r : records) {
      std::vector<std::string> chosen;
      for (std::size_t k = 1 + rng() % 5; k > 0; --k) chosen.push_back(pool[rng() % pool.size()]);
      r.abstract = pkv::testing::abstract_from(rng, chosen);
      for (const auto& p : std::set<std::string>(chosen.begin(), chosen.end())) expected[p] += r.cpc_codes.size();
    }
    const auto set = run_pipeline(records, 1);
    for (const auto& kp : set.phrases) {
      if (kp.cpc_vector.total() != expected[kp.phrase]) return {false, "count mismatch for '" + kp.phrase + "'"};
      double sq = 0;
      for (const auto& e : kp.cpc_vector.entries()) sq += static_cast<double>(e.count) * e.count;
      const double recomputed = std::sqrt(sq);
      if (std::fabs(kp.cpc_vector.norm() - recomputed) > kNormRelTolerance * recomputed) {
        return {false, "norm cache mismatch for '" + kp.phrase + "'"};
      }
      ++phrases;
    }
    if (set.phrases.size() != expected.size()) return {false, "vocabulary size differs from hand count"};
  }
  return {true, "fixture hand counts match; " + std::to_string(phrases) +
                    " synthetic phrases with conserved totals and norms (rel 1e-9)"};
}

Outcome persistence() {
  const auto dir = fs::temp_directory_path() / "pkv_acceptance";
  fs::create_directories(dir);
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const auto index = build_index(pkv::testing::random_embedding_set(rng, 200 + trial * 50, 50, 12, 500));
    const auto path = dir / ("round" + std::to_string(trial) + ".pkvx");
    save_index(index, path);
    if (!(load_index(path) == index)) return {false, "round-trip differs at trial " + std::to_string(trial)};
  }
  Config config;
  config.min_doc_freq = 1;
  const auto fixture = build_index(build_embeddings(fs::path(PKV_TEST_DATA) / "fixture.jsonl", config).set);
  const auto path = dir / "fixture.pkvx";
  save_index(fixture, path);
  if (!(load_index(path) == fixture)) return {false, "fixture round-trip differs"};

  std::ifstream in(path, std::ios::binary);
  const std::vector<char> good((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto rejected_with = [&](std::vector<char> bytes, ErrorCode expected) {
    const auto bad = dir / "corrupt.pkvx";
    std::ofstream(bad, std::ios::binary | std::ios::trunc).write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    try {
      load_index(bad);
    } catch (const Error& e) {
      return e.code() == expected;
    }
    return false;
  };
  auto magic = good;
  magic[1] = 'Q';
  auto version = good;
  version[4] = 9;
  auto truncated = good;
  truncated.resize(good.size() - 9);
  if (!rejected_with(magic, ErrorCode::BadMagic)) return {false, "bad magic not rejected"};
  if (!rejected_with(version, ErrorCode::VersionMismatch)) return {false, "version mismatch not rejected"};
  if (!rejected_with(truncated, ErrorCode::ChecksumMismatch)) return {false, "truncation not rejected"};
  std::size_t flips = 0;
  for (std::size_t pos = 8; pos < good.size(); ++pos) {
    auto flipped = good;
    flipped[pos] = static_cast<char>(flipped[pos] ^ 0x01);
    if (!rejected_with(flipped, ErrorCode::ChecksumMismatch)) return {false, "flip at byte " + std::to_string(pos)};
    ++flips;
  }
  return {true, "11 round-trips equal; magic, version, truncation and " + std::to_string(flips) +
                    " single-bit flips rejected"};
}

Outcome api_contract() {
  Config config;
  config.min_doc_freq = 1;
  const auto fixture = build_index(build_embeddings(fs::path(PKV_TEST_DATA) / "fixture.jsonl", config).set);
  std::mt19937_64 rng(8);
  const auto synthetic = build_index(pkv::testing::random_embedding_set(rng, 400, 30, 6, 9));
  std::size_t checks = 0;
  for (const SimilarityIndex* index : {&fixture, &synthetic}) {
    const SearchApi api(*index);
    for (std::uint32_t id = 0; id < index->phrase_count(); ++id) {
      const std::string q = index->phrase(id);
      const auto full = api.search({{"q", q}, {"limit", "1000"}});
      if (full.status != 200) return {false, "search failed for '" + q + "'"};
      // Interleave another request; responses depend only on the request.
      api.search({{"q", index->phrase((id + 1) % index->phrase_count())}});
      if (api.search({{"q", q}, {"limit", "1000"}}).body != full.body) return {false, "nondeterministic body"};
      const std::size_t page_size = 1 + id % 7;
      const auto total = index->search_id(id, 0, 1).total;
      std::string stitched;
      for (std::size_t off = 0; off < total + page_size; off += page_size) {
        const auto page = index->search_id(id, off, page_size);
        for (const auto& r : page.results) stitched += r.phrase + "\t" + format_similarity(r.similarity) + "\n";
      }
      std::string whole;
      for (const auto& r : index->search_id(id, 0, SimilarityIndex::kMaxLimit).results) {
        whole += r.phrase + "\t" + format_similarity(r.similarity) + "\n";
      }
      if (stitched != whole) return {false, "pagination mismatch for '" + q + "'"};
      ++checks;
    }
    if (api.search({{"q", "qqqqzzzz"}}).status != 404) return {false, "unknown phrase not 404"};
    if (api.search({{"q", index->phrase(0)}, {"limit", "0"}}).status != 400) return {false, "limit 0 accepted"};
    if (api.search({{"q", index->phrase(0)}, {"limit", "1001"}}).status != 400) return {false, "limit 1001 accepted"};
  }
  return {true, std::to_string(checks) + " queries: repeat bodies byte-identical, page concatenation equals full ranking"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"query latency at 2.5M phrases", latency},
      {"disjoint-section clustering", clustering},
      {"variant retrieval (smartphone -> smart phone)", variant_retrieval},
      {"normalization properties", normalization},
      {"embedding conservation", conservation},
      {"index persistence", persistence},
      {"API determinism and pagination", api_contract},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    const auto start = Clock::now();
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] %s: %s (%.1f s)\n", outcome.pass ? "PASS" : "FAIL", name.c_str(), outcome.detail.c_str(),
                ms_since(start) / 1000.0);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
