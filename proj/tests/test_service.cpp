#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "pkv/api.hpp"
#include "pkv/commands.hpp"
#include "pkv/config.hpp"
#include "pkv/http_server.hpp"
#include "pkv/pipeline.hpp"

using namespace pkv;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const SimilarityIndex& fixture_index() {
  static const SimilarityIndex index = [] {
    Config config;
    config.min_doc_freq = 1;
    return build_index(build_embeddings(fs::path(PKV_TEST_DATA) / "fixture.jsonl", config).set);
  }();
  return index;
}

fs::path temp_dir() {
  const auto dir = fs::temp_directory_path() / "pkv_service";
  fs::create_directories(dir);
  return dir;
}

fs::path fixture_index_file() {
  const auto path = temp_dir() / "fixture.pkvx";
  save_index(fixture_index(), path);
  return path;
}

}  // namespace

TEST(SearchApi, SearchReturnsOrderedPage) {
  const SearchApi api(fixture_index());
  const auto r = api.handle("/api/search", {{"q", "sensor"}, {"limit", "5"}});
  ASSERT_EQ(r.status, 200);
  const auto body = json::parse(r.body);
  EXPECT_EQ(body["query"], "sensor");
  const auto& results = body["results"];
  ASSERT_LE(results.size(), 5u);
  ASSERT_FALSE(results.empty());
  for (std::size_t k = 1; k < results.size(); ++k) {
    EXPECT_GE(results[k - 1]["similarity"].get<double>(), results[k]["similarity"].get<double>());
  }
}

TEST(SearchApi, SmartphoneExample) {
  const SearchApi api(fixture_index());
  const auto r = api.search({{"q", "Smartphones"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_TRUE(r.body.starts_with("{\"query\":\"smartphone\",\"total\":6,\"results\":[{\"id\":7,")) << r.body;
  EXPECT_NE(r.body.find("\"phrase\":\"smart phone\",\"similarity\":1.000000}"), std::string::npos);
  EXPECT_NE(r.body.find("\"phrase\":\"sensor\",\"similarity\":0.612372}"), std::string::npos);
}

TEST(SearchApi, ParameterErrors) {
  const SearchApi api(fixture_index());
  EXPECT_EQ(api.search({}).status, 400);
  EXPECT_EQ(api.search({{"q", ""}}).status, 400);
  EXPECT_EQ(api.search({{"q", "sensor"}, {"limit", "0"}}).status, 400);
  EXPECT_EQ(api.search({{"q", "sensor"}, {"limit", "1001"}}).status, 400);
  EXPECT_EQ(api.search({{"q", "sensor"}, {"limit", "ten"}}).status, 400);
  EXPECT_EQ(api.search({{"q", "sensor"}, {"offset", "-1"}}).status, 400);
  EXPECT_EQ(api.search({{"q", "sensor"}, {"limit", "1000"}}).status, 200);
  EXPECT_EQ(api.handle("/api/nothing", {}).status, 404);
}

TEST(SearchApi, UnknownPhraseSuggests) {
  const SearchApi api(fixture_index());
  const auto r = api.search({{"q", "zzzz"}});
  EXPECT_EQ(r.status, 404);
  const auto body = json::parse(r.body);
  EXPECT_EQ(body["error"], "unknown phrase");
  EXPECT_TRUE(body["suggestions"].empty());
  const auto s = json::parse(api.search({{"q", "smart"}}).body);
  EXPECT_EQ(s["suggestions"], json::array({"smart phone", "smartphone"}));
}

TEST(SearchApi, PhraseMetadata) {
  const SearchApi api(fixture_index());
  const auto id = *fixture_index().id_of("smartphone");
  const auto r = api.phrase_by_id(std::to_string(id));
  ASSERT_EQ(r.status, 200);
  const auto body = json::parse(r.body);
  EXPECT_EQ(body["phrase"], "smartphone");
  EXPECT_EQ(body["timeline"], json::parse("[[2009,1],[2011,1]]"));
  EXPECT_EQ(body["top_applicants"], json::parse("[[\"Acme Corp\",2]]"));
  EXPECT_EQ(body["top_inventors"], json::parse("[[\"Jane Doe\",2],[\"John Roe\",1]]"));
  EXPECT_EQ(body["top_cpc"], json::parse("[[\"H04W88\",2],[\"G06F3\",1],[\"H04M1\",1]]"));
  EXPECT_EQ(body["doc_freq"], 2);

  EXPECT_EQ(api.phrase_by_text({{"q", "SMARTPHONES"}}).body, r.body);
  EXPECT_EQ(api.handle("/api/phrase/" + std::to_string(id), {}).body, r.body);
  EXPECT_EQ(api.phrase_by_id("999").status, 404);
  EXPECT_EQ(api.phrase_by_id("abc").status, 400);
  EXPECT_EQ(api.phrase_by_text({{"q", "zzzz"}}).status, 404);
}

TEST(SearchApi, Health) {
  const SearchApi api(fixture_index());
  const auto r = api.handle("/healthz", {});
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body)["phrases"], 12);
}

TEST(SearchApi, DeterministicAndPaginated) {
  const SearchApi api(fixture_index());
  for (std::uint32_t id = 0; id < fixture_index().phrase_count(); ++id) {
    const std::string q = fixture_index().phrase(id);
    const auto full = api.search({{"q", q}, {"limit", "1000"}});
    EXPECT_EQ(api.search({{"q", q}, {"limit", "1000"}}).body, full.body);
    const auto all = json::parse(full.body)["results"];
    json pieces = json::array();
    for (std::size_t off = 0; off < all.size() + 2; off += 2) {
      const auto page = json::parse(api.search({{"q", q}, {"offset", std::to_string(off)}, {"limit", "2"}}).body);
      EXPECT_EQ(page["total"], all.size());
      for (const auto& r : page["results"]) pieces.push_back(r);
    }
    EXPECT_EQ(pieces, all);
  }
}

TEST(HttpServer, ServesApiOverHttp) {
  HttpServer server(fixture_index(), {"127.0.0.1", 0, "*", ""});
  const int port = server.bind();
  ASSERT_GT(port, 0);
  std::thread t([&] { server.serve(); });

  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(std::chrono::seconds(5));
  auto res = client.Get("/api/search?q=smartphone&limit=3");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, SearchApi(fixture_index()).search({{"q", "smartphone"}, {"limit", "3"}}).body);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_NE(res->get_header_value("Content-Type").find("application/json"), std::string::npos);

  res = client.Get("/api/search?q=smart%20phone");
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body)["query"], "smart phone");

  res = client.Get("/api/search?q=zzzz");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  res = client.Get("/api/phrase/3");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  res = client.Get("/healthz");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);

  server.stop();
  t.join();
}

TEST(ConfigTest, PrecedenceFileEnvOverride) {
  const auto path = temp_dir() / "pkv.conf";
  {
    std::ofstream f(path);
    f << "# settings\n[build]\nlevel = subclass\nmin_doc_freq = 5\nport=9000\nhost = \"0.0.0.0\"\n";
  }
  Config c;
  EXPECT_EQ(c.min_doc_freq, 2u);
  EXPECT_EQ(c.level, GranularityLevel::MainGroup);
  c.load_file(path);
  EXPECT_EQ(c.level, GranularityLevel::Subclass);
  EXPECT_EQ(c.min_doc_freq, 5u);
  EXPECT_EQ(c.host, "0.0.0.0");
  c.load_env([](const char* name) -> const char* {
    return std::string_view(name) == "PKV_MIN_DOC_FREQ" ? "3" : nullptr;
  });
  EXPECT_EQ(c.min_doc_freq, 3u);
  EXPECT_EQ(c.port, 9000);
  c.set("min_doc_freq", "1");  // command line wins
  EXPECT_EQ(c.min_doc_freq, 1u);
}

TEST(ConfigTest, Errors) {
  Config c;
  auto code = [&](std::string_view key, std::string_view value) {
    try {
      c.set(key, value);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code("level", "family"), ErrorCode::BadConfig);
  EXPECT_EQ(code("port", "http"), ErrorCode::BadConfig);
  EXPECT_EQ(code("colour", "red"), ErrorCode::BadConfig);
  try {
    c.load_file(temp_dir() / "absent.conf");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
  }
}

TEST(Commands, QueryPrintsRankedRows) {
  const auto path = fixture_index_file();
  std::ostringstream out, err;
  EXPECT_EQ(cmd_query(path, "smartphone", 3, out, err), kExitOk);
  EXPECT_EQ(out.str(), "1\tsmart phone\t1.000000\n2\tcharged\t0.866025\n3\tportable terminal\t0.866025\n");

  std::ostringstream all;
  EXPECT_EQ(cmd_query(path, "smartphone", 5000, all, err), kExitOk);
  const std::string rows = all.str();
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 6);
}

TEST(Commands, QueryErrors) {
  const auto path = fixture_index_file();
  std::ostringstream out, err;
  EXPECT_EQ(cmd_query(path, "smart", 3, out, err), kExitUnknownPhrase);
  EXPECT_NE(err.str().find("smartphone"), std::string::npos);
  EXPECT_EQ(cmd_query(temp_dir() / "none.pkvx", "smartphone", 3, out, err), kExitIo);
}

TEST(Commands, ExportWritesOneLinePerPhrase) {
  const auto path = fixture_index_file();
  const auto target = temp_dir() / "vectors.jsonl";
  std::ostringstream out, err;
  ASSERT_EQ(cmd_export(path, target, out, err), kExitOk);
  std::ifstream in(target);
  std::string line;
  std::size_t lines = 0;
  const auto& index = fixture_index();
  while (std::getline(in, line)) {
    const auto row = json::parse(line);
    const auto id = *index.id_of(row["phrase"].get<std::string>());
    double sq = 0;
    for (const auto& d : row["dims"]) sq += std::pow(d[1].get<double>(), 2);
    EXPECT_NEAR(std::sqrt(sq), index.norm(id), 1e-9);
    EXPECT_EQ(row["doc_freq"], index.doc_freq(id));
    ++lines;
  }
  EXPECT_EQ(lines, 12u);
  EXPECT_EQ(cmd_export(path, temp_dir() / "missing" / "v.jsonl", out, err), kExitIo);
}

TEST(Commands, BuildStatuses) {
  std::ostringstream out, err;
  Config config;
  config.min_doc_freq = 1;
  const auto target = temp_dir() / "built.pkvx";
  EXPECT_EQ(cmd_build(fs::path(PKV_TEST_DATA) / "fixture.jsonl", target, config, out, err), kExitOk);
  EXPECT_EQ(load_index(target), fixture_index());
  EXPECT_EQ(cmd_build(temp_dir() / "absent.jsonl", target, config, out, err), kExitIo);
  config.min_doc_freq = 100;
  EXPECT_EQ(cmd_build(fs::path(PKV_TEST_DATA) / "fixture.jsonl", target, config, out, err), kExitEmptyVocabulary);
}
