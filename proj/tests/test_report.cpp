#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "qwedge/qwedge.hpp"

using namespace qwedge;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag)
      : path(std::filesystem::temp_directory_path() / ("qwedge-test-" + tag + "-" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

RunConfig small_dims() {
  RunConfig c;
  c.ideal_case = "s2";
  c.kmax = 3;
  return c;
}

std::string without_timestamps(const Report& r) {
  json j = r.to_json();
  j["meta"].erase("timestamps");
  return j.dump();
}

}  // namespace

TEST(Cache, KeyDependsOnEveryInput) {
  const json p{{"case", "s2"}};
  const auto pts0 = sample_points(0, 3), pts1 = sample_points(1, 3);
  const auto k = cache_key("dims", p, pts0);
  EXPECT_EQ(k, cache_key("dims", p, pts0));
  EXPECT_NE(k, cache_key("dims", p, pts1));
  EXPECT_NE(k, cache_key("radical", p, pts0));
  EXPECT_NE(k, cache_key("dims", json{{"case", "s3"}}, pts0));
  EXPECT_EQ(k.size(), 16u);
}

TEST(Cache, RoundTripVersionAndCorruption) {
  TempDir dir("cache");
  const ResultCache cache(dir.path, 7);
  EXPECT_FALSE(cache.get("abc"));
  cache.put("abc", json{{"x", 1}});
  ASSERT_TRUE(cache.get("abc"));
  EXPECT_EQ((*cache.get("abc"))["x"], 1);
  // No temporary files are left behind.
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir.path)) {
    EXPECT_EQ(e.path().extension(), ".json");
    ++files;
  }
  EXPECT_EQ(files, 1u);
  // A different engine version does not see the entry.
  EXPECT_FALSE(ResultCache(dir.path, 8).get("abc"));
  std::ofstream(dir.path / "abc.json", std::ios::trunc) << "{\"key\": ";
  EXPECT_FALSE(cache.get("abc"));
}

TEST(Runner, CachedRunIsIdentical) {
  TempDir dir("runner");
  RunConfig c = small_dims();
  c.cache_dir = dir.path.string();
  Runner a(c), b(c);
  const auto ra = a.run("dims"), rb = b.run("dims");
  EXPECT_EQ(a.cache_hits(), 0u);
  EXPECT_GT(b.cache_hits(), 0u);
  EXPECT_EQ(without_timestamps(ra), without_timestamps(rb));
  EXPECT_TRUE(ra.ok());
}

TEST(Runner, SeedChangesPointsButNotDims) {
  RunConfig c = small_dims();
  const auto r0 = Runner(c).run("dims");
  c.seed = 5;
  const auto r5 = Runner(c).run("dims");
  ASSERT_EQ(r0.results.size(), r5.results.size());
  for (std::size_t i = 0; i < r0.results.size(); ++i) {
    EXPECT_EQ(r0.results[i].computed, r5.results[i].computed);
    EXPECT_NE(r0.results[i].rank_evidence, r5.results[i].rank_evidence);
  }
}

TEST(Runner, ConfigErrorsAreReported) {
  RunConfig c = small_dims();
  c.kmax = 6;
  const auto r = Runner(c).run("dims");
  ASSERT_TRUE(r.error);
  EXPECT_EQ((*r.error)["kind"], "config");
  EXPECT_FALSE(r.ok());
  c.kmax = 3;
  c.n = 4;
  EXPECT_EQ((*Runner(c).run("radical").error)["kind"], "config");
  EXPECT_TRUE(Runner(c).run("nonsense").error);
}

TEST(Emit, JsonSchemaAndExpectedDiscipline) {
  RunConfig c;
  const auto r = Runner(c).run("spectrum");
  const json j = json::parse(emit(r, "json"));
  EXPECT_EQ(j["schema"], kSchemaVersion);
  for (const char* key : {"config", "version", "timestamps", "engine_version"}) EXPECT_TRUE(j["meta"].contains(key)) << key;
  for (const auto& x : j["results"]) {
    for (const char* key : {"name", "computed", "provenance", "rank_evidence", "pass"}) EXPECT_TRUE(x.contains(key)) << key;
    for (const auto& e : x["rank_evidence"]) EXPECT_TRUE(e["agreed"].get<bool>());
    // Multiplicities have no reference value, so no expected field.
    if (x["name"].get<std::string>().find("multiplicities") != std::string::npos) {
      EXPECT_FALSE(x.contains("expected"));
    }
  }
  EXPECT_TRUE(j["summary"]["ok"].get<bool>());
}

TEST(Emit, MarkdownAndCsvShapes) {
  RunConfig c;
  const auto r = Runner(c).run("spectrum");
  const auto md = emit(r, "md");
  EXPECT_NE(md.find("| o3-plus: sigma eigenvalue set |"), std::string::npos);
  EXPECT_NE(md.find("q^3"), std::string::npos);
  EXPECT_NE(md.find("-q^-1"), std::string::npos);
  const auto csv = emit(r, "csv");
  EXPECT_EQ(csv.rfind("name,expected,computed,provenance,agreed,pass\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), r.results.size() + 1);
  EXPECT_THROW(emit(r, "xml"), ConfigError);
}

TEST(Parallel, ResultsDoNotDependOnWorkerCount) {
  std::vector<int> a(20), b(20);
  parallel_for(1, a.size(), [&](std::size_t i) { a[i] = static_cast<int>(i * i); });
  parallel_for(4, b.size(), [&](std::size_t i) { b[i] = static_cast<int>(i * i); });
  EXPECT_EQ(a, b);
  EXPECT_THROW(parallel_for(3, 5, [](std::size_t i) {
                 if (i == 2) throw ConfigError("x");
               }),
               ConfigError);
}
