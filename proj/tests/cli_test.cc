// Copyright 2026 The Hypernym Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "hypernym/embedding_io.h"
#include "hypernym/enricher.h"
#include "hypernym/grounding.h"
#include "hypernym/ontology.h"
#include "hypernym/records.h"
#include "test_support.h"

namespace hypernym {
namespace {

using testing::DataPath;
using testing::ReadFile;
using testing::TempDir;
using testing::WriteFile;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult RunTool(std::vector<std::string> args, const std::string& stdin_text = "") {
  args.insert(args.begin(), "hypernym");
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = cli::RunCli(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

std::vector<std::string> HypernymizeArgs(const std::string& cache = DataPath("kb_cache")) {
  return {"hypernymize", "--ontology", DataPath("ontology.tsv").string(), "--cache-dir", cache,
          "-i", DataPath("ne_rich_captions.jsonl").string()};
}

std::vector<std::string> EnrichArgs(int seed) {
  return {"enrich", "--ontology", DataPath("ontology.tsv").string(), "--ne-snapshot",
          DataPath("ne_snapshot.jsonl").string(), "--locations",
          DataPath("locations.txt").string(), "-i", DataPath("ne_free_reference.txt").string(),
          "--seed", std::to_string(seed)};
}

std::vector<std::string> With(std::vector<std::string> args,
                              std::initializer_list<std::string> more) {
  args.insert(args.end(), more);
  return args;
}

TEST(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(RunTool({}).code, cli::kExitUsage);
  EXPECT_EQ(RunTool({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(RunTool({"stats", "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(RunTool({"stats", "--offline", "--online"}).code, cli::kExitUsage);
  EXPECT_EQ(RunTool({"stats", "--jobs", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(RunTool({"stats", "--help"}).code, cli::kExitOk);
}

TEST(CliTest, ConfigFileValidation) {
  TempDir dir;
  WriteFile(dir / "bad_key.json", R"({"sed": 3})");
  WriteFile(dir / "bad_type.json", R"({"seed": "three"})");
  WriteFile(dir / "broken.json", R"({"seed": )");
  for (const char* name : {"bad_key.json", "bad_type.json", "broken.json"}) {
    const RunResult r = RunTool({"stats", "--config", (dir / name).string()}, "a dog\n");
    EXPECT_EQ(r.code, cli::kExitUsage) << name << ": " << r.err;
  }
  EXPECT_EQ(RunTool({"stats", "--config", (dir / "nope.json").string()}, "a\n").code, cli::kExitIo);
}

TEST(CliTest, ConfigPrecedence) {
  TempDir dir;
  WriteFile(dir / "c.json", R"({"seed": 11, "jobs": 2})");
  ::setenv("HYPERNYM_CACHE_DIR", "/env/cache", 1);
  const RunResult r = RunTool({"stats", "--config", (dir / "c.json").string(), "--seed", "12",
                           "-o", (dir / "out.txt").string()},
                          "a dog\n");
  ::unsetenv("HYPERNYM_CACHE_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto echo = nlohmann::json::parse(ReadFile(dir / "out.txt.config.json"));
  EXPECT_EQ(echo["seed"], 12);
  EXPECT_EQ(echo["jobs"], 2);
  EXPECT_EQ(echo["cache_dir"], "/env/cache");

  ::setenv("HYPERNYM_CACHE_DIR", "/env/cache", 1);
  const RunResult flag = RunTool({"stats", "--cache-dir", "/flag/cache", "-o",
                              (dir / "out2.txt").string()},
                             "a dog\n");
  ::unsetenv("HYPERNYM_CACHE_DIR");
  ASSERT_EQ(flag.code, 0);
  EXPECT_EQ(nlohmann::json::parse(ReadFile(dir / "out2.txt.config.json"))["cache_dir"],
            "/flag/cache");
  EXPECT_NE(r.err.find("resolved config"), std::string::npos);
}

TEST(CliTest, IoAndDataErrors) {
  EXPECT_EQ(RunTool({"stats", "-i", "/nonexistent/corpus.txt"}).code, cli::kExitIo);
  const RunResult bad = RunTool({"stats", "--format", "jsonl"}, "{\"text\": \"ok\"}\nnot json\n");
  EXPECT_EQ(bad.code, cli::kExitData);
  EXPECT_NE(bad.err.find("near:"), std::string::npos) << bad.err;
  EXPECT_EQ(RunTool({"hypernymize", "--ontology", DataPath("ontology.tsv").string()},
                "{\"id\":\"x\",\"text\":\"abc\",\"spans\":[[0,9,\"X\"]]}\n")
                .code,
            cli::kExitData);
}

TEST(CliTest, OfflineCacheMissIsNetworkError) {
  TempDir empty;
  const RunResult r = RunTool(HypernymizeArgs(empty.path().string()));
  EXPECT_EQ(r.code, cli::kExitNetwork) << r.err;
  EXPECT_NE(r.err.find("cache miss"), std::string::npos);
}

TEST(CliTest, StatsExample) {
  const RunResult r = RunTool({"stats"}, "a dog\na cat\n");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("captions=2\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("tokens=4\n"), std::string::npos);
  EXPECT_NE(r.out.find("vocabulary=3\n"), std::string::npos);
  EXPECT_NE(r.out.find("average_length=2\n"), std::string::npos);
}

TEST(CliTest, JsdAndRouge) {
  TempDir dir;
  WriteFile(dir / "a.txt", "a a b\n");
  WriteFile(dir / "b.txt", "c c d\n");
  const RunResult j = RunTool({"jsd", (dir / "a.txt").string(), (dir / "b.txt").string()});
  ASSERT_EQ(j.code, 0) << j.err;
  EXPECT_NE(j.out.find("jsd=1\n"), std::string::npos) << j.out;

  WriteFile(dir / "c.txt", "the cat sat\n");
  const RunResult r = RunTool({"rouge", "--candidates", (dir / "c.txt").string(), "--references",
                           (dir / "c.txt").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("rouge1=100\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("rougeL=100\n"), std::string::npos);
}

TEST(CliTest, HypernymizeIsDeterministicAcrossJobs) {
  const RunResult a = RunTool(With(HypernymizeArgs(), {"-j", "1"}));
  const RunResult b = RunTool(With(HypernymizeArgs(), {"-j", "8"}));
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out, b.out);
  const auto lines = Lines(a.out);
  ASSERT_EQ(lines.size(), 500u);
  const auto first = nlohmann::json::parse(lines[0]);
  EXPECT_EQ(first["id"], "cap000");
  EXPECT_EQ(first["text"], "ship docked in the harbour of city");
}

TEST(CliTest, EnrichMatchesLibraryAndIgnoresJobs) {
  const RunResult a = RunTool(With(EnrichArgs(7), {"-j", "1"}));
  const RunResult b = RunTool(With(EnrichArgs(7), {"-j", "8"}));
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, RunTool(EnrichArgs(8)).out);

  // Same pairs through the in-memory generator.
  EnrichConfig config;
  config.seed = 7;
  config.locations = Lines(ReadFile(DataPath("locations.txt")));
  std::erase(config.locations, "");
  std::vector<NeSnapshotEntry> snapshot;
  std::size_t n = 0;
  for (const auto& l : Lines(ReadFile(DataPath("ne_snapshot.jsonl")))) {
    snapshot.push_back(ParseNeSnapshotLine(l, ++n));
  }
  const Ontology ontology = Ontology::Load(DataPath("ontology.tsv"));
  config.ne_lists = BuildNeLists(snapshot, ontology, {}, 0);
  std::vector<std::string> corpus = Lines(ReadFile(DataPath("ne_free_reference.txt")));
  std::erase(corpus, "");
  const auto pairs = GenerateDataset(corpus, config, DefaultTypeSurfaces(config.ne_lists));
  std::string expected;
  for (const auto& p : pairs) expected += ToJsonLine(p) + "\n";
  EXPECT_EQ(a.out, expected);
  EXPECT_NE(a.err.find("pairs: captions=500 ne_only=25 no_object=50"), std::string::npos)
      << a.err;
}

TEST(CliTest, MentionsReport) {
  const RunResult r = RunTool({"mentions", "--vocabulary",
                           DataPath("mentions/vocabulary.txt").string(), "--labels",
                           DataPath("mentions/labels.jsonl").string(), "-i",
                           DataPath("mentions/captions.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("high_precision=bus, car, dog, person, traffic light, umbrella\n"),
            std::string::npos)
      << r.out;
}

TEST(CliTest, GroundScoreMatchesLibrary) {
  TempDir dir;
  std::mt19937_64 gen(5);
  const GroundingBatch batch = testing::RandomBatch(gen, 3, 4, 5, 6);
  std::string manifest;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const std::string name = "p" + std::to_string(k) + ".bin";
    WriteEmbeddingFile(dir / name, batch[k].regions, batch[k].tokens);
    manifest += R"({"id":"p)" + std::to_string(k) + R"(","image":")" + name + "\"}\n";
  }
  WriteFile(dir / "manifest.jsonl", manifest);
  const RunResult r = RunTool({"ground-score", "-i", (dir / "manifest.jsonl").string(),
                           "--batch-size", "3", "--attention"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = Lines(r.out);
  ASSERT_GE(lines.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto j = nlohmann::json::parse(lines[k]);
    EXPECT_NEAR(j["score"].get<double>(), GroundingScore(batch[k]), 1e-12);
    EXPECT_NEAR(j["loss_image"].get<double>(), LossImage(batch, k), 1e-12);
    EXPECT_NEAR(j["batch_total_loss"].get<double>(), TotalLoss(batch), 1e-12);
  }
}

TEST(CliTest, GroundEvalFromDetections) {
  TempDir dir;
  WriteFile(dir / "truth.jsonl",
            R"({"image_id":"a","width":10,"height":10,"boxes":[{"bbox":[0,0,5,5],"class":"dog"},{"bbox":[5,5,10,10],"class":"cat"}]})"
            "\n");
  WriteFile(dir / "det.jsonl",
            R"({"image_id":"a","class":"dog","bbox":[0,0,5,5],"score":0.9})"
            "\n"
            R"({"image_id":"a","class":"cat","bbox":[0,0,5,5],"score":0.8})"
            "\n");
  const RunResult r = RunTool({"ground-eval", "--truth", (dir / "truth.jsonl").string(),
                           "--detections", (dir / "det.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("map=0.5\n"), std::string::npos) << r.out;
}

// Peak resident set of a child process running the binary.
long PeakRssKb(const std::vector<std::string>& args, const std::string& input,
               int* exit_code) {
  const pid_t pid = ::fork();
  if (pid == 0) {
    std::vector<char*> argv;
    std::string bin = HYPERNYM_CLI_BINARY;
    argv.push_back(bin.data());
    std::vector<std::string> copy = args;
    for (auto& a : copy) argv.push_back(a.data());
    argv.push_back(nullptr);
    if (!std::freopen(input.c_str(), "r", stdin) || !std::freopen("/dev/null", "w", stdout) ||
        !std::freopen("/dev/null", "w", stderr)) {
      ::_exit(127);
    }
    ::execv(bin.c_str(), argv.data());
    ::_exit(127);
  }
  int status = 0;
  struct rusage usage {};
  ::wait4(pid, &status, 0, &usage);
  *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return usage.ru_maxrss;
}

TEST(CliStreamingTest, MillionLinesInBoundedMemory) {
  TempDir dir;
  const auto corpus = dir / "big.txt";
  {
    std::ofstream out(corpus);
    for (int i = 0; i < 1000000; ++i) {
      out << "a train waits at platform number " << i % 1000 << " near the old goods yard\n";
    }
  }
  const auto size_kb = static_cast<long>(std::filesystem::file_size(corpus) / 1024);
  constexpr long kBudgetKb = 48 * 1024;
  ASSERT_GT(size_kb, kBudgetKb);

  int code = -1;
  const long stats_kb = PeakRssKb({"stats", "-j", "4", "--format", "text"}, corpus.string(), &code);
  EXPECT_EQ(code, 0);
  EXPECT_LT(stats_kb, kBudgetKb);

  const long enrich_kb = PeakRssKb(
      {"enrich", "-j", "4", "--ontology", DataPath("ontology.tsv").string(), "--ne-snapshot",
       DataPath("ne_snapshot.jsonl").string(), "--locations", DataPath("locations.txt").string()},
      corpus.string(), &code);
  EXPECT_EQ(code, 0);
  EXPECT_LT(enrich_kb, kBudgetKb);
}

}  // namespace
}  // namespace hypernym
