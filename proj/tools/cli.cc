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

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypernym/corpus_metrics.h"
#include "hypernym/embedding_io.h"
#include "hypernym/enricher.h"
#include "hypernym/error.h"
#include "hypernym/grounding.h"
#include "hypernym/grounding_eval.h"
#include "hypernym/kb_client.h"
#include "hypernym/mentions.h"
#include "hypernym/ne_pipeline.h"
#include "hypernym/ontology.h"
#include "hypernym/records.h"
#include "parallel.h"
#include "run_config.h"

namespace hypernym::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr std::size_t kChunkPerJob = 256;

std::string FormatNumber(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// "-" maps to the process streams.
class Input {
 public:
  Input(const std::string& path, std::istream& fallback) : path_(path) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      path_ = "<stdin>";
      return;
    }
    file_.open(path, std::ios::binary);
    if (!file_) throw IoError("cannot open " + path);
    stream_ = &file_;
  }
  std::istream& stream() { return *stream_; }
  const std::string& name() const { return path_; }

 private:
  std::string path_;
  std::ifstream file_;
  std::istream* stream_ = nullptr;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw IoError("cannot write " + path);
    stream_ = &file_;
    path_ = path;
  }
  std::ostream& stream() { return *stream_; }
  bool is_file() const { return !path_.empty(); }
  const std::string& path() const { return path_; }

  void Finish() {
    stream_->flush();
    if (!*stream_) throw IoError("write failed for " + (path_.empty() ? "<stdout>" : path_));
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

std::vector<std::string> ReadListFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

std::string Required(const RunConfig& config, const std::string& key,
                     const std::string& flag) {
  std::string value = config.String(key);
  if (value.empty()) throw UsageError(flag + " is required");
  return value;
}

// Prefixes data errors with the input name so messages point at the file.
[[noreturn]] void RethrowWithSource(const std::string& source) {
  try {
    throw;
  } catch (const ParseError& e) {
    throw ParseError(source + ": " + e.what(), e.excerpt());
  } catch (const DataError& e) {
    throw DataError(source + ": " + e.what());
  }
}

template <typename Process, typename Emit>
void ForEachLine(Input& input, int jobs, Process&& process, Emit&& emit) {
  LineReader reader(input.stream());
  using Result = decltype(process(std::declval<const Line&>()));
  try {
    ProcessOrdered<Line, Result>(
        jobs, kChunkPerJob * static_cast<std::size_t>(jobs),
        [&](Line& l) { return reader.Next(l); }, process, emit);
  } catch (const DataError&) {
    RethrowWithSource(input.name());
  }
}

// Options shared by every subcommand. Unset flags leave the config alone.
struct CommonFlags {
  std::string config_path;
  std::optional<std::int64_t> seed;
  std::optional<std::int64_t> jobs;
  bool offline = false;
  bool online = false;
  std::optional<std::string> cache_dir;
  std::string input = "-";
  std::string output = "-";
  std::map<std::string, std::function<void(RunConfig&)>> overrides;
};

struct Command {
  CLI::App* app = nullptr;
  CommonFlags flags;
  std::function<int(RunConfig&, CommonFlags&)> run;
};

template <typename T>
void Bind(Command& cmd, const std::string& name, const std::string& key,
          const std::string& help) {
  auto value = std::make_shared<T>();
  CLI::Option* opt = cmd.app->add_option(name, *value, help);
  cmd.flags.overrides[key] = [value, opt, key](RunConfig& config) {
    if (opt->count() > 0) config.Set(key, *value);
  };
}

void BindFlag(Command& cmd, const std::string& name, const std::string& key,
              bool value, const std::string& help) {
  CLI::Option* opt = cmd.app->add_flag(name, help);
  cmd.flags.overrides[key + (value ? "+" : "-")] = [opt, key, value](RunConfig& config) {
    if (opt->count() > 0) config.Set(key, value);
  };
}

void AddCommon(Command& cmd, bool with_input = true) {
  CommonFlags& f = cmd.flags;
  cmd.app->add_option("--config", f.config_path, "JSON config file");
  cmd.app->add_option("--seed", f.seed, "Random seed");
  cmd.app->add_option("--jobs,-j", f.jobs, "Worker threads")->check(CLI::PositiveNumber);
  auto* off = cmd.app->add_flag("--offline", f.offline, "Use only the lookup cache (default)");
  auto* on = cmd.app->add_flag("--online", f.online, "Query the lookup service on cache misses");
  off->excludes(on);
  cmd.app->add_option("--cache-dir", f.cache_dir,
                      std::string("Lookup cache directory (env ") +
                          RunConfig::kCacheDirEnv + ")");
  if (with_input) cmd.app->add_option("-i,--input", f.input, "Input file, - for stdin");
  cmd.app->add_option("-o,--output", f.output, "Output file, - for stdout");
}

RunConfig Resolve(CommonFlags& f, std::ostream& err) {
  RunConfig config;
  if (!f.config_path.empty()) config.MergeFile(f.config_path);
  if (const char* env = std::getenv(RunConfig::kCacheDirEnv); env && *env) {
    config.Set("cache_dir", std::string(env));
  }
  if (f.seed) config.Set("seed", *f.seed);
  if (f.jobs) config.Set("jobs", *f.jobs);
  if (f.offline) config.Set("mode", "offline");
  if (f.online) config.Set("mode", "online");
  if (f.cache_dir) config.Set("cache_dir", *f.cache_dir);
  for (auto& [key, apply] : f.overrides) apply(config);

  const std::string mode = config.String("mode");
  if (mode != "offline" && mode != "online") {
    throw UsageError("mode must be \"offline\" or \"online\"");
  }
  if (config.Integer("jobs") < 1) throw UsageError("jobs must be >= 1");
  err << "resolved config: " << config.Echo() << "\n";
  return config;
}

// Sidecar provenance file next to a file output.
void WriteConfigEcho(const Output& out, const RunConfig& config) {
  if (!out.is_file()) return;
  const std::string path = out.path() + ".config.json";
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot write " + path);
  f << config.root().dump(2) << "\n";
}

int Jobs(const RunConfig& config) { return static_cast<int>(config.Integer("jobs")); }

std::unique_ptr<KbClient> MakeKbClient(const RunConfig& config) {
  KbClientOptions o;
  o.base_url = config.String("kb.base_url");
  o.query_param = config.String("kb.query_param");
  o.type_param = config.String("kb.type_param");
  o.type_namespace = config.String("kb.type_namespace");
  o.max_results = static_cast<int>(config.Integer("kb.max_results"));
  o.rate_limit = config.Number("kb.rate_limit");
  o.timeout_seconds = config.Number("kb.timeout_seconds");
  o.max_attempts = static_cast<int>(config.Integer("kb.max_attempts"));
  o.backoff_base_seconds = config.Number("kb.backoff_base_seconds");
  std::optional<LookupCache> cache;
  if (const std::string dir = config.String("cache_dir"); !dir.empty()) cache.emplace(dir);
  const LookupMode mode =
      config.String("mode") == "online" ? LookupMode::kOnline : LookupMode::kOffline;
  return std::make_unique<KbClient>(std::move(o), std::move(cache), mode);
}

Gazetteer LoadGazetteer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open gazetteer " + path);
  Gazetteer g;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == 0) throw DataError(path + ":" + std::to_string(n) + ": empty surface");
    g[line.substr(0, tab)] = tab == std::string::npos ? "" : line.substr(tab + 1);
  }
  return g;
}

// ---------------------------------------------------------------- hypernymize

int RunHypernymize(RunConfig& config, CommonFlags& f, std::istream& in,
                   std::ostream& out) {
  const Ontology ontology = Ontology::Load(Required(config, "ontology", "--ontology"));
  std::optional<Gazetteer> gazetteer;
  if (const std::string g = config.String("hypernymize.gazetteer"); !g.empty()) {
    gazetteer = LoadGazetteer(g);
  }
  std::unique_ptr<KbClient> kb = MakeKbClient(config);
  Input input(f.input, in);
  Output output(f.output, out);
  ForEachLine(
      input, Jobs(config),
      [&](const Line& line) {
        TaggedCaption tagged = ParseTaggedCaption(line.text, line.number);
        if (tagged.spans.empty() && gazetteer) {
          tagged.spans = GazetteerTag(tagged.caption, *gazetteer);
        }
        return ToJsonLine(HypernymizeCaption(tagged.caption, tagged.spans, ontology, *kb));
      },
      [&](std::string&& s) { output.stream() << s << '\n'; });
  output.Finish();
  WriteConfigEcho(output, config);
  return kExitOk;
}

// --------------------------------------------------------------------- enrich

EnrichConfig MakeEnrichConfig(const RunConfig& config, std::ostream& err) {
  EnrichConfig c;
  c.p_ne = config.Number("enrich.p_ne");
  c.p_date_loc = config.Number("enrich.p_date_loc");
  c.p_middle = config.Number("enrich.p_middle");
  c.seed = static_cast<std::uint64_t>(config.Integer("seed"));
  c.plural_ne_count = static_cast<int>(config.Integer("enrich.plural_ne_count"));
  c.ne_only_ratio = config.Number("enrich.ne_only_ratio");
  c.no_object_ratio = config.Number("enrich.no_object_ratio");
  c.prepositions = config.Strings("enrich.prepositions");
  if (const std::string p = config.String("enrich.locations"); !p.empty()) {
    c.locations = ReadListFile(p);
  }
  if (const std::string p = config.String("enrich.dates"); !p.empty()) {
    c.dates = ReadListFile(p);
  }
  if (const std::string snapshot = config.String("enrich.ne_snapshot"); !snapshot.empty()) {
    const Ontology ontology = Ontology::Load(Required(config, "ontology", "--ontology"));
    Input in(snapshot, std::cin);
    std::vector<NeSnapshotEntry> entries;
    LineReader reader(in.stream());
    try {
      for (Line l; reader.Next(l);) entries.push_back(ParseNeSnapshotLine(l.text, l.number));
    } catch (const DataError&) {
      RethrowWithSource(snapshot);
    }
    const std::vector<std::string> types = config.Strings("enrich.types");
    const std::int64_t max_per_type = config.Integer("enrich.max_per_type");
    if (max_per_type < 0) throw UsageError("enrich.max_per_type must be >= 0");
    c.ne_lists = BuildNeLists(entries, ontology, types,
                              static_cast<std::size_t>(max_per_type),
                              [&](const std::string& w) { err << "warning: " << w << "\n"; });
  } else {
    err << "warning: no NE snapshot given; only date/location manipulations apply\n";
  }
  c.Validate();
  return c;
}

int RunEnrich(RunConfig& config, CommonFlags& f, std::istream& in, std::ostream& out,
              std::ostream& err) {
  const EnrichConfig enrich = MakeEnrichConfig(config, err);
  const TextFormat format = ParseTextFormat(config.String("format"));
  const DatasetGenerator generator(enrich, DefaultTypeSurfaces(enrich.ne_lists));
  const std::string pool_path = config.String("enrich.no_object_pool");

  Input input(f.input, in);
  Output output(f.output, out);
  std::ostream& os = output.stream();

  // Mention-free corpus captions are spooled to a temporary file so the
  // selection pass does not hold the corpus in memory.
  std::optional<fs::path> spool_path;
  std::ofstream spool;
  if (pool_path.empty()) {
    std::random_device rd;
    spool_path = fs::temp_directory_path() /
                 ("hypernym-enrich-" + std::to_string(rd()) + std::to_string(rd()) + ".jsonl");
    spool.open(*spool_path, std::ios::trunc);
    if (!spool) throw IoError("cannot create " + spool_path->string());
  }
  struct SpoolGuard {
    std::optional<fs::path>& p;
    ~SpoolGuard() {
      std::error_code ec;
      if (p) fs::remove(*p, ec);
    }
  } guard{spool_path};

  struct Item {
    std::size_t index = 0;
    Line line;
  };
  struct Result {
    std::string json;
    std::optional<std::string> pool;
  };
  LineReader reader(input.stream());
  std::size_t corpus_size = 0;
  std::size_t pool_size = 0;
  try {
    ProcessOrdered<Item, Result>(
        Jobs(config), kChunkPerJob * Jobs(config),
        [&](Item& item) {
          if (!reader.Next(item.line)) return false;
          item.index = corpus_size++;
          return true;
        },
        [&](const Item& item) {
          const std::string text = CaptionText(item.line.text, format, item.line.number);
          Result r{ToJsonLine(generator.CaptionPair(item.index, text)), std::nullopt};
          if (spool_path && !generator.HasTypeMentions(text)) {
            r.pool = ojson(text).dump(-1, ' ', false, ojson::error_handler_t::replace);
          }
          return r;
        },
        [&](Result&& r) {
          os << r.json << '\n';
          if (r.pool) {
            spool << *r.pool << '\n';
            ++pool_size;
          }
        });
  } catch (const DataError&) {
    RethrowWithSource(input.name());
  }

  const std::size_t ne_only = generator.NeOnlyCount(corpus_size);
  for (std::size_t k = 0; k < ne_only; ++k) os << ToJsonLine(generator.NeOnlyPair(k)) << '\n';

  // Streams the mention-free pool members in order.
  auto for_each_pool = [&](const std::function<void(const std::string&)>& fn) {
    if (spool_path) {
      std::ifstream sp(*spool_path);
      for (std::string l; std::getline(sp, l);) fn(ojson::parse(l).get<std::string>());
      return;
    }
    Input pool(pool_path, in);
    LineReader pr(pool.stream());
    try {
      for (Line l; pr.Next(l);) {
        std::string text = CaptionText(l.text, format, l.number);
        if (!generator.HasTypeMentions(text)) fn(text);
      }
    } catch (const DataError&) {
      RethrowWithSource(pool.name());
    }
  };
  if (spool_path) {
    spool.close();
    if (!spool) throw IoError("write failed for " + spool_path->string());
  } else {
    for_each_pool([&](const std::string&) { ++pool_size; });
  }
  const std::size_t no_object = generator.NoObjectCount(corpus_size, pool_size);
  if (no_object > 0) {
    auto selector = generator.NoObjectSelector(no_object, pool_size);
    std::size_t k = 0;
    for_each_pool([&](const std::string& caption) {
      if (selector.Next()) os << ToJsonLine(generator.NoObjectPair(k++, caption)) << '\n';
    });
  }
  output.Finish();
  WriteConfigEcho(output, config);
  err << "pairs: captions=" << corpus_size << " ne_only=" << ne_only
      << " no_object=" << no_object << "\n";
  return kExitOk;
}

// ---------------------------------------------------------- corpus metrics

CorpusCounter CountCorpus(const std::string& path, std::istream& in, TextFormat format,
                          int jobs) {
  Input input(path, in);
  LineReader reader(input.stream());
  constexpr std::size_t kBlock = 1024;
  CorpusCounter total;
  try {
    ProcessOrdered<std::vector<Line>, CorpusCounter>(
        jobs, static_cast<std::size_t>(jobs) * 2,
        [&](std::vector<Line>& block) {
          block.clear();
          for (Line l; block.size() < kBlock && reader.Next(l);) block.push_back(std::move(l));
          return !block.empty();
        },
        [&](const std::vector<Line>& block) {
          CorpusCounter partial;
          for (const Line& l : block) partial.Add(CaptionText(l.text, format, l.number));
          return partial;
        },
        [&](CorpusCounter&& partial) { total.Merge(partial); });
  } catch (const DataError&) {
    RethrowWithSource(input.name());
  }
  return total;
}

int RunStats(RunConfig& config, CommonFlags& f, std::istream& in, std::ostream& out) {
  const CorpusCounter counter =
      CountCorpus(f.input, in, ParseTextFormat(config.String("format")), Jobs(config));
  const CorpusStats s = counter.Stats();
  Output output(f.output, out);
  output.stream() << "captions=" << s.captions << "\n"
                  << "tokens=" << s.total_tokens << "\n"
                  << "vocabulary=" << s.vocabulary_size << "\n"
                  << "average_length=" << FormatNumber(s.average_length) << "\n";
  output.Finish();
  WriteConfigEcho(output, config);
  return kExitOk;
}

int RunJsd(RunConfig& config, CommonFlags& f, const std::vector<std::string>& corpora,
           std::istream& in, std::ostream& out) {
  if (corpora.size() != 2) throw UsageError("jsd takes exactly two corpora");
  if (corpora[0] == "-" && corpora[1] == "-") {
    throw UsageError("at most one corpus may come from stdin");
  }
  const TextFormat format = ParseTextFormat(config.String("format"));
  const UnigramDistribution p = CountCorpus(corpora[0], in, format, Jobs(config)).Distribution();
  const UnigramDistribution q = CountCorpus(corpora[1], in, format, Jobs(config)).Distribution();
  Output output(f.output, out);
  output.stream() << "jsd=" << FormatNumber(JensenShannon(p, q)) << "\n"
                  << "log_base=" << kJsdLogBase << "\n"
                  << "vocabulary_a=" << p.size() << "\n"
                  << "vocabulary_b=" << q.size() << "\n";
  output.Finish();
  WriteConfigEcho(output, config);
  return kExitOk;
}

int RunRouge(RunConfig& config, CommonFlags& f, const std::string& candidates,
             const std::string& references, std::istream& in, std::ostream& out) {
  if (candidates.empty() || references.empty()) {
    throw UsageError("--candidates and --references are required");
  }
  const TextFormat format = ParseTextFormat(config.String("format"));
  Input cand(candidates, in);
  Input ref(references, in);
  if (&cand.stream() == &ref.stream()) throw UsageError("at most one input may be stdin");
  // Line-aligned: blank lines count, so pairs stay aligned.
  struct Item {
    std::size_t number = 0;
    std::string candidate, reference;
  };
  struct Scores {
    double r1, r2, rl;
    std::string line;
  };
  Output output(f.output, out);
  const bool per_line = output.is_file();
  double sum1 = 0, sum2 = 0, suml = 0;
  std::size_t n = 0, number = 0;
  ProcessOrdered<Item, Scores>(
      Jobs(config), kChunkPerJob * Jobs(config),
      [&](Item& item) {
        std::string c, r;
        const bool has_c = static_cast<bool>(std::getline(cand.stream(), c));
        const bool has_r = static_cast<bool>(std::getline(ref.stream(), r));
        if (has_c != has_r) {
          throw DataError("candidate and reference files differ in length at line " +
                          std::to_string(number + 1));
        }
        if (!has_c) return false;
        item = {++number, std::move(c), std::move(r)};
        return true;
      },
      [&](const Item& item) {
        const std::string c = CaptionText(item.candidate, format, item.number);
        const std::string r = CaptionText(item.reference, format, item.number);
        Scores s{RougeN(c, r, 1).f1 * 100, RougeN(c, r, 2).f1 * 100, RougeL(c, r).f1 * 100, {}};
        if (per_line) {
          ojson j;
          j["line"] = item.number;
          j["rouge1"] = s.r1;
          j["rouge2"] = s.r2;
          j["rougeL"] = s.rl;
          s.line = j.dump();
        }
        return s;
      },
      [&](Scores&& s) {
        sum1 += s.r1;
        sum2 += s.r2;
        suml += s.rl;
        ++n;
        if (per_line) output.stream() << s.line << '\n';
      });
  if (n == 0) throw DataError("rouge: no text pairs");
  std::ostream& summary = per_line ? out : output.stream();
  summary << "pairs=" << n << "\n"
          << "rouge1=" << FormatNumber(sum1 / n) << "\n"
          << "rouge2=" << FormatNumber(sum2 / n) << "\n"
          << "rougeL=" << FormatNumber(suml / n) << "\n";
  output.Finish();
  WriteConfigEcho(output, config);
  return kExitOk;
}

// ------------------------------------------------------------------- mentions

LabelSets LoadLabelSets(const std::string& path, std::istream& in) {
  Input input(path, in);
  LabelSets sets;
  LineReader reader(input.stream());
  try {
    for (Line l; reader.Next(l);) {
      auto [image, labels] = ParseImageLabelsLine(l.text, l.number);
      sets[image].insert(labels.begin(), labels.end());
    }
  } catch (const DataError&) {
    RethrowWithSource(input.name());
  }
  return sets;
}

std::string JoinSet(const std::set<std::string>& s) {
  std::string out;
  for (const std::string& x : s) out += (out.empty() ? "" : ", ") + x;
  return out;
}

int RunMentions(RunConfig& config, CommonFlags& f, const std::string& subset_out,
                std::istream& in, std::ostream& out) {
  const ClassVocabulary vocab =
      ClassVocabulary::Load(Required(config, "vocabulary", "--vocabulary"));
  const ExactMatchOptions match{config.Bool("mentions.match_plurals")};
  Input input(f.input, in);
  LabelSets mentions;
  ForEachLine(
      input, Jobs(config),
      [&](const Line& line) {
        auto [image, caption] = ParseImageCaptionLine(line.text, line.number);
        return std::make_pair(std::move(image), ExactMatch(caption, vocab, match));
      },
      [&](std::pair<std::string, std::set<std::string>>&& r) {
        mentions[r.first].insert(r.second.begin(), r.second.end());
      });

  Output output(f.output, out);
  const std::string labels_path = config.String("mentions.labels");
  if (output.is_file() || labels_path.empty()) {
    for (const auto& [image, classes] : mentions) {
      ojson j;
      j["image_id"] = image;
      j["mentions"] = classes;
      output.stream() << j.dump() << '\n';
    }
  }
  if (!labels_path.empty()) {
    const LabelSets truth = LoadLabelSets(labels_path, in);
    const MentionReport report = PrecisionRecall(mentions, truth, vocab);
    const double threshold = config.Number("mentions.threshold");
    std::set<std::string> selected = HighPrecisionClasses(report, threshold);
    std::ostream& os = out;
    os << FormatMentionReport(report);
    os << "high_precision_threshold=" << FormatNumber(threshold) << "\n"
       << "high_precision=" << JoinSet(selected) << "\n";
    if (const std::string o = config.String("ontology"); !o.empty()) {
      const std::set<std::string> in_onto = ClassesInOntology(vocab, Ontology::Load(o));
      std::set<std::string> both;
      std::set_intersection(selected.begin(), selected.end(), in_onto.begin(), in_onto.end(),
                            std::inserter(both, both.end()));
      os << "in_ontology=" << JoinSet(in_onto) << "\n"
         << "high_precision_in_ontology=" << JoinSet(both) << "\n";
      selected = std::move(both);
    }
    if (!subset_out.empty()) {
      std::ofstream s(subset_out, std::ios::trunc);
      if (!s) throw IoError("cannot write " + subset_out);
      for (const std::string& c : selected) s << c << '\n';
    }
  }
  output.Finish();
  WriteConfigEcho(output, config);
  return kExitOk;
}

// -------------------------------------------------------------- ground-score

int RunGroundScore(RunConfig& config, CommonFlags& f, std::istream& in, std::ostream& out) {
  const std::int64_t batch_size = config.Integer("grounding.batch_size");
  if (batch_size < 1) throw UsageError("grounding.batch_size must be >= 1");
  const double itm = config.Number("grounding.itm");
  const double mlm = config.Number("grounding.mlm");
  const bool attention = config.Bool("grounding.attention");
  Input input(f.input, in);
  const fs::path base =
      f.input == "-" ? fs::current_path() : fs::absolute(f.input).parent_path();
  Output output(f.output, out);

  struct Batch {
    std::size_t number = 0;
    std::vector<ManifestEntry> entries;
  };
  LineReader reader(input.stream());
  std::size_t batches = 0;
  double loss_sum = 0;
  std::size_t loss_batches = 0;
  struct Result {
    std::string lines;
    std::optional<double> total;
  };
  try {
    ProcessOrdered<Batch, Result>(
        Jobs(config), static_cast<std::size_t>(Jobs(config)) * 4,
        [&](Batch& b) {
          b.entries.clear();
          b.number = batches;
          for (Line l; b.entries.size() < static_cast<std::size_t>(batch_size) &&
                       reader.Next(l);) {
            b.entries.push_back(ParseManifestLine(l.text, l.number, base));
          }
          if (b.entries.empty()) return false;
          ++batches;
          return true;
        },
        [&](const Batch& b) {
          GroundingBatch batch;
          for (const ManifestEntry& e : b.entries) batch.push_back(LoadPair(e));
          Result r;
          const bool contrastive = batch.size() >= 2;
          if (contrastive) r.total = TotalLoss(batch, itm, mlm);
          for (std::size_t k = 0; k < batch.size(); ++k) {
            ojson j;
            j["id"] = b.entries[k].id;
            j["batch"] = b.number;
            j["score"] = GroundingScore(batch[k]);
            j["loss_image"] = contrastive ? ojson(LossImage(batch, k)) : ojson(nullptr);
            j["loss_caption"] = contrastive ? ojson(LossCaption(batch, k)) : ojson(nullptr);
            j["batch_total_loss"] = r.total ? ojson(*r.total) : ojson(nullptr);
            if (attention) {
              const Matrix a = AttentionMap(batch[k]);
              ojson rows = ojson::array();
              for (Eigen::Index i = 0; i < a.rows(); ++i) {
                ojson row = ojson::array();
                for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(i, c));
                rows.push_back(std::move(row));
              }
              j["attention"] = std::move(rows);
            }
            r.lines += j.dump() + "\n";
          }
          return r;
        },
        [&](Result&& r) {
          output.stream() << r.lines;
          if (r.total) {
            loss_sum += *r.total;
            ++loss_batches;
          }
        });
  } catch (const DataError&) {
    RethrowWithSource(input.name());
  }
  output.Finish();
  WriteConfigEcho(output, config);
  std::ostream& summary = output.is_file() ? out : std::cerr;
  summary << "batches=" << batches << "\n";
  if (loss_batches > 0) summary << "mean_total_loss=" << FormatNumber(loss_sum / loss_batches) << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- ground-eval

std::map<std::string, ImageGroundTruth> LoadTruth(const std::string& path, std::istream& in) {
  Input input(path, in);
  std::map<std::string, ImageGroundTruth> truth;
  LineReader reader(input.stream());
  try {
    for (Line l; reader.Next(l);) {
      ImageGroundTruth gt = ParseGroundTruthLine(l.text, l.number);
      const std::string id = gt.image_id;
      if (!truth.emplace(id, std::move(gt)).second) {
        throw DataError("line " + std::to_string(l.number) + ": duplicate image id \"" +
                        id + "\"");
      }
    }
  } catch (const DataError&) {
    RethrowWithSource(input.name());
  }
  return truth;
}

int RunGroundEval(RunConfig& config, CommonFlags& f, const std::string& truth_path,
                  const std::string& detections_in, const std::string& detections_out,
                  std::istream& in, std::ostream& out) {
  if (truth_path.empty()) throw UsageError("--truth is required");
  const std::map<std::string, ImageGroundTruth> truth = LoadTruth(truth_path, in);

  std::vector<Detection> detections;
  LabelSets mentioned;
  if (!detections_in.empty()) {
    Input input(detections_in, in);
    LineReader reader(input.stream());
    try {
      for (Line l; reader.Next(l);) {
        detections.push_back(ParseDetectionLine(l.text, l.number));
        mentioned[detections.back().image_id].insert(detections.back().class_name);
      }
    } catch (const DataError&) {
      RethrowWithSource(input.name());
    }
  } else {
    const ClassVocabulary vocab =
        ClassVocabulary::Load(Required(config, "vocabulary", "--vocabulary"));
    const std::int64_t rows = config.Integer("ground_eval.grid_rows");
    const std::int64_t cols = config.Integer("ground_eval.grid_cols");
    SelectionOptions sel;
    const std::string scope = config.String("ground_eval.candidate_scope");
    if (scope == "class") {
      sel.scope = CandidateScope::kClassBoxes;
    } else if (scope != "all") {
      throw UsageError("ground_eval.candidate_scope must be \"all\" or \"class\"");
    }
    sel.match.match_plurals = config.Bool("mentions.match_plurals");
    Input input(f.input, in);
    ForEachLine(
        input, Jobs(config),
        [&](const Line& line) {
          const CaptionGrounding g = ParseGroundingLine(line.text, line.number);
          auto it = truth.find(g.image_id);
          if (it == truth.end()) {
            throw DataError("line " + std::to_string(line.number) +
                            ": no ground truth for image \"" + g.image_id + "\"");
          }
          return std::make_pair(g.image_id,
                                SelectForCaption(g, it->second, vocab, static_cast<int>(rows),
                                                 static_cast<int>(cols), sel));
        },
        [&](std::pair<std::string, CaptionSelections>&& r) {
          auto& [image, s] = r;
          mentioned[image].insert(s.mentioned.begin(), s.mentioned.end());
          for (Detection& d : s.detections) detections.push_back(std::move(d));
        });
  }

  if (!detections_out.empty()) {
    std::ofstream d(detections_out, std::ios::trunc);
    if (!d) throw IoError("cannot write " + detections_out);
    for (const Detection& det : detections) d << ToJsonLine(det) << '\n';
  }

  std::vector<ImageGroundTruth> truth_list;
  truth_list.reserve(truth.size());
  for (const auto& [id, gt] : truth) truth_list.push_back(gt);
  EvalOptions opts;
  opts.iou_threshold = config.Number("ground_eval.iou_threshold");
  opts.dedupe_per_image = config.Bool("ground_eval.dedupe_per_image");
  if (config.Bool("ground_eval.restrict_to_mentioned")) opts.mentioned = mentioned;

  Output output(f.output, out);
  const EvalReport report = Evaluate(detections, truth_list, opts);
  output.stream() << FormatEvalReport(report);
  output.stream() << "detections=" << detections.size() << "\n"
                  << "map=" << FormatNumber(report.map) << "\n";
  if (const std::string subset = config.String("ground_eval.class_subset"); !subset.empty()) {
    const std::vector<std::string> names = ReadListFile(subset);
    opts.class_subset = std::set<std::string>(names.begin(), names.end());
    const EvalReport sub = Evaluate(detections, truth_list, opts);
    output.stream() << "\nsubset (" << sub.classes.size() << " classes with ground truth)\n"
                    << FormatEvalReport(sub) << "subset_map=" << FormatNumber(sub.map)
                    << "\n";
  }
  output.Finish();
  WriteConfigEcho(output, config);
  return kExitOk;
}

// ------------------------------------------------------------------ kb-fetch

int RunKbFetch(RunConfig& config, CommonFlags& f, const std::string& queries,
               const std::vector<std::string>& types, std::istream& in, std::ostream& out) {
  if (queries.empty() == types.empty()) {
    throw UsageError("give exactly one of --queries or --types");
  }
  std::unique_ptr<KbClient> kb = MakeKbClient(config);
  Output output(f.output, out);
  if (!queries.empty()) {
    Input input(queries, in);
    ForEachLine(
        input, Jobs(config),
        [&](const Line& line) {
          const std::string q = CollapseWhitespace(line.text);
          const std::optional<EntityCandidate> top = SelectEntity(kb->Lookup(q));
          ojson j;
          j["query"] = q;
          j["uri"] = top ? ojson(top->uri) : ojson(nullptr);
          j["label"] = top ? ojson(top->label) : ojson(nullptr);
          j["types"] = top ? ojson(top->types) : ojson::array();
          return j.dump();
        },
        [&](std::string&& s) { output.stream() << s << '\n'; });
  } else {
    std::optional<Ontology> ontology;
    if (const std::string o = config.String("ontology"); !o.empty()) ontology = Ontology::Load(o);
    std::size_t next = 0;
    ProcessOrdered<std::string, std::string>(
        Jobs(config), types.size(),
        [&](std::string& t) {
          if (next == types.size()) return false;
          t = types[next++];
          return true;
        },
        [&](const std::string& type) {
          if (ontology && !ontology->Contains(type)) {
            throw UsageError("type \"" + type + "\" is not in the ontology");
          }
          std::set<std::string> surfaces;
          for (const EntityCandidate& c : kb->LookupByType(type)) {
            if (!c.label.empty()) surfaces.insert(c.label);
          }
          std::string lines;
          for (const std::string& s : surfaces) lines += ToJsonLine(NeSnapshotEntry{type, s}) + "\n";
          return lines;
        },
        [&](std::string&& s) { output.stream() << s; });
  }
  output.Finish();
  WriteConfigEcho(output, config);
  return kExitOk;
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return kExitUsage;
    case ErrorKind::kData: return kExitData;
    case ErrorKind::kNetwork: return kExitNetwork;
    case ErrorKind::kIo: return kExitIo;
  }
  return kExitData;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
           std::ostream& err) {
  CLI::App app("Named-entity hypernymization and grounding evaluation toolkit", "hypernym");
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Command>> commands;
  auto add = [&](const char* name, const char* help) -> Command& {
    commands.push_back(std::make_unique<Command>());
    commands.back()->app = app.add_subcommand(name, help);
    return *commands.back();
  };

  Command& hyp = add("hypernymize", "Replace tagged named entities by ontology hypernyms");
  AddCommon(hyp);
  Bind<std::string>(hyp, "--ontology", "ontology", "Ontology edge-list file");
  Bind<std::string>(hyp, "--gazetteer", "hypernymize.gazetteer",
                    "surface<TAB>label file used for records without spans");
  Bind<std::string>(hyp, "--kb-url", "kb.base_url", "Lookup service URL");
  Bind<double>(hyp, "--rate-limit", "kb.rate_limit", "Requests per second");
  Bind<double>(hyp, "--timeout", "kb.timeout_seconds", "Request timeout in seconds");
  hyp.run = [&](RunConfig& c, CommonFlags& f) { return RunHypernymize(c, f, in, out); };

  Command& enr = add("enrich", "Generate NE-enriched training pairs from NE-free captions");
  AddCommon(enr);
  Bind<std::string>(enr, "--ontology", "ontology", "Ontology edge-list file");
  Bind<std::string>(enr, "--ne-snapshot", "enrich.ne_snapshot", "NE snapshot JSONL");
  Bind<std::vector<std::string>>(enr, "--types", "enrich.types", "Types to load (default all)");
  Bind<std::int64_t>(enr, "--max-per-type", "enrich.max_per_type", "NE list cap, 0 = none");
  Bind<std::string>(enr, "--locations", "enrich.locations", "Location list file");
  Bind<std::string>(enr, "--dates", "enrich.dates", "Date list file");
  Bind<std::string>(enr, "--no-object-pool", "enrich.no_object_pool",
                    "Captions for no-object pairs (default: the corpus)");
  Bind<double>(enr, "--p-ne", "enrich.p_ne", "NE replacement probability");
  Bind<double>(enr, "--p-date-loc", "enrich.p_date_loc", "Begin/end insertion probability");
  Bind<double>(enr, "--p-middle", "enrich.p_middle", "Middle insertion probability");
  Bind<std::int64_t>(enr, "--plural-ne-count", "enrich.plural_ne_count", "NEs per plural");
  Bind<double>(enr, "--ne-only-ratio", "enrich.ne_only_ratio", "NE-only pairs per caption");
  Bind<double>(enr, "--no-object-ratio", "enrich.no_object_ratio", "No-object pairs per caption");
  Bind<std::string>(enr, "--format", "format", "auto, jsonl or text");
  enr.run = [&](RunConfig& c, CommonFlags& f) { return RunEnrich(c, f, in, out, err); };

  Command& st = add("stats", "Corpus unigram statistics");
  AddCommon(st);
  Bind<std::string>(st, "--format", "format", "auto, jsonl or text");
  st.run = [&](RunConfig& c, CommonFlags& f) { return RunStats(c, f, in, out); };

  Command& js = add("jsd", "Jensen-Shannon divergence between two corpora");
  AddCommon(js, false);
  std::vector<std::string> corpora;
  js.app->add_option("corpora", corpora, "Two corpus files")->expected(2)->required();
  Bind<std::string>(js, "--format", "format", "auto, jsonl or text");
  js.run = [&](RunConfig& c, CommonFlags& f) { return RunJsd(c, f, corpora, in, out); };

  Command& rg = add("rouge", "Rouge-1/2/L F1 between line-aligned files");
  AddCommon(rg, false);
  std::string candidates, references;
  rg.app->add_option("--candidates", candidates, "Candidate file")->required();
  rg.app->add_option("--references", references, "Reference file")->required();
  Bind<std::string>(rg, "--format", "format", "auto, jsonl or text");
  rg.run = [&](RunConfig& c, CommonFlags& f) {
    return RunRouge(c, f, candidates, references, in, out);
  };

  Command& mn = add("mentions", "Exact-match class mentions and precision/recall");
  AddCommon(mn);
  Bind<std::string>(mn, "--vocabulary", "vocabulary", "Class names, one per line");
  Bind<std::string>(mn, "--labels", "mentions.labels", "Image label JSONL");
  Bind<std::string>(mn, "--ontology", "ontology", "Ontology for class filtering");
  Bind<double>(mn, "--threshold", "mentions.threshold", "High-precision threshold");
  BindFlag(mn, "--match-plurals", "mentions.match_plurals", true, "Also match plural forms");
  std::string subset_out;
  mn.app->add_option("--subset-out", subset_out, "Write the selected class subset here");
  mn.run = [&](RunConfig& c, CommonFlags& f) { return RunMentions(c, f, subset_out, in, out); };

  Command& gs = add("ground-score", "Grounding scores, losses and attention maps");
  AddCommon(gs);
  Bind<std::int64_t>(gs, "--batch-size", "grounding.batch_size", "Pairs per batch");
  Bind<double>(gs, "--itm", "grounding.itm", "External ITM loss term");
  Bind<double>(gs, "--mlm", "grounding.mlm", "External MLM loss term");
  BindFlag(gs, "--attention", "grounding.attention", true, "Emit attention maps");
  gs.run = [&](RunConfig& c, CommonFlags& f) { return RunGroundScore(c, f, in, out); };

  Command& ge = add("ground-eval", "Detection AP of attention-selected ground-truth boxes");
  AddCommon(ge);
  std::string truth_path, detections_in, detections_out;
  ge.app->add_option("--truth", truth_path, "Ground-truth box JSONL")->required();
  ge.app->add_option("--detections", detections_in, "Read detections instead of groundings");
  ge.app->add_option("--detections-out", detections_out, "Write selected detections");
  Bind<std::string>(ge, "--vocabulary", "vocabulary", "Class names, one per line");
  Bind<std::int64_t>(ge, "--grid-rows", "ground_eval.grid_rows", "Attention grid rows");
  Bind<std::int64_t>(ge, "--grid-cols", "ground_eval.grid_cols", "Attention grid columns");
  Bind<double>(ge, "--iou-threshold", "ground_eval.iou_threshold", "Match IoU threshold");
  Bind<std::string>(ge, "--scope", "ground_eval.candidate_scope", "all or class");
  Bind<std::string>(ge, "--class-subset", "ground_eval.class_subset", "Class subset file");
  BindFlag(ge, "--no-dedupe", "ground_eval.dedupe_per_image", false,
           "Keep every detection per image and class");
  BindFlag(ge, "--restrict-to-mentioned", "ground_eval.restrict_to_mentioned", true,
           "Ignore ground truth of classes no caption mentions");
  BindFlag(ge, "--match-plurals", "mentions.match_plurals", true, "Also match plural forms");
  ge.run = [&](RunConfig& c, CommonFlags& f) {
    return RunGroundEval(c, f, truth_path, detections_in, detections_out, in, out);
  };

  Command& kf = add("kb-fetch", "Populate the lookup cache or build an NE snapshot");
  AddCommon(kf, false);
  std::string queries;
  std::vector<std::string> types;
  kf.app->add_option("--queries", queries, "NE surfaces, one per line");
  kf.app->add_option("--types", types, "Ontology types to list entities for")->delimiter(',');
  Bind<std::string>(kf, "--ontology", "ontology", "Ontology used to check --types");
  Bind<std::string>(kf, "--kb-url", "kb.base_url", "Lookup service URL");
  Bind<double>(kf, "--rate-limit", "kb.rate_limit", "Requests per second");
  kf.run = [&](RunConfig& c, CommonFlags& f) {
    return RunKbFetch(c, f, queries, types, in, out);
  };

  try {
    std::vector<std::string> rest(args.rbegin(), args.rend());
    if (!rest.empty()) rest.pop_back();  // program name
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (auto& cmd : commands) {
    if (!cmd->app->parsed()) continue;
    try {
      RunConfig config = Resolve(cmd->flags, err);
      return cmd->run(config, cmd->flags);
    } catch (const ParseError& e) {
      err << "hypernym: " << ErrorKindName(e.kind()) << ": " << e.what() << "\n";
      if (!e.excerpt().empty()) err << "  near: " << e.excerpt() << "\n";
      return ExitCodeFor(e.kind());
    } catch (const Error& e) {
      err << "hypernym: " << ErrorKindName(e.kind()) << ": " << e.what() << "\n";
      return ExitCodeFor(e.kind());
    } catch (const std::exception& e) {
      err << "hypernym: data error: " << e.what() << "\n";
      return kExitData;
    }
  }
  return kExitUsage;
}

}  // namespace hypernym::cli
