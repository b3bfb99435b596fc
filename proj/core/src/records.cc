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

#include "hypernym/records.h"

#include <nlohmann/json.hpp>

#include "hypernym/error.h"

namespace hypernym {
namespace {

using nlohmann::json;

std::string Excerpt(std::string_view line) {
  constexpr std::size_t kMax = 120;
  return std::string(line.substr(0, kMax)) + (line.size() > kMax ? "..." : "");
}

[[noreturn]] void Fail(std::size_t line_no, const std::string& what,
                       std::string_view line) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what, Excerpt(line));
}

json ParseObject(std::string_view line, std::size_t line_no) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) Fail(line_no, "invalid JSON", line);
  if (!j.is_object()) Fail(line_no, "expected a JSON object", line);
  return j;
}

// Typed field access with line-numbered errors.
class Fields {
 public:
  Fields(std::string_view line, std::size_t line_no)
      : line_(line), line_no_(line_no), j_(ParseObject(line, line_no)) {}

  const json& root() const { return j_; }
  bool Has(const char* key) const { return j_.contains(key) && !j_[key].is_null(); }

  const json& Get(const char* key) const {
    if (!Has(key)) Fail(line_no_, std::string("missing field \"") + key + "\"", line_);
    return j_[key];
  }

  std::string String(const char* key) const { return AsString(Get(key), key); }

  std::string AsString(const json& v, const char* key) const {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    Fail(line_no_, std::string("field \"") + key + "\" must be a string", line_);
  }

  double Number(const json& v, const char* key) const {
    if (!v.is_number()) {
      Fail(line_no_, std::string("field \"") + key + "\" must be a number", line_);
    }
    return v.get<double>();
  }

  std::size_t Index(const json& v, const char* key) const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      Fail(line_no_, std::string("field \"") + key + "\" must be a non-negative integer",
           line_);
    }
    return v.get<std::size_t>();
  }

  const json& Array(const char* key) const {
    const json& v = Get(key);
    if (!v.is_array()) Fail(line_no_, std::string("field \"") + key + "\" must be an array", line_);
    return v;
  }

  [[noreturn]] void Error(const std::string& what) const { Fail(line_no_, what, line_); }

 private:
  std::string_view line_;
  std::size_t line_no_;
  json j_;
};

BoundingBox ParseBox(const Fields& f, const json& bbox, const char* key) {
  if (!bbox.is_array() || bbox.size() != 4) {
    f.Error(std::string("field \"") + key + "\" must be [x0, y0, x1, y1]");
  }
  BoundingBox b;
  b.x_min = f.Number(bbox[0], key);
  b.y_min = f.Number(bbox[1], key);
  b.x_max = f.Number(bbox[2], key);
  b.y_max = f.Number(bbox[3], key);
  return b;
}

using ojson = nlohmann::ordered_json;

std::string Dump(const ojson& j) {
  return j.dump(-1, ' ', /*ensure_ascii=*/false, ojson::error_handler_t::replace);
}

}  // namespace

TaggedCaption ParseTaggedCaption(std::string_view line, std::size_t line_no) {
  Fields f(line, line_no);
  TaggedCaption out;
  out.caption.id = f.Has("id") ? f.String("id") : std::to_string(line_no);
  out.caption.text = f.String("text");
  if (f.Has("image")) out.caption.image_ref = f.String("image");
  if (f.Has("spans")) {
    for (const json& s : f.Array("spans")) {
      NESpan span;
      if (s.is_array()) {
        if (s.size() < 2 || s.size() > 3) f.Error("span must be [start, end, label?]");
        span.start = f.Index(s[0], "spans");
        span.end = f.Index(s[1], "spans");
        if (s.size() == 3) span.ner_label = f.AsString(s[2], "spans");
      } else if (s.is_object()) {
        if (!s.contains("start") || !s.contains("end")) {
          f.Error("span object needs \"start\" and \"end\"");
        }
        span.start = f.Index(s["start"], "start");
        span.end = f.Index(s["end"], "end");
        if (s.contains("label")) span.ner_label = f.AsString(s["label"], "label");
        if (s.contains("surface")) span.surface = f.AsString(s["surface"], "surface");
      } else {
        f.Error("span must be an array or object");
      }
      out.spans.push_back(std::move(span));
    }
  }
  try {
    NormalizeSpans(out.caption, out.spans);
  } catch (const DataError& e) {
    throw ParseError("line " + std::to_string(line_no) + ": caption \"" +
                         out.caption.id + "\": " + e.what(),
                     Excerpt(line));
  }
  return out;
}

CaptionRecord ParseCaptionLine(std::string_view line, std::size_t line_no) {
  Fields f(line, line_no);
  CaptionRecord out;
  out.id = f.Has("id") ? f.String("id") : std::to_string(line_no);
  out.text = f.Has("text") ? f.String("text") : f.String("caption");
  if (f.Has("image_id")) out.image_ref = f.String("image_id");
  return out;
}

TextFormat ParseTextFormat(std::string_view name) {
  if (name == "auto") return TextFormat::kAuto;
  if (name == "jsonl") return TextFormat::kJsonl;
  if (name == "text") return TextFormat::kText;
  throw UsageError("unknown input format \"" + std::string(name) +
                   "\" (expected auto, jsonl or text)");
}

std::string CaptionText(std::string_view line, TextFormat format,
                        std::size_t line_no) {
  bool as_json = format == TextFormat::kJsonl;
  if (format == TextFormat::kAuto) {
    const std::size_t first = line.find_first_not_of(" \t\r");
    as_json = first != std::string_view::npos && line[first] == '{';
  }
  if (!as_json) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return std::string(line);
  }
  return ParseCaptionLine(line, line_no).text;
}

std::pair<std::string, std::string> ParseImageCaptionLine(std::string_view line,
                                                          std::size_t line_no) {
  Fields f(line, line_no);
  return {f.String("image_id"), f.Has("caption") ? f.String("caption") : f.String("text")};
}

NeSnapshotEntry ParseNeSnapshotLine(std::string_view line, std::size_t line_no) {
  Fields f(line, line_no);
  NeSnapshotEntry e{f.String("type"), f.String("surface")};
  if (e.type_id.empty() || e.surface.empty()) f.Error("empty type or surface");
  return e;
}

ImageGroundTruth ParseGroundTruthLine(std::string_view line, std::size_t line_no) {
  Fields f(line, line_no);
  ImageGroundTruth out;
  out.image_id = f.String("image_id");
  out.width = f.Number(f.Get("width"), "width");
  out.height = f.Number(f.Get("height"), "height");
  for (const json& b : f.Array("boxes")) {
    if (!b.is_object() || !b.contains("bbox") || !b.contains("class")) {
      f.Error("box needs \"bbox\" and \"class\"");
    }
    BoundingBox box = ParseBox(f, b["bbox"], "bbox");
    box.class_name = f.AsString(b["class"], "class");
    out.boxes.push_back(std::move(box));
  }
  try {
    out.Validate();
  } catch (const DataError& e) {
    throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), Excerpt(line));
  }
  return out;
}

std::pair<std::string, std::set<std::string>> ParseImageLabelsLine(
    std::string_view line, std::size_t line_no) {
  Fields f(line, line_no);
  std::set<std::string> labels;
  for (const json& l : f.Array("labels")) labels.insert(f.AsString(l, "labels"));
  return {f.String("image_id"), std::move(labels)};
}

Detection ParseDetectionLine(std::string_view line, std::size_t line_no) {
  Fields f(line, line_no);
  Detection d;
  d.image_id = f.String("image_id");
  d.class_name = f.String("class");
  d.box = ParseBox(f, f.Get("bbox"), "bbox");
  d.box.class_name = d.class_name;
  d.score = f.Number(f.Get("score"), "score");
  if (f.Has("box_index")) d.box_index = f.Index(f.Get("box_index"), "box_index");
  return d;
}

CaptionGrounding ParseGroundingLine(std::string_view line, std::size_t line_no) {
  Fields f(line, line_no);
  CaptionGrounding g;
  g.image_id = f.String("image_id");
  g.caption_id = f.Has("caption_id") ? f.String("caption_id") : std::to_string(line_no);
  for (const json& t : f.Array("tokens")) g.tokens.push_back(f.AsString(t, "tokens"));
  const json& rows = f.Array("attention");
  const Eigen::Index n_rows = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index n_cols = static_cast<Eigen::Index>(g.tokens.size());
  g.attention.resize(n_rows, n_cols);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols) {
      f.Error("attention row " + std::to_string(i) + " must have one value per token");
    }
    for (Eigen::Index j = 0; j < n_cols; ++j) g.attention(i, j) = f.Number(row[j], "attention");
  }
  return g;
}

std::string ToJsonLine(const HypernymizedCaption& caption) {
  ojson reps = ojson::array();
  for (const Replacement& r : caption.replacements) {
    ojson o = {{"start", r.span.start},
              {"end", r.span.end},
              {"surface", r.span.surface},
              {"hypernym", r.hypernym ? ojson(*r.hypernym) : ojson(nullptr)}};
    if (!r.span.ner_label.empty()) o["label"] = r.span.ner_label;
    reps.push_back(std::move(o));
  }
  ojson j = ojson::object();
  j["id"] = caption.id;
  j["text"] = caption.text;
  j["replacements"] = std::move(reps);
  return Dump(j);
}

std::string ToJsonLine(const TrainingPair& pair) {
  ojson prov = ojson::array();
  for (Manipulation m : pair.provenance) prov.push_back(ManipulationName(m));
  ojson j = ojson::object();
  j["source"] = pair.source;
  j["target"] = pair.target;
  j["provenance"] = std::move(prov);
  return Dump(j);
}

std::string ToJsonLine(const NeSnapshotEntry& entry) {
  ojson j = ojson::object();
  j["type"] = entry.type_id;
  j["surface"] = entry.surface;
  return Dump(j);
}

std::string ToJsonLine(const Detection& d) {
  ojson j = ojson::object();
  j["image_id"] = d.image_id;
  j["class"] = d.class_name;
  j["bbox"] = {d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max};
  j["score"] = d.score;
  j["box_index"] = d.box_index;
  return Dump(j);
}

}  // namespace hypernym
