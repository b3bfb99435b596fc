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

// Chunked worker pool with ordered results. Items are pulled in chunks of
// bounded size, processed by up to `jobs` threads, and handed to `emit` in
// input order, so memory stays proportional to the chunk size and output
// does not depend on `jobs`.

#ifndef HYPERNYM_TOOLS_PARALLEL_H_
#define HYPERNYM_TOOLS_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace hypernym::cli {

struct Line {
  std::size_t number = 0;  // 1-based
  std::string text;
};

// Reads non-blank lines; a trailing '\r' is dropped.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool Next(Line& line) {
    std::string text;
    while (std::getline(in_, text)) {
      ++number_;
      if (!text.empty() && text.back() == '\r') text.pop_back();
      if (text.find_first_not_of(" \t") == std::string::npos) continue;
      line.number = number_;
      line.text = std::move(text);
      return true;
    }
    return false;
  }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

// Runs process(item) -> Result for every item produced by next(item), then
// emit(result) in item order. The exception of the earliest failing item is
// rethrown after its chunk finishes; earlier results have been emitted.
template <typename Item, typename Result, typename Next, typename Process,
          typename Emit>
void ProcessOrdered(int jobs, std::size_t chunk_size, Next&& next, Process&& process,
                    Emit&& emit) {
  jobs = std::max(jobs, 1);
  chunk_size = std::max<std::size_t>(chunk_size, 1);
  std::vector<Item> items;
  std::vector<std::optional<Result>> results;
  std::vector<std::exception_ptr> errors;
  for (;;) {
    items.clear();
    Item item;
    while (items.size() < chunk_size && next(item)) items.push_back(std::move(item));
    if (items.empty()) return;

    results.assign(items.size(), std::nullopt);
    errors.assign(items.size(), nullptr);
    auto work = [&](std::atomic<std::size_t>& cursor) {
      for (std::size_t i; (i = cursor.fetch_add(1)) < items.size();) {
        try {
          results[i].emplace(process(items[i]));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::atomic<std::size_t> cursor{0};
    const int threads = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(jobs), items.size()));
    if (threads <= 1) {
      work(cursor);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work, std::ref(cursor));
      for (std::thread& t : pool) t.join();
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      emit(std::move(*results[i]));
    }
  }
}

}  // namespace hypernym::cli

#endif  // HYPERNYM_TOOLS_PARALLEL_H_
