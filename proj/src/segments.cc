// Copyright 2026 The plkit Authors.
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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "json.hpp"
#include "plkit/audio.h"
#include "plkit/error.h"

namespace plkit {

namespace {

struct FrameLevels {
  std::size_t frame_len = 0;
  std::size_t hop = 0;
  std::vector<double> db;  // one per frame; frame k starts at k * hop

  std::size_t Start(std::size_t k) const { return k * hop; }
};

// The last frame is truncated at n, so frames always cover the whole range.
FrameLevels ComputeLevels(const float* x, std::size_t n, int rate, const FrameOptions& opt) {
  if (!(opt.frame_ms > 0.0) || !(opt.hop_ms > 0.0)) {
    throw ValidationError("frame and hop lengths must be positive");
  }
  FrameLevels levels;
  levels.frame_len = std::max<std::size_t>(1, std::lround(opt.frame_ms * rate / 1000.0));
  levels.hop = std::max<std::size_t>(1, std::lround(opt.hop_ms * rate / 1000.0));
  if (n == 0) return levels;
  std::size_t frames = 1;
  if (n > levels.frame_len) frames += (n - levels.frame_len + levels.hop - 1) / levels.hop;
  levels.db.resize(frames);
  for (std::size_t k = 0; k < frames; ++k) {
    const std::size_t begin = levels.Start(k);
    const std::size_t len = std::min(levels.frame_len, n - begin);
    levels.db[k] = RmsDb(x + begin, len);
  }
  return levels;
}

void CheckSegment(const Segment& s) {
  if (!(s.start_s >= 0.0 && s.start_s < s.end_s)) {
    throw ValidationError("segment needs 0 <= start_s < end_s");
  }
}

}  // namespace

std::vector<Segment> ReadSegments(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<Segment> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      Segment s;
      s.start_s = j.at("start_s").get<double>();
      s.end_s = j.at("end_s").get<double>();
      CheckSegment(s);
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception&) {
      throw ParseError("malformed segment", line_no);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

void WriteSegments(const std::vector<Segment>& segments, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& s : segments) {
    nlohmann::ordered_json j;
    j["start_s"] = std::round(s.start_s * 1e6) / 1e6;
    j["end_s"] = std::round(s.end_s * 1e6) / 1e6;
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("cannot write " + path.string());
}

std::vector<std::vector<float>> ReadEmbeddings(const std::filesystem::path& path) {
  auto dim_path = path;
  dim_path += ".dim";
  std::ifstream dim_in(dim_path);
  if (!dim_in) throw IoError("cannot open " + dim_path.string());
  long dim = 0;
  if (!(dim_in >> dim) || dim <= 0) throw ValidationError("bad dimension in " + dim_path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::size_t row_bytes = static_cast<std::size_t>(dim) * sizeof(float);
  if (buf.size() % row_bytes != 0) {
    throw ValidationError(path.string() + ": size is not a multiple of the dimension");
  }
  std::vector<std::vector<float>> rows(buf.size() / row_bytes, std::vector<float>(dim));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::memcpy(rows[r].data(), buf.data() + r * row_bytes, row_bytes);
  }
  return rows;
}

void WriteEmbeddings(const std::vector<std::vector<float>>& rows,
                     const std::filesystem::path& path) {
  if (rows.empty()) throw ValidationError("no embeddings to write");
  const std::size_t dim = rows[0].size();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& row : rows) {
    if (row.size() != dim) throw ValidationError("embedding dimension mismatch");
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(dim * sizeof(float)));
  }
  auto dim_path = path;
  dim_path += ".dim";
  std::ofstream dim_out(dim_path);
  dim_out << dim << '\n';
  if (!out || !dim_out) throw IoError("cannot write " + path.string());
}

std::vector<Segment> DetectSilence(const Waveform& w, const SilenceOptions& options) {
  w.Validate();
  const std::size_t n = w.samples.size();
  const FrameLevels levels = ComputeLevels(w.samples.data(), n, w.sample_rate, options);
  std::vector<Segment> out;
  const double rate = w.sample_rate;
  for (std::size_t k = 0; k < levels.db.size();) {
    if (!(levels.db[k] < options.threshold_db)) {
      ++k;
      continue;
    }
    std::size_t last = k;
    while (last + 1 < levels.db.size() && levels.db[last + 1] < options.threshold_db) ++last;
    Segment s;
    s.start_s = levels.Start(k) / rate;
    s.end_s = std::min(levels.Start(last) + levels.frame_len, n) / rate;
    if (s.length() >= options.min_silence_s) out.push_back(std::move(s));
    k = last + 1;
  }
  return out;
}

std::vector<Segment> MergeVadSegments(const std::vector<Segment>& speech, double max_gap_s) {
  std::vector<Segment> out;
  for (std::size_t i = 0; i < speech.size(); ++i) {
    CheckSegment(speech[i]);
    if (i > 0 && speech[i].start_s < speech[i - 1].end_s) {
      throw ValidationError("segments must be sorted and non-overlapping");
    }
    if (!out.empty() && speech[i].start_s - out.back().end_s < max_gap_s) {
      out.back().end_s = speech[i].end_s;
      out.back().embedding.clear();
    } else {
      out.push_back(speech[i]);
    }
  }
  return out;
}

double CosineSimilarity(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size() || a.empty()) throw ValidationError("embedding dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::vector<Segment>> MergeByEmbedding(const std::vector<Segment>& segments,
                                                   double threshold) {
  std::vector<std::vector<Segment>> groups;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    CheckSegment(segments[i]);
    if (segments[i].embedding.size() != segments[0].embedding.size() ||
        segments[i].embedding.empty()) {
      throw ValidationError("embedding dimension mismatch");
    }
    if (i > 0 && CosineSimilarity(segments[i - 1].embedding, segments[i].embedding) > threshold) {
      groups.back().push_back(segments[i]);
    } else {
      groups.push_back({segments[i]});
    }
  }
  return groups;
}

std::vector<Segment> SplitLongSegment(const Waveform& w, const Segment& seg, double max_len_s,
                                      const FrameOptions& options) {
  CheckSegment(seg);
  if (!(max_len_s > 0.0)) throw ValidationError("max_len_s must be positive");
  if (seg.end_s > w.duration_s() + 1e-9) throw ValidationError("segment exceeds the waveform");
  if (seg.length() <= max_len_s) return {seg};

  const double rate = w.sample_rate;
  const auto first = static_cast<std::size_t>(std::lround(seg.start_s * rate));
  const auto last = std::min(w.samples.size(), static_cast<std::size_t>(std::lround(seg.end_s * rate)));
  const FrameLevels levels = ComputeLevels(w.samples.data() + first, last - first, w.sample_rate, options);
  auto center_s = [&](std::size_t k) {
    const std::size_t len = std::min(levels.frame_len, last - first - levels.Start(k));
    return (first + levels.Start(k) + len / 2.0) / rate;
  };
  auto silent = [&](std::size_t k) { return levels.db[k] < options.threshold_db; };

  std::vector<Segment> out;
  double cur = seg.start_s;
  while (seg.end_s - cur > max_len_s) {
    const double limit = cur + max_len_s;
    double cut = limit;
    // Walk back from the boundary to the last silent run inside (cur, limit].
    std::size_t k = levels.db.size();
    while (k > 0 && center_s(k - 1) > limit) --k;
    while (k > 0 && center_s(k - 1) > cur && !silent(k - 1)) --k;
    if (k > 0 && center_s(k - 1) > cur) {
      const std::size_t run_end = k - 1;
      std::size_t run_begin = run_end;
      while (run_begin > 0 && silent(run_begin - 1) && center_s(run_begin - 1) > cur) --run_begin;
      double lowest = levels.db[run_end];
      for (std::size_t j = run_begin; j <= run_end; ++j) lowest = std::min(lowest, levels.db[j]);
      // Middle of the quietest frames, so flat silence is cut at its centre.
      std::size_t lo = run_end + 1, hi = run_begin;
      for (std::size_t j = run_begin; j <= run_end; ++j) {
        if (levels.db[j] == lowest) {
          lo = std::min(lo, j);
          hi = j;
        }
      }
      cut = std::round((center_s(lo) + center_s(hi)) / 2.0 * rate) / rate;
      if (!(cut > cur && cut <= limit)) cut = limit;
    }
    Segment piece;
    piece.start_s = cur;
    piece.end_s = cut;
    out.push_back(std::move(piece));
    cur = cut;
  }
  Segment tail;
  tail.start_s = cur;
  tail.end_s = seg.end_s;
  out.push_back(std::move(tail));
  return out;
}

}  // namespace plkit
