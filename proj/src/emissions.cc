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

#include "plkit/emissions.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "plkit/error.h"

namespace plkit {

namespace {

constexpr char kMagic[4] = {'C', 'T', 'C', 'E'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "emission I/O assumes a little-endian host");

void PutU32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void Bytes(void* dst, std::size_t n) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw ParseError("truncated emissions payload");
    }
  }
  std::uint32_t U32() {
    std::uint32_t v;
    Bytes(&v, sizeof(v));
    return v;
  }

 private:
  std::istream& in_;
};

}  // namespace

EmissionMatrix::EmissionMatrix(std::size_t frames, std::vector<std::string> vocab,
                               std::size_t blank_index, std::vector<float> log_probs)
    : frames_(frames),
      vocab_(std::move(vocab)),
      blank_(blank_index),
      log_probs_(std::move(log_probs)) {
  if (frames_ < 1) throw ValidationError("emissions need T >= 1");
  if (vocab_.empty()) throw ValidationError("emissions need V >= 1");
  if (blank_ >= vocab_.size()) throw ValidationError("blank index out of range");
  if (log_probs_.size() != frames_ * vocab_.size()) {
    throw ValidationError("emission payload size does not match T x V");
  }
}

void EmissionMatrix::CheckNormalized(double tolerance) const {
  for (std::size_t t = 0; t < frames_; ++t) {
    auto row = Row(t);
    const float mx = *std::max_element(row.begin(), row.end());
    if (!std::isfinite(mx)) throw ValidationError("unnormalized emissions");
    double sum = 0.0;
    for (float v : row) sum += std::exp(static_cast<double>(v) - mx);
    const double lse = mx + std::log(sum);
    if (!(std::abs(lse) <= tolerance)) throw ValidationError("unnormalized emissions");
  }
}

void WriteEmissions(const EmissionMatrix& em, std::ostream& out) {
  out.write(kMagic, 4);
  PutU32(out, kVersion);
  PutU32(out, static_cast<std::uint32_t>(em.frames()));
  PutU32(out, static_cast<std::uint32_t>(em.classes()));
  PutU32(out, static_cast<std::uint32_t>(em.blank()));
  for (const auto& token : em.vocab()) {
    PutU32(out, static_cast<std::uint32_t>(token.size()));
    out.write(token.data(), static_cast<std::streamsize>(token.size()));
  }
  out.write(reinterpret_cast<const char*>(em.data().data()),
            static_cast<std::streamsize>(em.data().size() * sizeof(float)));
}

void WriteEmissions(const EmissionMatrix& em, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  WriteEmissions(em, out);
  if (!out) throw IoError("write failed for " + path.string());
}

EmissionMatrix ReadEmissions(std::istream& in) {
  Reader r(in);
  char magic[4];
  r.Bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw ParseError("bad emissions magic");
  if (r.U32() != kVersion) throw ParseError("unsupported emissions version");
  const std::uint32_t frames = r.U32();
  const std::uint32_t classes = r.U32();
  const std::uint32_t blank = r.U32();
  if (frames < 1) throw ParseError("emissions need T >= 1");
  if (classes < 1 || blank >= classes) throw ParseError("bad emissions header");

  std::vector<std::string> vocab(classes);
  for (auto& token : vocab) {
    const std::uint32_t len = r.U32();
    if (len > (1u << 20)) throw ParseError("vocabulary entry too long");
    token.resize(len);
    r.Bytes(token.data(), len);
  }
  const std::size_t n = static_cast<std::size_t>(frames) * classes;
  std::vector<float> data(n);
  r.Bytes(data.data(), n * sizeof(float));
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ParseError("trailing bytes after emissions payload");
  }
  return EmissionMatrix(frames, std::move(vocab), blank, std::move(data));
}

EmissionMatrix ReadEmissions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return ReadEmissions(in);
}

}  // namespace plkit
