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
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "plkit/audio.h"
#include "plkit/error.h"

namespace plkit {

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes little-endian");

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T Load(const std::vector<char>& buf, std::size_t pos) {
  T value;
  std::memcpy(&value, buf.data() + pos, sizeof(T));
  return value;
}

template <typename T>
void Store(std::string& out, T value) {
  out.append(reinterpret_cast<const char*>(&value), sizeof(T));
}

}  // namespace

void Waveform::Validate() const {
  if (sample_rate <= 0) throw ValidationError("sample rate must be positive");
  for (float s : samples) {
    if (!std::isfinite(s)) throw ValidationError("non-finite sample");
  }
}

Waveform ReadWav(const std::filesystem::path& path, int expected_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string name = path.string();
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0) {
    throw ValidationError(name + ": not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0;
  std::uint32_t rate = 0;
  Waveform w;
  for (std::size_t pos = 12; pos + 8 <= buf.size();) {
    const std::string id(buf.data() + pos, 4);
    const auto size = Load<std::uint32_t>(buf, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > buf.size()) throw ValidationError(name + ": truncated '" + id + "' chunk");
    if (id == "fmt ") {
      if (size < 16) throw ValidationError(name + ": short fmt chunk");
      auto format = Load<std::uint16_t>(buf, body);
      channels = Load<std::uint16_t>(buf, body + 2);
      rate = Load<std::uint32_t>(buf, body + 4);
      bits = Load<std::uint16_t>(buf, body + 14);
      if (format == kFormatExtensible && size >= 26) format = Load<std::uint16_t>(buf, body + 24);
      if (format != kFormatPcm || bits != 16 || channels != 1) {
        throw ValidationError(name + ": only 16-bit PCM mono is supported");
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw ValidationError(name + ": data chunk before fmt chunk");
      w.samples.resize(size / 2);
      for (std::size_t i = 0; i < w.samples.size(); ++i) {
        w.samples[i] = Load<std::int16_t>(buf, body + 2 * i) / 32768.0f;
      }
      w.sample_rate = static_cast<int>(rate);
      if (expected_rate > 0 && w.sample_rate != expected_rate) {
        throw ValidationError(name + ": sample rate " + std::to_string(rate) + " Hz, expected " +
                              std::to_string(expected_rate));
      }
      return w;
    }
    pos = body + size + (size & 1);
  }
  throw ValidationError(name + ": no data chunk");
}

void WriteWav(const Waveform& w, const std::filesystem::path& path) {
  w.Validate();
  const auto data_bytes = static_cast<std::uint32_t>(w.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  Store<std::uint32_t>(out, 36 + data_bytes);
  out += "WAVEfmt ";
  Store<std::uint32_t>(out, 16);
  Store<std::uint16_t>(out, kFormatPcm);
  Store<std::uint16_t>(out, 1);
  Store<std::uint32_t>(out, static_cast<std::uint32_t>(w.sample_rate));
  Store<std::uint32_t>(out, static_cast<std::uint32_t>(w.sample_rate) * 2);
  Store<std::uint16_t>(out, 2);
  Store<std::uint16_t>(out, 16);
  out += "data";
  Store<std::uint32_t>(out, data_bytes);
  for (float s : w.samples) {
    const float clamped = std::clamp(s, -1.0f, 1.0f);
    Store<std::int16_t>(out, static_cast<std::int16_t>(
                                 std::clamp(std::lround(clamped * 32768.0f), -32768L, 32767L)));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !f.write(out.data(), static_cast<std::streamsize>(out.size()))) {
    throw IoError("cannot write " + path.string());
  }
}

double MeanPower(const float* x, std::size_t n) {
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += static_cast<double>(x[i]) * x[i];
  return sum / static_cast<double>(n);
}

double RmsDb(const float* x, std::size_t n) {
  const double p = MeanPower(x, n);
  return p > 0.0 ? 10.0 * std::log10(p) : -std::numeric_limits<double>::infinity();
}

}  // namespace plkit
