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

#ifndef PLKIT_EMISSIONS_H_
#define PLKIT_EMISSIONS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace plkit {

// T x V natural-log posteriors from an external acoustic model.
//
// On disk (little-endian):
//   "CTCE" | u32 version=1 | u32 T | u32 V | u32 blank_index
//   | V x (u32 byte length, UTF-8 bytes) | T*V float32, row-major
class EmissionMatrix {
 public:
  EmissionMatrix(std::size_t frames, std::vector<std::string> vocab,
                 std::size_t blank_index, std::vector<float> log_probs);

  std::size_t frames() const { return frames_; }
  std::size_t classes() const { return vocab_.size(); }
  std::size_t blank() const { return blank_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::vector<float>& data() const { return log_probs_; }

  std::span<const float> Row(std::size_t t) const {
    return {log_probs_.data() + t * classes(), classes()};
  }
  float At(std::size_t t, std::size_t v) const { return log_probs_[t * classes() + v]; }

  // Throws ValidationError("unnormalized emissions") if any row's
  // log-sum-exp is farther than tolerance from 0.
  void CheckNormalized(double tolerance = 1e-3) const;

  bool operator==(const EmissionMatrix&) const = default;

 private:
  std::size_t frames_;
  std::vector<std::string> vocab_;
  std::size_t blank_;
  std::vector<float> log_probs_;
};

void WriteEmissions(const EmissionMatrix& em, std::ostream& out);
void WriteEmissions(const EmissionMatrix& em, const std::filesystem::path& path);
EmissionMatrix ReadEmissions(std::istream& in);
EmissionMatrix ReadEmissions(const std::filesystem::path& path);

}  // namespace plkit

#endif  // PLKIT_EMISSIONS_H_
