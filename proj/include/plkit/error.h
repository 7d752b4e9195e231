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

#ifndef PLKIT_ERROR_H_
#define PLKIT_ERROR_H_

#include <stdexcept>
#include <string>

namespace plkit {

// Bad input values or violated preconditions. The CLI maps these to exit 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file contents. Carries the 1-based line number when known.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, long line = 0)
      : ValidationError(line > 0 ? what + " at line " + std::to_string(line)
                                 : what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// Missing or unwritable files. The CLI maps these to exit 2.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace plkit

#endif  // PLKIT_ERROR_H_
