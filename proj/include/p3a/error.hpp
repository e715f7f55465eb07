// Copyright 2026 The P3A Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace p3a {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed config, missing file, out-of-range option.
// The CLI maps these to exit code 1; every other Error maps to 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// Malformed binary or text input. Carries the byte offset where parsing
// stopped (or -1 when the offset is not meaningful).
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, long long offset)
      : ValidationError(offset >= 0
                            ? what + " (at byte offset " + std::to_string(offset) + ")"
                            : what),
        offset_(offset) {}

  long long offset() const { return offset_; }

 private:
  long long offset_;
};

}  // namespace p3a
