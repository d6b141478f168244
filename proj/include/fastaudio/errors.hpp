// fastaudio/errors.hpp

// Copyright 2026  fastaudio authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef FASTAUDIO_ERRORS_HPP_
#define FASTAUDIO_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace fastaudio {

// One exception type per failure mode so callers can catch precisely.

struct SignalTooShort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NegativeFrequency : std::domain_error {
  using std::domain_error::domain_error;
};

struct NegativeMel : std::domain_error {
  using std::domain_error::domain_error;
};

struct InvalidRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptyScores : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptyDataset : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingleClassDataset : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotRiff : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedFormat : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TruncatedFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedLine : std::runtime_error {
  MalformedLine(const std::string& what, int line_number)
      : std::runtime_error(what + " (line " + std::to_string(line_number) + ")"),
        line(line_number) {}
  int line;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fastaudio

#endif  // FASTAUDIO_ERRORS_HPP_
