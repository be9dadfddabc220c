// Copyright (c) 2026 The asvkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASVKIT_COMMON_H_
#define ASVKIT_COMMON_H_

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace asvkit {

using Vector = std::vector<double>;

// Every failure raised by the library derives from Error. Callers that only
// care about "bad input" vs "bug" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file content. The message is prefixed with "path:line: ".
class ParseError : public Error {
 public:
  ParseError(const std::string& path, size_t line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what),
        path_(path),
        line_(line) {}

  const std::string& path() const { return path_; }
  size_t line() const { return line_; }

 private:
  std::string path_;
  size_t line_;
};

// Shortest decimal string that parses back to exactly `value`.
std::string FormatDouble(double value);

// Strict parse of the whole token; rejects trailing junk, leading '+',
// and non-finite values.
bool ParseDouble(std::string_view token, double* value);
bool ParseInt(std::string_view token, long long* value);

// Whitespace tokenizer (spaces and tabs).
std::vector<std::string_view> SplitWhitespace(std::string_view line);
std::vector<std::string_view> SplitChar(std::string_view line, char sep);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partially written file.
void WriteFileAtomic(const std::string& path, std::string_view contents);
std::string ReadFile(const std::string& path);

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double Value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Dense row-major matrix.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  Vector data;

  Matrix() = default;
  Matrix(size_t r, size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  std::span<double> Row(size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> Row(size_t i) const {
    return {data.data() + i * cols, cols};
  }
  double& operator()(size_t i, size_t j) { return data[i * cols + j]; }
  double operator()(size_t i, size_t j) const { return data[i * cols + j]; }
};

double Dot(std::span<const double> a, std::span<const double> b);
double L2Norm(std::span<const double> a);

}  // namespace asvkit

#endif  // ASVKIT_COMMON_H_
