// Copyright 2026 The qdressed Authors
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

namespace qdressed {

/// Base of every error the library throws.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Register size outside the supported range.
class SizeError : public Error {
  public:
    using Error::Error;
};

/// Qubit or row index outside its valid range.
class IndexError : public Error {
  public:
    using Error::Error;
};

/// Argument value violates a documented precondition.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// Vector or matrix dimensions do not line up.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// API used out of order, e.g. a dropout mask that does not belong to the forward pass.
class UsageError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

/// Too few samples to carry out a sampling or neighbour operation.
class InsufficientDataError : public Error {
  public:
    using Error::Error;
};

/// Malformed input record. `line()` is 1-based and refers to the source file.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string &what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
  public:
    DivergenceError(std::size_t epoch, std::size_t batch)
        : Error("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                std::to_string(batch)),
          epoch_(epoch), batch_(batch) {}

    [[nodiscard]] std::size_t epoch() const noexcept { return epoch_; }
    [[nodiscard]] std::size_t batch() const noexcept { return batch_; }

  private:
    std::size_t epoch_;
    std::size_t batch_;
};

} // namespace qdressed
