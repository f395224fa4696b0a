// Copyright 2026 The Authors.
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

namespace imax {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed edge-list line. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input is well-formed but does not fit the requested format (e.g. explicit
// weights requested but the weight column is missing).
class FormatError : public Error {
 public:
  using Error::Error;
};

// A value lies outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A caller violated an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The exact oracles only handle acyclic inputs.
class UnsupportedInputError : public Error {
 public:
  using Error::Error;
};

// Two source->target paths share an edge, so the shared-nothing product
// formula does not apply and the Monte-Carlo estimator must be used.
class SharedEdgeError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration or command-line combination.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace imax
