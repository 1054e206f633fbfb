// Copyright 2026 The postgen Authors
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

#include <stdexcept>
#include <string>

namespace postgen
{

/// Base for all data errors raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the file and the 1-based line number (0 for whole-document errors).
class ParseError : public Error
{
public:
  ParseError(std::string file, std::size_t line, const std::string & what)
  : Error(file + ":" + std::to_string(line) + ": " + what), file_(std::move(file)), line_(line)
  {
  }

  const std::string & file() const { return file_; }
  std::size_t line() const { return line_; }

private:
  std::string file_;
  std::size_t line_;
};

/// Input that parsed but violates a data invariant (dangling id, non-monotonic time, ...).
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// A track or sequence does not span the requested time window.
class CoverageError : public Error
{
public:
  using Error::Error;
};

/// The obstacle cannot be associated with any lane path.
class NoAssociationError : public Error
{
public:
  using Error::Error;
};

}  // namespace postgen
