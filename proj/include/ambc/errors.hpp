// Copyright 2026 The ambc-mvs Authors
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

namespace ambc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dataset layout problems: missing camera for an image, too few views.
class DatasetError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& file, int line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A value violates a domain invariant (non-orthonormal rotation, bad range...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Binary map files.
class FormatError : public Error {
 public:
  using Error::Error;
};

class LengthError : public Error {
 public:
  using Error::Error;
};

class ExportError : public Error {
 public:
  ExportError(std::size_t index, const std::string& what)
      : Error("point " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class GeometryError : public Error {
 public:
  enum class Kind { kDegeneratePlane, kBehindCamera };
  GeometryError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace ambc
