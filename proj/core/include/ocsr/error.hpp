// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ocsr {

/// Base class for all ocsr errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed textual input (SMILES, MOLfile, TOML, ...). Carries the byte
/// offset of the first offending character.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, size_t offset)
      : Error(msg + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

/// Tensor dimension mismatch.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Drawing does not fit the canvas, or a style constraint is violated.
class RenderError : public Error {
 public:
  using Error::Error;
};

/// Molecule generation gave up after the retry budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Dataset construction could not satisfy its quota/consistency constraints.
class DatasetError : public Error {
 public:
  using Error::Error;
};

/// Training aborted (non-finite loss, empty dataset, ...).
class TrainError : public Error {
 public:
  using Error::Error;
};

/// API misuse (e.g. backward() before forward()).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A classifier candidate violates its geometric precondition (e.g. a bond
/// pair farther apart than the cut window allows).
class CandidateError : public Error {
 public:
  using Error::Error;
};

/// Filesystem / serialization failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ocsr
