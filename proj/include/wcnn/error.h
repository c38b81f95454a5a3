// Copyright 2026 The WCNN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WCNN_ERROR_H_
#define WCNN_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wcnn {

// Base of every error thrown by the library. The CLI maps the concrete
// subclasses onto its exit-code contract (see ExitCodeFor in tools/).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Extents of two operands disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A scalar argument is outside its domain (stride <= 0, odd length, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// An object was used in a state that does not permit the call.
class StateError : public Error {
 public:
  using Error::Error;
};

// An MRA pyramid is not shape-consistent.
class StructureError : public Error {
 public:
  using Error::Error;
};

// A network description cannot be instantiated.
class BuildError : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated Netpbm stream. offset is the byte position at
// which decoding stopped.
class CodecError : public Error {
 public:
  CodecError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// A file could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Checkpoint failed its magic or CRC check, or ended early.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Checkpoint was written for a different network or format version.
class SpecMismatchError : public Error {
 public:
  using Error::Error;
};

// Dataset directory does not follow the expected layout.
class IngestionError : public Error {
 public:
  using Error::Error;
};

// Dataset cannot be split under the requested protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// NaN or Inf appeared in a loss or gradient.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Bad key, value, or combination in a run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace wcnn

#endif  // WCNN_ERROR_H_
