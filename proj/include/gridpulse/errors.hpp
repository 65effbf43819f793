// Copyright 2026 The GridPulse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRIDPULSE_ERRORS_HPP
#define GRIDPULSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gridpulse {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown PMU, bus, substation or event identifier.
class IdentifierError : public Error {
 public:
  using Error::Error;
};

// Caller supplied an argument outside the operation's domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A requested window lies outside the stored data.
class RangeError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// Malformed input document or file layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Checksum mismatch while reading a day file.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Synthetic generation parameters cannot produce a valid grid.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// Oscillation frequency at or above the 15 Hz Nyquist limit of 30 Hz data.
class NyquistError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

}  // namespace gridpulse

#endif  // GRIDPULSE_ERRORS_HPP
