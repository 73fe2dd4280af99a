/* Copyright 2026 The segscore Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SEGSCORE_ERRORS_H_
#define SEGSCORE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace segscore {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (bad class id, tau < 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Instance annotation disagrees with the class mask.
class AnnotationMismatch : public Error {
 public:
  using Error::Error;
};

// A file was readable but its content is malformed or unsupported.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed. Indicates a bug, not bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Several dataset entries failed; `failures` holds one message per entry.
class DatasetError : public Error {
 public:
  explicit DatasetError(std::vector<std::string> failures);

  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

}  // namespace segscore

#endif  // SEGSCORE_ERRORS_H_
