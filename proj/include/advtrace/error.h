// Copyright (c) 2026 The advtrace Authors
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

#ifndef ADVTRACE_ERROR_H_
#define ADVTRACE_ERROR_H_

#include <stdexcept>
#include <string>

namespace advtrace {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented contract (bad values, duplicate ids, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A byte or text stream does not follow its on-disk format.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace advtrace

#endif  // ADVTRACE_ERROR_H_
