// Copyright 2026 The asdpool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASDPOOL_ERROR_H_
#define ASDPOOL_ERROR_H_

#include <stdexcept>
#include <string>

namespace asdpool {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input, such as a malformed file or an out-of-range parameter.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures, e.g. a missing file or an unwritable destination.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace asdpool

#endif  // ASDPOOL_ERROR_H_
