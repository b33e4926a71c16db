// Copyright 2026 The crashdash Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace crashdash {

// Input could not be read as a whole (missing header, unreadable stream).
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed boundary file; message names the offending feature index.
class BoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied parameter is out of its domain. `param()` names it so the
// service layer can echo it back in the error envelope.
class InvalidArgument : public std::invalid_argument {
 public:
  InvalidArgument(std::string param, const std::string& message)
      : std::invalid_argument(message), param_(std::move(param)) {}

  const std::string& param() const noexcept { return param_; }

 private:
  std::string param_;
};

}  // namespace crashdash
