// Copyright (c) 2026 The corpusforge Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace corpusforge {

/// Base for every error thrown by the library. Callers that only need the
/// message can catch this; callers that branch on the failure catch the
/// module-specific `KindedError<...>` instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An error tagged with a module-specific enum. `to_string(Kind)` must be
/// declared in the enum's namespace.
template <typename Kind>
class KindedError : public Error {
 public:
  KindedError(Kind kind, const std::string& detail)
      : Error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

enum class IoErrc { OpenFailed, ReadFailed, WriteFailed, BadFormat };

constexpr std::string_view to_string(IoErrc kind) {
  switch (kind) {
    case IoErrc::OpenFailed: return "OpenFailed";
    case IoErrc::ReadFailed: return "ReadFailed";
    case IoErrc::WriteFailed: return "WriteFailed";
    case IoErrc::BadFormat: return "BadFormat";
  }
  return "IoError";
}

using IoError = KindedError<IoErrc>;

}  // namespace corpusforge
