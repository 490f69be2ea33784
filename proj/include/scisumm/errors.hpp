// Copyright 2026 The scisumm Authors
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
#include <string_view>

namespace scisumm {

enum class Errc {
  kMalformedRecord,
  kEmptyPaper,
  kMalformedDictionary,
  kMalformedSnapshot,
  kMalformedConfig,
  kDuplicateId,
  kEmptyRequest,
  kEmptySection,
  kUnknownPaper,
  kInvalidArgument,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kMalformedRecord: return "MalformedRecord";
    case Errc::kEmptyPaper: return "EmptyPaper";
    case Errc::kMalformedDictionary: return "MalformedDictionary";
    case Errc::kMalformedSnapshot: return "MalformedSnapshot";
    case Errc::kMalformedConfig: return "MalformedConfig";
    case Errc::kDuplicateId: return "DuplicateId";
    case Errc::kEmptyRequest: return "EmptyRequest";
    case Errc::kEmptySection: return "EmptySection";
    case Errc::kUnknownPaper: return "UnknownPaper";
    case Errc::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// All library failures are reported through this one exception type; callers
// switch on code() to map to exit codes or HTTP statuses.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace scisumm
