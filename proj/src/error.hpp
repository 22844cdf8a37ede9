///////////////////////////////////////////////////////////////////////
// File:        error.hpp
// Description: Error type shared by the library modules.
//
// (C) Copyright 2026, The ocrtl Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
///////////////////////////////////////////////////////////////////////

#pragma once

#include <stdexcept>
#include <string>

namespace ocrtl {

// Broad classes of failure. The C API maps each onto a status code and the
// CLI onto an exit status.
enum class ErrorKind {
  kInvalidArgument,
  kBlindSpot,         // character outside the codec
  kInfeasibleTarget,  // CTC target longer than the line allows
  kIo,
  kFormat,            // malformed model file or dataset
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error invalid_argument(const std::string& what) {
  return Error(ErrorKind::kInvalidArgument, what);
}

}  // namespace ocrtl
