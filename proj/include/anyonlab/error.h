// Copyright 2026 The AnyonLab Authors
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

#ifndef ANYONLAB_ERROR_H
#define ANYONLAB_ERROR_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace anyonlab {

enum class ErrorCode {
    NotSquare,
    NotNormal,
    NotUnitary,
    NotHermitian,
    ConvergenceFailure,
    DimensionMismatch,
    SizeOverflow,
    InvalidApparatus,
    NotUnitModulus,
    ExpectationOutOfDisk,
    IndexOutOfRange,
    MissingBraidMatrix,
    ZeroNormComponent,
    ZeroLikelihood,
    InvalidState,
    InvalidConfig,
    EngineMismatch,
    NonFinite,
};

std::string_view error_code_name(ErrorCode code);

/// Shortest round-trip-ish rendering (%.6g) for messages.
std::string format_real(double x);

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it to an exit status without string
/// matching.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);

    ErrorCode code() const noexcept {
        return code_;
    }

    /// True for errors that signal a violated numerical invariant rather than a
    /// malformed request.
    bool is_numerical() const noexcept;

   private:
    ErrorCode code_;
};

}  // namespace anyonlab

#endif
