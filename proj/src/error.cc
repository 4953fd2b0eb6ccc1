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

#include "anyonlab/error.h"

#include <cstdio>

namespace anyonlab {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotSquare:
            return "NotSquare";
        case ErrorCode::NotNormal:
            return "NotNormal";
        case ErrorCode::NotUnitary:
            return "NotUnitary";
        case ErrorCode::NotHermitian:
            return "NotHermitian";
        case ErrorCode::ConvergenceFailure:
            return "ConvergenceFailure";
        case ErrorCode::DimensionMismatch:
            return "DimensionMismatch";
        case ErrorCode::SizeOverflow:
            return "SizeOverflow";
        case ErrorCode::InvalidApparatus:
            return "InvalidApparatus";
        case ErrorCode::NotUnitModulus:
            return "NotUnitModulus";
        case ErrorCode::ExpectationOutOfDisk:
            return "ExpectationOutOfDisk";
        case ErrorCode::IndexOutOfRange:
            return "IndexOutOfRange";
        case ErrorCode::MissingBraidMatrix:
            return "MissingBraidMatrix";
        case ErrorCode::ZeroNormComponent:
            return "ZeroNormComponent";
        case ErrorCode::ZeroLikelihood:
            return "ZeroLikelihood";
        case ErrorCode::InvalidState:
            return "InvalidState";
        case ErrorCode::InvalidConfig:
            return "InvalidConfig";
        case ErrorCode::EngineMismatch:
            return "EngineMismatch";
        case ErrorCode::NonFinite:
            return "NonFinite";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
}

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

bool Error::is_numerical() const noexcept {
    switch (code_) {
        case ErrorCode::InvalidConfig:
        case ErrorCode::IndexOutOfRange:
        case ErrorCode::MissingBraidMatrix:
        case ErrorCode::DimensionMismatch:
        case ErrorCode::SizeOverflow:
            return false;
        default:
            return true;
    }
}

}  // namespace anyonlab
