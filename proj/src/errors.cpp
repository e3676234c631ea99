// SPDX-License-Identifier: Apache-2.0
//
// cranlab: C-RAN capacity and fronthaul engineering toolkit
// Copyright (C) 2026 The cranlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cranlab/errors.hpp"

namespace cranlab
{

std::string_view to_string(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SingularConditioningBlock: return "SingularConditioningBlock";
    case ErrorCode::SingularQuantizer: return "SingularQuantizer";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidQuantizer: return "InvalidQuantizer";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::CapTooSmall: return "CapTooSmall";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::PowerBudgetExceeded: return "PowerBudgetExceeded";
    case ErrorCode::InvalidRatio: return "InvalidRatio";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::MalformedBitstream: return "MalformedBitstream";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ScenarioNotFound: return "ScenarioNotFound";
    case ErrorCode::EngineError: return "EngineError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

void fail(ErrorCode code, const std::string &what)
{
    throw Error(code, what);
}

} // namespace cranlab
