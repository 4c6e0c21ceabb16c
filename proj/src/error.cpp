// SPDX-License-Identifier: Apache-2.0
#include "squint/error.hpp"

namespace squint {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateSteer: return "DegenerateSteer";
    case ErrorCode::SpacingAssumption: return "SpacingAssumption";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DelayTooLarge: return "DelayTooLarge";
    case ErrorCode::ZeroSignal: return "ZeroSignal";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroReference: return "ZeroReference";
    case ErrorCode::InsufficientGuard: return "InsufficientGuard";
    case ErrorCode::CombinerRequiresOfdm: return "CombinerRequiresOfdm";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndivisibleSizing: return "IndivisibleSizing";
    case ErrorCode::Config: return "Config";
    }
    return "Unknown";
}

} // namespace squint
