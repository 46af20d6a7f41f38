#include "wvsim/error.h"

namespace wvsim {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
            return "InvalidArgument";
        case ErrorCode::CouplingTooStrong:
            return "CouplingTooStrong";
        case ErrorCode::PostselectionSingular:
            return "PostselectionSingular";
        case ErrorCode::LinearizationInvalid:
            return "LinearizationInvalid";
        case ErrorCode::NonOrthonormalBasis:
            return "NonOrthonormalBasis";
        case ErrorCode::ZeroCoincidenceNorm:
            return "ZeroCoincidenceNorm";
        case ErrorCode::WeakValueReferenceZero:
            return "WeakValueReferenceZero";
        case ErrorCode::ZeroProbability:
            return "ZeroProbability";
        case ErrorCode::ZeroProbeCoupling:
            return "ZeroProbeCoupling";
        case ErrorCode::ZeroInformation:
            return "ZeroInformation";
        case ErrorCode::TooManyDiscardedReplicas:
            return "TooManyDiscardedReplicas";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

}  // namespace wvsim
