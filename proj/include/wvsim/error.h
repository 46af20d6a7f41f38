#ifndef WVSIM_ERROR_H
#define WVSIM_ERROR_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace wvsim {

/// Failure categories raised by the library. Each maps to a distinct CLI exit code.
enum class ErrorCode {
    InvalidArgument,
    CouplingTooStrong,
    PostselectionSingular,
    LinearizationInvalid,
    NonOrthonormalBasis,
    ZeroCoincidenceNorm,
    WeakValueReferenceZero,
    ZeroProbability,
    ZeroProbeCoupling,
    ZeroInformation,
    TooManyDiscardedReplicas,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);

    ErrorCode code() const noexcept { return code_; }

   private:
    ErrorCode code_;
};

}  // namespace wvsim

#endif
