#ifndef HELB_ERROR_H_
#define HELB_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace helb {

enum class ErrorCode {
  kInvalidArgument,
  kNotInvertible,
  kInvalidModulus,
  kNotFound,
  kInvalidOptions,
  kMessageOutOfRange,
  kDecryptionFailure,
  kCapabilityUnsupported,
  kWidthMismatch,
  kInvalidParams,
  kParamMismatch,
  kTooManyValues,
  kInvalidAddress,
  kInvalidPrefix,
  kSchemeMismatch,
  kEmptyInput,
  kFormat,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace helb

#endif  // HELB_ERROR_H_
