#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcuntz {

enum class ErrorCode {
  InvalidLetter,
  InvalidTruncation,
  InvalidSpec,
  Structure,
  Parse,
  AlphabetMismatch,
  RejectInput,
  UnclassifiedRemainder,
  OutOfRange,
  Incomparable,
  UnrecognizedStructure,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error(ErrorCode::Parse, what + " at byte " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace qcuntz
