#pragma once

#include <stdexcept>
#include <string>

namespace sbss {

/// Broad failure class. Front ends map it onto exit codes and HTTP statuses.
enum class ErrorKind {
  validation,  // bad input or precondition (CLI exit 2, HTTP 400/422)
  numeric,     // estimation failure (CLI exit 3, HTTP 422)
  not_found,
  io,
};

/// The single exception type thrown by the library.
///
/// `code` is a stable machine-readable identifier such as
/// "missing_column" or "cut_does_not_separate". `field` optionally points at
/// the offending input field (a JSON pointer for documents, a column name
/// for CSV input).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message,
        std::string field = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorKind kind_;
  std::string code_;
  std::string field_;
};

[[noreturn]] void throw_validation(std::string code, const std::string& message,
                                   std::string field = {});
[[noreturn]] void throw_numeric(std::string code, const std::string& message);

}  // namespace sbss
