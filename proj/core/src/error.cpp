#include "sbss/error.hpp"

#include <utility>

namespace sbss {

Error::Error(ErrorKind kind, std::string code, const std::string& message,
             std::string field)
    : std::runtime_error(message),
      kind_(kind),
      code_(std::move(code)),
      field_(std::move(field)) {}

void throw_validation(std::string code, const std::string& message,
                      std::string field) {
  throw Error(ErrorKind::validation, std::move(code), message, std::move(field));
}

void throw_numeric(std::string code, const std::string& message) {
  throw Error(ErrorKind::numeric, std::move(code), message);
}

}  // namespace sbss
