#pragma once

#include <stdexcept>
#include <string>

namespace evrecon {

enum class ErrorKind {
  parameter,
  io,
  format,
  dimension,
  numeric,
  config,
  provider,
};

const char* to_string(ErrorKind kind);

// All library failures are reported with this exception; the C API maps the
// kind onto its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace evrecon
