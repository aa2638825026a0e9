#include "core/error.hpp"

namespace evrecon {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parameter: return "parameter error";
    case ErrorKind::io: return "I/O error";
    case ErrorKind::format: return "format error";
    case ErrorKind::dimension: return "dimension error";
    case ErrorKind::numeric: return "numeric error";
    case ErrorKind::config: return "config error";
    case ErrorKind::provider: return "provider error";
  }
  return "error";
}

}  // namespace evrecon
