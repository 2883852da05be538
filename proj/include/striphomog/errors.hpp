#pragma once

#include <stdexcept>
#include <string>

namespace striphomog {

// Error kinds map to CLI exit codes: config/io/geometry are usage errors
// (exit 2), mesh/numerical/quality are runtime failures (exit 3).
enum class ErrKind { config, io, geometry, mesh, numerical, quality };

class Error : public std::runtime_error {
 public:
  Error(ErrKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrKind kind() const { return kind_; }

  static int exit_code(ErrKind k) {
    switch (k) {
      case ErrKind::config:
      case ErrKind::io:
      case ErrKind::geometry:
        return 2;
      default:
        return 3;
    }
  }

 private:
  ErrKind kind_;
};

[[noreturn]] inline void fail(ErrKind k, const std::string& msg) {
  throw Error(k, msg);
}

}  // namespace striphomog
