#pragma once

#include <stdexcept>
#include <string>

namespace shocklab {

// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorKind {
  domain,     // argument outside the admissible set
  config,     // malformed or inconsistent configuration
  numerical,  // blow-up, vacuum proximity, integration failure
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Short machine-readable tag, e.g. "degenerate_shock".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error domain_error(std::string code, const std::string& what) {
  return {ErrorKind::domain, std::move(code), what};
}
inline Error numerical_error(std::string code, const std::string& what) {
  return {ErrorKind::numerical, std::move(code), what};
}
inline Error config_error(std::string code, const std::string& what) {
  return {ErrorKind::config, std::move(code), what};
}
inline Error io_error(std::string code, const std::string& what) {
  return {ErrorKind::io, std::move(code), what};
}

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::config: return "config";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace shocklab
