#pragma once

#include <stdexcept>
#include <string>

namespace geotom {

enum class errc {
  invalid_parameter,
  unsupported_body,
  parse_error,
  not_even,
  no_convergence,
  not_intersection_body,
};

const char* errc_name(errc c);

/// Library error. `code()` distinguishes the failure class so callers
/// (notably the CLI) can map errors to exit codes without string matching.
class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_parameter: return "invalid-parameter";
    case errc::unsupported_body: return "unsupported-body";
    case errc::parse_error: return "parse-error";
    case errc::not_even: return "not-even";
    case errc::no_convergence: return "no-convergence";
    case errc::not_intersection_body: return "not-an-intersection-body";
  }
  return "error";
}

}  // namespace geotom
