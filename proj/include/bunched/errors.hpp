#pragma once

#include <stdexcept>
#include <string>

namespace bunched {

// Error taxonomy mirrors the CLI exit codes: parse 2, validation 3,
// unsupported 4.
enum class ErrKind { Parse, Validation, Unsupported };

struct Error : std::runtime_error {
  ErrKind kind;
  Error(ErrKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

[[noreturn]] inline void fail_parse(const std::string& msg) {
  throw Error(ErrKind::Parse, msg);
}
[[noreturn]] inline void fail_validation(const std::string& msg) {
  throw Error(ErrKind::Validation, msg);
}
[[noreturn]] inline void fail_unsupported(const std::string& msg) {
  throw Error(ErrKind::Unsupported, msg);
}

}  // namespace bunched
