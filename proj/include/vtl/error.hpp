#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vtl {

enum class ErrorKind {
  ArithmeticOverflow,
  BadMatrix,
  IllegalLetter,
  IdentityGenerator,
  DuplicateGenerator,
  UnsupportedGroup,
  ResourceLimit,
  RadiusExceeded,
  EmptyBox,
  NotCharacteristic,
  WitnessNotFound,
  DegenerateFit,
  DegenerateInput,
  InvariantViolation,
  UnknownKey,
  MissingRequired,
  BadValue,
  CorruptCache,
  ConfigMismatch,
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ArithmeticOverflow: return "ArithmeticOverflow";
    case ErrorKind::BadMatrix: return "BadMatrix";
    case ErrorKind::IllegalLetter: return "IllegalLetter";
    case ErrorKind::IdentityGenerator: return "IdentityGenerator";
    case ErrorKind::DuplicateGenerator: return "DuplicateGenerator";
    case ErrorKind::UnsupportedGroup: return "UnsupportedGroup";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::RadiusExceeded: return "RadiusExceeded";
    case ErrorKind::EmptyBox: return "EmptyBox";
    case ErrorKind::NotCharacteristic: return "NotCharacteristic";
    case ErrorKind::WitnessNotFound: return "WitnessNotFound";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::MissingRequired: return "MissingRequired";
    case ErrorKind::BadValue: return "BadValue";
    case ErrorKind::CorruptCache: return "CorruptCache";
    case ErrorKind::ConfigMismatch: return "ConfigMismatch";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Process exit code for an error kind: 2 config, 3 resource, 4 invariant, 5 I/O.
constexpr int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ResourceLimit:
    case ErrorKind::ArithmeticOverflow:
      return 3;
    case ErrorKind::InvariantViolation:
    case ErrorKind::WitnessNotFound:
      return 4;
    case ErrorKind::Io:
    case ErrorKind::CorruptCache:
      return 5;
    default:
      return 2;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorKind::ArithmeticOverflow, "64-bit addition");
  return out;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorKind::ArithmeticOverflow, "64-bit multiplication");
  return out;
}

inline std::int64_t checked_neg(std::int64_t a) {
  std::int64_t out;
  if (__builtin_sub_overflow(std::int64_t{0}, a, &out)) throw Error(ErrorKind::ArithmeticOverflow, "64-bit negation");
  return out;
}

inline std::int32_t checked_add32(std::int32_t a, std::int32_t b) {
  std::int32_t out;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorKind::ArithmeticOverflow, "fiber coordinate");
  return out;
}

}  // namespace detail
}  // namespace vtl
