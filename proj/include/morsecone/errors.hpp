#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace morsecone {

enum class ErrorKind {
  InvalidArgument,
  StepSizeUnderflow,
  NoFirstZero,
  NoNegativeEigenvalue,
  BoundViolation,
  BracketNotFound,
  CutoffInsufficient,
  QuadratureNonconvergence,
  NonFiniteMatrix,
  SpectrumFormat,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library. `module` names the component that
// raised it; `parameters` carries the offending inputs so front ends can
// report provenance.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message,
        std::map<std::string, std::string> parameters = {})
      : std::runtime_error(message),
        kind_(kind),
        module_(std::move(module)),
        parameters_(std::move(parameters)) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view class_name() const { return to_string(kind_); }
  const std::string& module() const noexcept { return module_; }
  const std::map<std::string, std::string>& parameters() const noexcept {
    return parameters_;
  }

 private:
  ErrorKind kind_;
  std::string module_;
  std::map<std::string, std::string> parameters_;
};

}  // namespace morsecone
