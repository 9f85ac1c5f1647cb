#pragma once

#include <stdexcept>
#include <string>

namespace qprop {

/// Error raised by every module. `code` is a stable machine-readable tag
/// (e.g. "FOCAL_TIME"), `module` names the throwing module ("green1d").
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string code, const std::string& message,
        std::string context = {})
      : std::runtime_error(message),
        module_(std::move(module)),
        code_(std::move(code)),
        context_(std::move(context)) {}

  const std::string& module() const noexcept { return module_; }
  const std::string& code() const noexcept { return code_; }
  const std::string& context() const noexcept { return context_; }

 private:
  std::string module_;
  std::string code_;
  std::string context_;
};

}  // namespace qprop
