#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pipeadc {

// Every failure carries the module it came from so the CLI can print
// "metrics: no signal" style diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string_view module, std::string_view message)
        : std::runtime_error(std::string(module) + ": " + std::string(message)),
          module_(module), message_(message) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string module_;
    std::string message_;
};

namespace detail {

inline bool is_pow2(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace detail
}  // namespace pipeadc
