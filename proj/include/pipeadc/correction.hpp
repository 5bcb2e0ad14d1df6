#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "pipeadc/error.hpp"
#include "pipeadc/pipeline.hpp"

namespace pipeadc {

inline constexpr unsigned kCodeMax = 4095;
inline constexpr unsigned kMidscale = 2048;

class OutputCode {
public:
    constexpr OutputCode() = default;
    explicit constexpr OutputCode(unsigned v) : value_(v > kCodeMax ? kCodeMax : v) {}
    constexpr unsigned value() const noexcept { return value_; }
    auto operator<=>(const OutputCode&) const = default;

private:
    std::uint16_t value_ = 0;
};

// Overlap-add: stage i (1-based) carries weight 2^(11-i), the flash weight 1.
inline OutputCode correct(const RawCodeFrame& frame) {
    long sum = frame.flash_code;
    for (std::size_t i = 0; i < kStages; ++i)
        sum += static_cast<long>(frame.stage_codes[i]) << (kStages - i);
    if (sum < 0) sum = 0;
    return OutputCode(static_cast<unsigned>(sum));
}

inline std::vector<OutputCode> correct_stream(const std::vector<RawCodeFrame>& frames) {
    std::vector<OutputCode> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(correct(f));
    return out;
}

}  // namespace pipeadc
