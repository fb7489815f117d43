#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chirono {

enum class Errc {
    InvalidConfig,
    EmptyHandSet,
    InvalidScene,
    DegenerateDomain,
    UnsortedData,
    NonInvertibleScale,
    MalformedMessage,
    SecondPresenter,
    MalformedTrace,
    SceneHashMismatch,
    TimestampOutOfRange,
    MissingGolden,
    Io,
};

std::string_view to_string(Errc code);

/// Exception carrying a machine-checkable error code. Used for load-time and
/// API-misuse failures; per-frame outcomes are reported through result values.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace chirono
