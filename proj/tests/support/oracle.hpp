#pragma once

// Reference model of the debounce protocol, written from the protocol
// rules rather than from the runtime's code.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chirono::testing {

enum class Sig { Missing, On, Hold, Off };

struct OracleEvent {
    std::int64_t t = 0;
    char what = '?'; // 'S' start, 'M' move, 'E' end

    friend bool operator==(const OracleEvent&, const OracleEvent&) = default;
};

/// Events for one gesture family of one hand over a frame sequence.
inline std::vector<OracleEvent> debounce_oracle(const std::vector<std::pair<std::int64_t, Sig>>& frames,
                                                std::int64_t dwell, std::int64_t timeout) {
    std::vector<OracleEvent> out;
    bool active = false;
    std::optional<std::int64_t> streak_from; // first frame of the current uninterrupted On run while inactive
    std::optional<std::int64_t> lost_at;     // first Missing frame while active
    std::optional<std::int64_t> off_from;    // first frame of the current Off run while active

    for (const auto& [t, s] : frames) {
        if (!active) {
            if (s == Sig::On) {
                if (!streak_from) streak_from = t;
                if (t - *streak_from >= dwell) {
                    active = true;
                    streak_from.reset();
                    out.push_back({t, 'S'});
                }
            } else {
                streak_from.reset();
            }
            continue;
        }
        // active (possibly bridging a dropout)
        if (lost_at && t - *lost_at >= timeout) {
            out.push_back({t, 'E'});
            active = false;
            lost_at.reset();
            off_from.reset();
            if (s == Sig::On) streak_from = t;
            continue;
        }
        if (s == Sig::Missing) {
            if (!lost_at) lost_at = t;
            off_from.reset();
            continue;
        }
        lost_at.reset();
        if (s == Sig::Off) {
            if (!off_from) off_from = t;
            if (t - *off_from >= dwell) {
                out.push_back({t, 'E'});
                active = false;
                off_from.reset();
                continue;
            }
        } else {
            off_from.reset();
        }
        out.push_back({t, 'M'});
    }
    return out;
}

/// Accepts (S M* E)* optionally ending inside an open S M* span.
inline bool lifecycle_ok(const std::string& letters) {
    bool open = false;
    for (char c : letters) {
        if (c == 'S') {
            if (open) return false;
            open = true;
        } else if (c == 'M' || c == 'E') {
            if (!open) return false;
            if (c == 'E') open = false;
        } else {
            return false;
        }
    }
    return true;
}

} // namespace chirono::testing
