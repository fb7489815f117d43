#pragma once

#include "chirono/geometry.hpp"
#include "chirono/landmark_ingest.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace chirono {

enum class GestureFamily : std::uint8_t { Point = 0, Palm = 1, Pinch = 2 };

inline constexpr std::int64_t kMinProtocolMs = 100;
inline constexpr std::int64_t kMaxProtocolMs = 1000;

struct GestureConfig {
    std::array<std::int64_t, 3> dwell_ms{200, 200, 200};
    std::array<std::int64_t, 3> timeout_ms{400, 400, 400};
    double pinch_on_dist = 0.05;
    double pinch_off_dist = 0.08;
    Hand dominant_hand = Hand::Right;

    [[nodiscard]] std::int64_t dwell(GestureFamily f) const { return dwell_ms[static_cast<std::size_t>(f)]; }
    [[nodiscard]] std::int64_t timeout(GestureFamily f) const { return timeout_ms[static_cast<std::size_t>(f)]; }

    /// Throws Error(InvalidConfig) when a duration leaves [100, 1000] ms or
    /// the pinch thresholds lack hysteresis.
    void validate() const;

    friend bool operator==(const GestureConfig&, const GestureConfig&) = default;
};

enum class EventKind : std::uint8_t {
    PointEnter,
    PointMove,
    PointLeave,
    PalmEnter,
    PalmMove,
    PalmLeave,
    PinchStart,
    PinchMove,
    PinchEnd,
};

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);
GestureFamily family_of(EventKind k);

struct GestureEvent {
    EventKind kind = EventKind::PointEnter;
    Hand hand = Hand::Right;
    Point2 position;
    std::int64_t t_ms = 0;

    friend bool operator==(const GestureEvent&, const GestureEvent&) = default;
};

enum class Phase : std::uint8_t { Idle, Candidate, Active, Lapsed };

/// Debounced lifecycle of one gesture family on one hand.
struct PhaseState {
    Phase phase = Phase::Idle;
    std::int64_t since_ms = 0;                 // Candidate start or signal loss
    std::optional<std::int64_t> release_since; // Active, signal above the off threshold

    friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

/// Per-frame input to a PhaseState. Hold is the hysteresis band.
enum class Signal : std::uint8_t { Missing, On, Hold, Off };

enum class Transition : std::uint8_t { None, Start, Move, End };

/**
 * Advances one debounced phase by a frame at t_ms.
 *
 * Idle -> Candidate on On; Candidate -> Active (Start) once On has held for
 * dwell; Active -> Lapsed on Missing; Lapsed bridges gaps shorter than
 * timeout and ends (End) at the first frame where the gap reaches timeout;
 * Active ends after Off is sustained for dwell.
 */
Transition advance(PhaseState& state, Signal signal, std::int64_t t_ms, std::int64_t dwell_ms,
                   std::int64_t timeout_ms);

struct HandState {
    PhaseState point;
    PhaseState palm;
    PhaseState pinch;
    Point2 index_tip;
    Point2 thumb_tip;
    Point2 palm_centroid;

    [[nodiscard]] const PhaseState& family(GestureFamily f) const;
    PhaseState& family(GestureFamily f);
};

Signal pinch_signal(const HandObservation* hand, const GestureConfig& cfg);

/// Pinch detection for one hand at t_ms; updates prior.pinch in place.
std::optional<GestureEvent> detect_pinch(const HandObservation* hand, HandState& prior, const GestureConfig& cfg,
                                         std::int64_t t_ms);

/// cfg.dominant_hand when present in hands, else the other one. Throws
/// Error(EmptyHandSet) on an empty set.
Hand dominant(std::span<const Hand> hands, const GestureConfig& cfg);

/// Orders events canonically: terminations, initiations, moves; Right
/// before Left within each class.
void sort_canonical(std::vector<GestureEvent>& events);

class GestureRuntime {
public:
    explicit GestureRuntime(GestureConfig cfg = {});

    /// Call exactly once per accepted frame.
    std::vector<GestureEvent> step(const LandmarkFrame& frame);

    [[nodiscard]] const HandState& state(Hand h) const { return hands_[index_of(h)]; }
    [[nodiscard]] bool pinching(Hand h) const { return state(h).pinch.phase == Phase::Active; }
    [[nodiscard]] const GestureConfig& config() const { return cfg_; }
    void reconfigure(const GestureConfig& cfg);

private:
    GestureConfig cfg_;
    std::array<HandState, 2> hands_{};
};

} // namespace chirono
