#pragma once

#include "chirono/gesture_runtime.hpp"
#include "chirono/landmark_ingest.hpp"
#include "chirono/scene_manager.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace chirono {

/// Everything a session can be configured with at runtime.
struct SessionConfig {
    GestureConfig gesture;
    IngestConfig ingest;

    friend bool operator==(const SessionConfig& a, const SessionConfig& b) {
        return a.gesture == b.gesture && a.ingest.confidence_threshold == b.ingest.confidence_threshold &&
               a.ingest.mirror == b.ingest.mirror;
    }
};

/// Applies a (possibly partial) config object. Durations accept either one
/// number for every family or {"point":..,"palm":..,"pinch":..}. Throws
/// Error(InvalidConfig) on unknown keys, bad types or out-of-range values.
SessionConfig apply_config_patch(SessionConfig base, const nlohmann::json& patch);
nlohmann::ordered_json config_to_json(const SessionConfig& cfg);
SessionConfig load_config(const std::string& path);

struct WireMessage {
    std::string type;
    std::int64_t seq = 0;
    std::int64_t t_ms = 0;
    nlohmann::json payload;
};

inline constexpr std::string_view kMsgFrame = "frame";
inline constexpr std::string_view kMsgKey = "key";
inline constexpr std::string_view kMsgConfig = "config";
inline constexpr std::string_view kMsgRenderDiff = "render_diff";
inline constexpr std::string_view kMsgRenderFull = "render_full";
inline constexpr std::string_view kMsgEvent = "event";
inline constexpr std::string_view kMsgError = "error";

/// Compact JSON with sorted keys: {"payload","seq","t_ms","type"}.
std::string encode(const WireMessage& msg);
/// Throws Error(MalformedMessage).
WireMessage decode(std::string_view text);

/// Trace-format frame record (key order t_ms, hands; per hand handedness,
/// index, thumb, palm, conf).
nlohmann::ordered_json frame_to_json(const RawFrame& frame);
/// Accepts a frame record or a bare {"hands": [...]} payload with t_ms
/// supplied separately. Throws Error(MalformedMessage).
RawFrame frame_from_json(const nlohmann::json& j, std::int64_t t_ms);
RawFrame frame_from_json(const nlohmann::json& j);

nlohmann::ordered_json event_to_json(const GestureEvent& ev);
GestureEvent event_from_json(const nlohmann::json& j);

/// Key-path replacement diff between two canonical render states:
/// {"set": {pointer: value}, "remove": [pointer]}. Top-level fields other
/// than "overlays" are replaced whole; overlays are diffed field by field.
nlohmann::json compute_diff(const nlohmann::json& before, const nlohmann::json& after);
bool diff_empty(const nlohmann::json& diff);
/// Applies removals, then sets in pointer order.
void apply_diff(nlohmann::json& state, const nlohmann::json& diff);

/// First JSON pointer at which a and b differ ("" for the root), or empty
/// when equal.
std::optional<std::string> first_difference(const nlohmann::json& a, const nlohmann::json& b);

} // namespace chirono
