#pragma once

#include "chirono/chart_model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chirono {

struct OverlayMotion {
    std::string overlay_id;
    TransitionStyle style = TransitionStyle::Fade;
    Direction direction = Direction::Right;

    friend bool operator==(const OverlayMotion&, const OverlayMotion&) = default;
};

struct OverlayMorph {
    std::string overlay_id;
    Rect from;
    Rect to;

    friend bool operator==(const OverlayMorph&, const OverlayMorph&) = default;
};

/// Exits, enters and morphs are disjoint by overlay id.
struct TransitionPlan {
    std::vector<OverlayMotion> exits;
    std::vector<OverlayMotion> enters;
    std::vector<OverlayMorph> morphs;
    std::int64_t duration_ms = 500;

    [[nodiscard]] bool empty() const { return exits.empty() && enters.empty() && morphs.empty(); }

    friend bool operator==(const TransitionPlan&, const TransitionPlan&) = default;
};

/// Only visible overlays take part. Overlays present in both scenes morph
/// when their frames differ; unchanged ones are omitted.
TransitionPlan plan_transition(const SceneSpec& from, const SceneSpec& to);

struct NavCommand {
    enum class Kind : std::uint8_t { Next, Prev, Goto };
    Kind kind = Kind::Next;
    long long target = 0; // Goto only

    friend bool operator==(const NavCommand&, const NavCommand&) = default;
};

/// Parses "next", "prev" and "goto:<n>".
std::optional<NavCommand> parse_nav_command(std::string_view text);
std::string to_string(const NavCommand& cmd);

struct NavOutcome {
    std::size_t from = 0;
    std::size_t to = 0;
    bool clamped = false;
    [[nodiscard]] bool changed() const { return from != to; }
};

/// Keyboard-driven position in the deck.
class SceneNavigator {
public:
    explicit SceneNavigator(std::size_t scene_count) : count_(scene_count) {}

    NavOutcome navigate(const NavCommand& cmd);

    [[nodiscard]] std::size_t index() const { return index_; }
    void reset(std::size_t index) { index_ = index; }

private:
    std::size_t count_;
    std::size_t index_ = 0;
};

} // namespace chirono
