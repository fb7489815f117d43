#include "chirono/scene_manager.hpp"
#include "chirono/error.hpp"

#include <algorithm>
#include <charconv>
#include <iostream>

namespace chirono {

TransitionPlan plan_transition(const SceneSpec& from, const SceneSpec& to) {
    TransitionPlan plan;
    plan.duration_ms = to.transition_ms;
    auto visible = [](const SceneSpec& s, const std::string& oid) -> const OverlaySpec* {
        const OverlaySpec* o = s.overlay(oid);
        return o && o->visible ? o : nullptr;
    };
    for (const auto& o : from.overlays) {
        if (!o.visible) continue;
        if (const OverlaySpec* next = visible(to, o.id)) {
            if (!(next->frame == o.frame)) plan.morphs.push_back({o.id, o.frame, next->frame});
        } else {
            plan.exits.push_back({o.id, o.exit_style, o.exit_to});
        }
    }
    for (const auto& o : to.overlays) {
        if (o.visible && !visible(from, o.id)) plan.enters.push_back({o.id, o.enter_style, o.enter_from});
    }
    return plan;
}

std::optional<NavCommand> parse_nav_command(std::string_view text) {
    if (text == "next") return NavCommand{NavCommand::Kind::Next, 0};
    if (text == "prev") return NavCommand{NavCommand::Kind::Prev, 0};
    constexpr std::string_view kGoto = "goto:";
    if (text.starts_with(kGoto)) {
        const auto digits = text.substr(kGoto.size());
        long long n = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty()) {
            return NavCommand{NavCommand::Kind::Goto, n};
        }
    }
    return std::nullopt;
}

std::string to_string(const NavCommand& cmd) {
    switch (cmd.kind) {
    case NavCommand::Kind::Next: return "next";
    case NavCommand::Kind::Prev: return "prev";
    case NavCommand::Kind::Goto: return "goto:" + std::to_string(cmd.target);
    }
    return "next";
}

NavOutcome SceneNavigator::navigate(const NavCommand& cmd) {
    NavOutcome out;
    out.from = index_;
    if (count_ == 0) return out;
    const long long last = static_cast<long long>(count_) - 1;
    long long target = static_cast<long long>(index_);
    switch (cmd.kind) {
    case NavCommand::Kind::Next: target += 1; break;
    case NavCommand::Kind::Prev: target -= 1; break;
    case NavCommand::Kind::Goto:
        target = cmd.target;
        if (target < 0 || target > last) {
            out.clamped = true;
            std::clog << "warning: GotoOutOfRange: goto:" << cmd.target << " clamped to [0, " << last << "]\n";
        }
        break;
    }
    index_ = static_cast<std::size_t>(std::clamp(target, 0LL, last));
    out.to = index_;
    return out;
}

} // namespace chirono
