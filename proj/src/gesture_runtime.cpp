#include "chirono/gesture_runtime.hpp"
#include "chirono/error.hpp"

#include <algorithm>
#include <string>

namespace chirono {

void GestureConfig::validate() const {
    auto check = [](std::int64_t v, const char* what) {
        if (v < kMinProtocolMs || v > kMaxProtocolMs) {
            throw Error(Errc::InvalidConfig, std::string(what) + " = " + std::to_string(v) +
                                                 " ms outside [100, 1000]");
        }
    };
    for (auto v : dwell_ms) check(v, "dwell_ms");
    for (auto v : timeout_ms) check(v, "timeout_ms");
    if (!(pinch_on_dist > 0.0)) throw Error(Errc::InvalidConfig, "pinch_on_dist must be positive");
    if (!(pinch_off_dist > pinch_on_dist)) {
        throw Error(Errc::InvalidConfig, "pinch_off_dist must exceed pinch_on_dist");
    }
}

std::string_view to_string(EventKind k) {
    switch (k) {
    case EventKind::PointEnter: return "PointEnter";
    case EventKind::PointMove: return "PointMove";
    case EventKind::PointLeave: return "PointLeave";
    case EventKind::PalmEnter: return "PalmEnter";
    case EventKind::PalmMove: return "PalmMove";
    case EventKind::PalmLeave: return "PalmLeave";
    case EventKind::PinchStart: return "PinchStart";
    case EventKind::PinchMove: return "PinchMove";
    case EventKind::PinchEnd: return "PinchEnd";
    }
    return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(EventKind::PinchEnd); ++i) {
        auto k = static_cast<EventKind>(i);
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

GestureFamily family_of(EventKind k) {
    return static_cast<GestureFamily>(static_cast<int>(k) / 3);
}

namespace {

EventKind kind_for(GestureFamily f, Transition tr) {
    const int base = static_cast<int>(f) * 3;
    const int offset = tr == Transition::Start ? 0 : tr == Transition::Move ? 1 : 2;
    return static_cast<EventKind>(base + offset);
}

// 0 terminations, 1 initiations, 2 moves.
int lifecycle_class(EventKind k) {
    switch (static_cast<int>(k) % 3) {
    case 2: return 0;
    case 0: return 1;
    default: return 2;
    }
}

Transition advance_active(PhaseState& st, Signal signal, std::int64_t t_ms, std::int64_t dwell_ms) {
    switch (signal) {
    case Signal::Missing:
        st = {Phase::Lapsed, t_ms, std::nullopt};
        return Transition::None;
    case Signal::On:
    case Signal::Hold:
        st.release_since.reset();
        return Transition::Move;
    case Signal::Off:
        if (!st.release_since) st.release_since = t_ms;
        if (t_ms - *st.release_since >= dwell_ms) {
            st = {};
            return Transition::End;
        }
        return Transition::Move;
    }
    return Transition::None;
}

} // namespace

Transition advance(PhaseState& st, Signal signal, std::int64_t t_ms, std::int64_t dwell_ms,
                   std::int64_t timeout_ms) {
    switch (st.phase) {
    case Phase::Idle:
        if (signal != Signal::On) return Transition::None;
        st = {Phase::Candidate, t_ms, std::nullopt};
        [[fallthrough]];
    case Phase::Candidate:
        if (signal != Signal::On) {
            st = {};
            return Transition::None;
        }
        if (t_ms - st.since_ms >= dwell_ms) {
            st = {Phase::Active, t_ms, std::nullopt};
            return Transition::Start;
        }
        return Transition::None;
    case Phase::Active:
        return advance_active(st, signal, t_ms, dwell_ms);
    case Phase::Lapsed:
        if (t_ms - st.since_ms >= timeout_ms) {
            st = signal == Signal::On ? PhaseState{Phase::Candidate, t_ms, std::nullopt} : PhaseState{};
            return Transition::End;
        }
        if (signal == Signal::Missing) return Transition::None;
        st.phase = Phase::Active;
        return advance_active(st, signal, t_ms, dwell_ms);
    }
    return Transition::None;
}

const PhaseState& HandState::family(GestureFamily f) const {
    switch (f) {
    case GestureFamily::Point: return point;
    case GestureFamily::Palm: return palm;
    case GestureFamily::Pinch: break;
    }
    return pinch;
}

PhaseState& HandState::family(GestureFamily f) {
    return const_cast<PhaseState&>(std::as_const(*this).family(f));
}

Signal pinch_signal(const HandObservation* hand, const GestureConfig& cfg) {
    if (!hand) return Signal::Missing;
    const double d = distance(hand->index_tip, hand->thumb_tip);
    if (d < cfg.pinch_on_dist) return Signal::On;
    if (d <= cfg.pinch_off_dist) return Signal::Hold;
    return Signal::Off;
}

std::optional<GestureEvent> detect_pinch(const HandObservation* hand, HandState& prior, const GestureConfig& cfg,
                                         std::int64_t t_ms) {
    const auto tr = advance(prior.pinch, pinch_signal(hand, cfg), t_ms, cfg.dwell(GestureFamily::Pinch),
                            cfg.timeout(GestureFamily::Pinch));
    if (tr == Transition::None) return std::nullopt;
    const Hand h = hand ? hand->handedness : Hand::Right;
    const Point2 pos = hand ? hand->index_tip : prior.index_tip;
    return GestureEvent{kind_for(GestureFamily::Pinch, tr), h, pos, t_ms};
}

Hand dominant(std::span<const Hand> hands, const GestureConfig& cfg) {
    if (hands.empty()) throw Error(Errc::EmptyHandSet, "dominant() needs at least one hand");
    if (std::find(hands.begin(), hands.end(), cfg.dominant_hand) != hands.end()) return cfg.dominant_hand;
    return opposite(cfg.dominant_hand);
}

void sort_canonical(std::vector<GestureEvent>& events) {
    auto key = [](const GestureEvent& e) {
        const int cls = lifecycle_class(e.kind);
        int fam = static_cast<int>(family_of(e.kind));
        if (cls == 0) fam = 2 - fam; // nested teardown: Pinch, Palm, Point
        return std::tuple{e.t_ms, cls, static_cast<int>(e.hand), fam};
    };
    std::stable_sort(events.begin(), events.end(),
                     [&](const GestureEvent& a, const GestureEvent& b) { return key(a) < key(b); });
}

GestureRuntime::GestureRuntime(GestureConfig cfg) : cfg_(cfg) { cfg_.validate(); }

void GestureRuntime::reconfigure(const GestureConfig& cfg) {
    cfg.validate();
    cfg_ = cfg;
}

std::vector<GestureEvent> GestureRuntime::step(const LandmarkFrame& frame) {
    std::vector<GestureEvent> events;
    const std::int64_t t = frame.t_ms;
    for (Hand h : kHands) {
        HandState& st = hands_[index_of(h)];
        const HandObservation* obs = frame.find(h);
        if (obs) {
            st.index_tip = obs->index_tip;
            st.thumb_tip = obs->thumb_tip;
            st.palm_centroid = obs->palm_centroid;
        }
        const Signal presence = obs ? Signal::On : Signal::Missing;
        for (GestureFamily f : {GestureFamily::Point, GestureFamily::Palm}) {
            const auto tr = advance(st.family(f), presence, t, cfg_.dwell(f), cfg_.timeout(f));
            if (tr == Transition::None) continue;
            const Point2 pos = f == GestureFamily::Palm ? st.palm_centroid : st.index_tip;
            events.push_back({kind_for(f, tr), h, pos, t});
        }
        if (auto ev = detect_pinch(obs, st, cfg_, t)) {
            ev->hand = h;
            events.push_back(*ev);
        }
    }
    sort_canonical(events);
    return events;
}

} // namespace chirono
