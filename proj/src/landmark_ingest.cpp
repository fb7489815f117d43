#include "chirono/landmark_ingest.hpp"

#include <algorithm>
#include <cmath>

namespace chirono {

const HandObservation* LandmarkFrame::find(Hand h) const {
    for (const auto& obs : hands) {
        if (obs.handedness == h) return &obs;
    }
    return nullptr;
}

namespace {

Point2 reflect(Point2 p) { return {1.0 - p.x, p.y}; }

bool finite(const std::array<double, 2>& v) { return std::isfinite(v[0]) && std::isfinite(v[1]); }

Point2 to_point(const std::array<double, 2>& v) { return clamp_unit({v[0], v[1]}); }

} // namespace

LandmarkFrame mirror(const LandmarkFrame& frame, bool enabled) {
    if (!enabled) return frame;
    LandmarkFrame out = frame;
    for (auto& obs : out.hands) {
        obs.index_tip = reflect(obs.index_tip);
        obs.thumb_tip = reflect(obs.thumb_tip);
        obs.palm_centroid = reflect(obs.palm_centroid);
    }
    return out;
}

IngestResult LandmarkIngest::ingest(const RawFrame& raw) {
    IngestResult result;
    if (last_t_ && raw.t_ms < *last_t_) {
        result.status = IngestStatus::NonMonotonicTimestamp;
        result.detail = "t_ms " + std::to_string(raw.t_ms) + " < last accepted " + std::to_string(*last_t_);
        return result;
    }

    std::array<std::optional<HandObservation>, 2> slots;
    for (const auto& rh : raw.hands) {
        auto hand = parse_hand(rh.handedness);
        if (!hand) {
            result.status = IngestStatus::Malformed;
            result.detail = "unknown handedness '" + rh.handedness + "'";
            return result;
        }
        if (!finite(rh.index) || !finite(rh.thumb) || !finite(rh.palm) || !std::isfinite(rh.conf)) {
            result.status = IngestStatus::Malformed;
            result.detail = "non-finite landmark value";
            return result;
        }
        const double conf = std::clamp(rh.conf, 0.0, 1.0);
        if (conf < cfg_.confidence_threshold) continue;

        HandObservation obs{*hand, to_point(rh.index), to_point(rh.thumb), to_point(rh.palm), conf};
        auto& slot = slots[index_of(*hand)];
        if (!slot || obs.confidence > slot->confidence) slot = obs;
    }

    result.frame.t_ms = raw.t_ms;
    for (auto& slot : slots) {
        if (slot) result.frame.hands.push_back(*slot);
    }
    result.frame = mirror(result.frame, cfg_.mirror);
    last_t_ = raw.t_ms;
    return result;
}

std::optional<RawFrame> FrameMailbox::offer(RawFrame frame) {
    auto dropped = slot_.push(std::move(frame));
    if (dropped) ++dropped_;
    return dropped;
}

std::optional<RawFrame> FrameMailbox::begin() {
    if (busy_) return std::nullopt;
    auto next = slot_.try_pop();
    if (next) busy_ = true;
    return next;
}

void FrameMailbox::finish() { busy_ = false; }

} // namespace chirono
