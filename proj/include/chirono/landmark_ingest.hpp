#pragma once

#include "chirono/geometry.hpp"
#include "chirono/mailbox.hpp"

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chirono {

struct HandObservation {
    Hand handedness = Hand::Right;
    Point2 index_tip;
    Point2 thumb_tip;
    Point2 palm_centroid;
    double confidence = 1.0;

    friend bool operator==(const HandObservation&, const HandObservation&) = default;
};

/// One validated observation: at most one hand per handedness, Right first.
struct LandmarkFrame {
    std::int64_t t_ms = 0;
    std::vector<HandObservation> hands;

    [[nodiscard]] const HandObservation* find(Hand h) const;

    friend bool operator==(const LandmarkFrame&, const LandmarkFrame&) = default;
};

/// Provider payload as it arrives on the wire or from a trace file.
struct RawHand {
    std::string handedness;
    std::array<double, 2> index{};
    std::array<double, 2> thumb{};
    std::array<double, 2> palm{};
    double conf = 0.0;

    friend bool operator==(const RawHand&, const RawHand&) = default;
};

struct RawFrame {
    std::int64_t t_ms = 0;
    std::vector<RawHand> hands;

    friend bool operator==(const RawFrame&, const RawFrame&) = default;
};

struct IngestConfig {
    double confidence_threshold = 0.5;
    bool mirror = false;
};

enum class IngestStatus { Accepted, NonMonotonicTimestamp, Malformed };

struct IngestResult {
    IngestStatus status = IngestStatus::Accepted;
    LandmarkFrame frame;
    std::string detail;

    [[nodiscard]] bool accepted() const { return status == IngestStatus::Accepted; }
};

/// x' = 1 - x on every point when enabled. An involution.
LandmarkFrame mirror(const LandmarkFrame& frame, bool enabled);

/**
 * Validates raw provider frames: clamps coordinates into the unit square,
 * drops hands under the confidence threshold, resolves duplicate handedness
 * and rejects timestamps that go backwards. Single writer; not thread-safe.
 */
class LandmarkIngest {
public:
    explicit LandmarkIngest(IngestConfig cfg = {}) : cfg_(cfg) {}

    IngestResult ingest(const RawFrame& raw);

    [[nodiscard]] std::optional<std::int64_t> last_accepted() const { return last_t_; }
    [[nodiscard]] const IngestConfig& config() const { return cfg_; }
    void set_config(IngestConfig cfg) { cfg_ = cfg; }

private:
    IngestConfig cfg_;
    std::optional<std::int64_t> last_t_;
};

/**
 * One-frame-in-flight contract. The consumer marks a frame as in flight with
 * begin(); frames offered meanwhile wait in a single slot and a newer offer
 * displaces (drops) the waiting one.
 */
class FrameMailbox {
public:
    /// Returns the frame dropped by this offer, if any.
    std::optional<RawFrame> offer(RawFrame frame);
    /// Takes the waiting frame if nothing is in flight.
    std::optional<RawFrame> begin();
    void finish();

    [[nodiscard]] bool busy() const { return busy_; }
    [[nodiscard]] std::size_t dropped() const { return dropped_.load(); }

private:
    LatestWinsQueue<RawFrame> slot_;
    bool busy_ = false; // consumer side only
    std::atomic<std::size_t> dropped_{0};
};

} // namespace chirono
