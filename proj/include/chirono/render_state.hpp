#pragma once

#include "chirono/chart_model.hpp"
#include "chirono/geometry.hpp"
#include "chirono/scene_manager.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace chirono {

struct ValueLabel {
    std::string series;
    double x = 0.0;
    double y = 0.0;
};

/// Snapped pointing highlight: vertical reference line, value labels and
/// emboldened strokes for the labelled series.
struct IndexHighlight {
    Hand hand = Hand::Right;
    bool linked = false; // propagated through a shared domain
    double value = 0.0;  // pointer position in domain units (band index for band scales)
    std::size_t index = 0;
    double x = 0.0;      // snapped key
    double screen_x = 0.0;
    std::vector<ValueLabel> labels;
};

struct MarginReference {
    Hand hand = Hand::Right;
    double screen_y = 0.0;
    double value = 0.0;
};

struct PalmGradient {
    Hand hand = Hand::Right;
    Point2 center;
    double radius = 0.0;
};

struct AggregateBand {
    std::vector<Hand> holders;
    std::vector<SeriesPoint> totals;
};

struct OverlayState {
    bool visible = true;
    std::uint64_t geometry_version = 0;
    std::optional<Domain> x_full;
    std::optional<Domain> x_visible;
    Domain y{0.0, 1.0};
    std::optional<IndexHighlight> highlight;
    std::vector<MarginReference> margin_refs;
    std::set<std::string> emphasized;
    std::set<std::string> deemphasized;
    std::optional<std::string> wedge;
    std::vector<std::string> outlined;
    std::optional<PalmGradient> gradient;
    std::set<std::string> hidden_series;
    std::optional<AggregateBand> aggregate;
    std::map<std::string, std::vector<SeriesPoint>> data_overrides;
};

enum class CloneKind : std::uint8_t { TransformPayload, ComparePayload };

struct CloneState {
    int id = 0;
    std::string overlay;
    std::string series;
    std::optional<std::size_t> index; // single mark; absent for a whole series
    Hand tether = Hand::Right;
    Point2 position;
    CloneKind kind = CloneKind::ComparePayload;

    [[nodiscard]] std::string element_key() const;
};

struct Marker {
    Hand hand = Hand::Right;
    Point2 index;
    Point2 thumb;
    bool pinching = false;
};

struct SceneTransitionState {
    std::string from_scene;
    std::string to_scene;
    std::int64_t start_ms = 0;
    TransitionPlan plan;
};

struct DomainTransition {
    std::string overlay;
    Domain from;
    Domain to;
    std::int64_t start_ms = 0;
    std::int64_t duration_ms = 0;
};

/// The single picture presenter and audience both see.
struct RenderState {
    std::size_t scene_index = 0;
    std::string scene_id;
    Background background;
    std::map<std::string, OverlayState> overlays;
    std::vector<CloneState> clones;
    std::vector<Marker> markers;
    std::optional<SceneTransitionState> transition;
    std::vector<DomainTransition> domain_transitions;
};

/// Canonical JSON: object keys sorted, arrays in deterministic order.
nlohmann::json to_json(const RenderState& state);
nlohmann::json to_json(const TransitionPlan& plan);

} // namespace chirono
