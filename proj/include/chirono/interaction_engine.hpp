#pragma once

#include "chirono/chart_model.hpp"
#include "chirono/gesture_runtime.hpp"
#include "chirono/render_state.hpp"
#include "chirono/scene_manager.hpp"

#include <array>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace chirono {

struct EngineConfig {
    Hand dominant_hand = Hand::Right;
    std::int64_t pairing_window_ms = 500;
    double pan_fraction = 0.5;
    double min_zoom_span = 0.02;   // fraction of the full x extent
    double gradient_radius = 0.25; // fraction of the overlay diagonal
    std::int64_t zoom_duration_ms = 500;
};

struct ElementRef {
    std::string series;
    std::optional<std::size_t> index;

    friend bool operator==(const ElementRef&, const ElementRef&) = default;
};

/// Cloneable element (area band, bar, wedge) under p, topmost first.
std::optional<ElementRef> element_at(const ResolvedOverlay& overlay, Point2 p, const std::set<std::string>& hidden);

/// Visible domain a bimanual bottom-margin pinch zooms to: the interval
/// region holding both pinch values, else their span. Empty when the span
/// is under min_span of the full extent.
std::optional<Domain> zoom_in_target(const ResolvedOverlay& overlay, double v1, double v2, double min_span);

/// Shift of the visible domain by fraction of its span toward direction
/// (-1 earlier, +1 later), clamped to the full extent.
Domain pan_target(Domain visible, Domain full, int direction, double fraction);

/// Elementwise product over the x keys target shares with source.
std::vector<SeriesPoint> multiply_series(const std::vector<SeriesPoint>& source,
                                         const std::vector<SeriesPoint>& target);

/// Per-x sum of the non-hidden series.
std::vector<SeriesPoint> aggregate_totals(const ResolvedOverlay& overlay, const std::set<std::string>& hidden);

/**
 * Applies gesture events to the active scene.
 *
 * Persistent effects (clones, zoom and pan, revealed bands, value
 * transforms, aggregate bands) change only on events. Pointing, margin and
 * palm highlights are derived from the current pointer positions whenever
 * render() runs, so they vanish as soon as the matching Leave arrives.
 */
class InteractionEngine {
public:
    explicit InteractionEngine(std::shared_ptr<const Deck> deck, EngineConfig cfg = {});

    /// Cancels in-flight interactions and resets per-scene state. With a
    /// plan, interactions stay locked until the transition ends.
    void enter_scene(std::size_t index, std::int64_t t_ms, std::optional<TransitionPlan> plan);

    /// Advances the virtual clock; expires finished transitions.
    void tick(std::int64_t t_ms);

    void apply(const GestureEvent& ev);
    void apply(std::span<const GestureEvent> events);

    void update_markers(const LandmarkFrame& frame, const GestureRuntime& runtime);

    [[nodiscard]] RenderState render() const;

    [[nodiscard]] const Deck& deck() const { return *deck_; }
    [[nodiscard]] const ResolvedScene& scene() const { return scene_; }
    [[nodiscard]] std::size_t scene_index() const { return scene_index_; }
    [[nodiscard]] bool locked() const { return transition_.has_value(); }
    [[nodiscard]] const std::vector<CloneState>& clones() const { return clones_; }
    [[nodiscard]] const std::set<std::string>& hidden(std::string_view overlay_id) const;
    [[nodiscard]] std::optional<Domain> visible_domain(std::string_view overlay_id) const;
    [[nodiscard]] const EngineConfig& config() const { return cfg_; }
    void set_dominant(Hand h) { cfg_.dominant_hand = h; }

private:
    struct OverlayRuntime {
        std::set<std::string> hidden;
        std::uint64_t version = 0;
        std::array<bool, 2> aggregate_holders{false, false};
        std::map<std::string, std::vector<SeriesPoint>> overrides;

        [[nodiscard]] bool aggregating() const { return aggregate_holders[0] || aggregate_holders[1]; }
    };

    struct HandInput {
        bool pointing = false;
        Point2 index;
        bool palm = false;
        Point2 palm_pos;
        bool pinching = false;
        bool consumed = false; // pinch already recognized (or locked out)
        Point2 pinch_origin;
        Point2 pinch_pos;
        std::int64_t pinch_start_ms = 0;
        Region pinch_region;
        std::optional<int> clone;
    };

    void on_pinch_start(const GestureEvent& ev);
    void on_pinch_move(const GestureEvent& ev);
    void on_pinch_end(const GestureEvent& ev);
    bool try_bimanual(int overlay_index, Hand first, Hand second);

    void zoom_in(int oi, Point2 a, Point2 b, std::int64_t t);
    void zoom_out(int oi, std::int64_t t);
    void pan(int oi, int direction, std::int64_t t);
    void set_domain(int oi, Domain target, std::int64_t t);
    bool reveal(int oi, Point2 p);
    void grab(int oi, Hand h, Point2 p);
    void release(Hand h, Point2 p);
    void destroy_clone(int clone_id);

    [[nodiscard]] std::array<Hand, 2> hand_order() const;
    void derive_pointing(RenderState& rs) const;
    void derive_palm(RenderState& rs) const;
    [[nodiscard]] std::optional<IndexHighlight> index_highlight(int oi, double value, double screen_x, Hand h,
                                                                bool linked,
                                                                const std::optional<std::string>& filter) const;

    std::shared_ptr<const Deck> deck_;
    EngineConfig cfg_;
    std::size_t scene_index_ = 0;
    ResolvedScene scene_;
    std::vector<OverlayRuntime> runtime_;
    std::array<HandInput, 2> hands_{};
    std::vector<CloneState> clones_;
    int next_clone_id_ = 1;
    std::vector<Marker> markers_;
    std::optional<SceneTransitionState> transition_;
    std::vector<DomainTransition> domain_transitions_;
    std::int64_t now_ms_ = 0;
};

} // namespace chirono
