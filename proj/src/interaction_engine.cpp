#include "chirono/interaction_engine.hpp"
#include "chirono/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace chirono {

// ---------------------------------------------------------------------------
// Free operations

std::optional<ElementRef> element_at(const ResolvedOverlay& o, Point2 p, const std::set<std::string>& hidden) {
    switch (o.kind()) {
    case ChartKind::Area:
    case ChartKind::StackedArea: {
        if (!o.x.continuous() || !o.plot.contains(p)) return std::nullopt;
        const double v = o.invert_x(p.x);
        const double y = o.invert_y(p.y);
        for (auto it = o.series.rbegin(); it != o.series.rend(); ++it) {
            if (hidden.contains(it->id)) continue;
            auto ext = band_extent(o, it->id, v, hidden);
            if (ext && y >= ext->first && y <= ext->second) return ElementRef{it->id, std::nullopt};
        }
        return std::nullopt;
    }
    case ChartKind::Bar:
    case ChartKind::StackedBar: {
        const auto marks = bar_marks(o, hidden);
        for (auto it = marks.rbegin(); it != marks.rend(); ++it) {
            if (it->rect.contains(p)) return ElementRef{it->series, it->index};
        }
        return std::nullopt;
    }
    case ChartKind::Pie: {
        const Region r = classify_in_overlay(o, p);
        if (r.tag != RegionTag::PieWedge) return std::nullopt;
        for (std::size_t i = 0; i < o.wedges.size(); ++i) {
            if (o.wedges[i].category == r.category) return ElementRef{r.category, i};
        }
        return std::nullopt;
    }
    case ChartKind::Line:
    case ChartKind::Legend:
        break;
    }
    return std::nullopt;
}

std::optional<Domain> zoom_in_target(const ResolvedOverlay& o, double v1, double v2, double min_span) {
    const double lo = std::min(v1, v2);
    const double hi = std::max(v1, v2);
    Domain target{lo, hi};
    for (const auto& region : o.spec->chart.interval_regions) {
        if (region.lo <= lo && hi <= region.hi) {
            target = {std::max(region.lo, o.full_x.first), std::min(region.hi, o.full_x.second)};
            break;
        }
    }
    const double full_span = o.full_x.second - o.full_x.first;
    if (target.second - target.first < min_span * full_span) return std::nullopt;
    return target;
}

Domain pan_target(Domain visible, Domain full, int direction, double fraction) {
    const double span = visible.second - visible.first;
    const double lo = visible.first + static_cast<double>(direction) * fraction * span;
    if (lo <= full.first) return {full.first, std::min(full.first + span, full.second)};
    if (lo + span >= full.second) return {std::max(full.second - span, full.first), full.second};
    return {lo, lo + span};
}

std::vector<SeriesPoint> multiply_series(const std::vector<SeriesPoint>& source, const std::vector<SeriesPoint>& target) {
    std::vector<SeriesPoint> out = target;
    for (auto& p : out) {
        auto it = std::lower_bound(source.begin(), source.end(), p.x,
                                   [](const SeriesPoint& s, double x) { return s.x < x; });
        if (it != source.end() && it->x == p.x) p.y = it->y * p.y;
    }
    return out;
}

std::vector<SeriesPoint> aggregate_totals(const ResolvedOverlay& o, const std::set<std::string>& hidden) {
    std::map<double, double> sums;
    for (const auto& s : o.series) {
        if (hidden.contains(s.id)) continue;
        for (const auto& p : s.points) sums[p.x] += p.y;
    }
    std::vector<SeriesPoint> out;
    out.reserve(sums.size());
    for (const auto& [x, y] : sums) out.push_back({x, y});
    return out;
}

// ---------------------------------------------------------------------------
// Engine

InteractionEngine::InteractionEngine(std::shared_ptr<const Deck> deck, EngineConfig cfg)
    : deck_(std::move(deck)), cfg_(cfg) {
    enter_scene(0, 0, std::nullopt);
}

void InteractionEngine::enter_scene(std::size_t index, std::int64_t t_ms, std::optional<TransitionPlan> plan) {
    const std::string from_id = scene_.spec ? scene_.spec->id : std::string{};
    scene_index_ = std::min(index, deck_->scenes.size() - 1);
    const SceneSpec& spec = deck_->scenes[scene_index_];
    scene_ = resolve_scene(spec, *deck_);
    runtime_.assign(scene_.overlays.size(), {});
    for (std::size_t i = 0; i < scene_.overlays.size(); ++i) runtime_[i].hidden = spec.overlays[i].chart.hidden_series;

    clones_.clear();
    for (auto& h : hands_) {
        h.clone.reset();
        h.pinch_region = {};
        if (h.pinching) h.consumed = true;
    }
    domain_transitions_.clear();
    transition_.reset();
    now_ms_ = std::max(now_ms_, t_ms);
    if (plan && plan->duration_ms > 0) {
        transition_ = SceneTransitionState{from_id, spec.id, t_ms, std::move(*plan)};
    }
}

void InteractionEngine::tick(std::int64_t t_ms) {
    now_ms_ = t_ms;
    if (transition_ && t_ms >= transition_->start_ms + transition_->plan.duration_ms) transition_.reset();
    std::erase_if(domain_transitions_, [&](const DomainTransition& d) { return t_ms >= d.start_ms + d.duration_ms; });
}

void InteractionEngine::apply(std::span<const GestureEvent> events) {
    for (const auto& ev : events) apply(ev);
}

void InteractionEngine::apply(const GestureEvent& ev) {
    HandInput& in = hands_[index_of(ev.hand)];
    switch (ev.kind) {
    case EventKind::PointEnter:
    case EventKind::PointMove:
        in.pointing = true;
        in.index = ev.position;
        break;
    case EventKind::PointLeave:
        in.pointing = false;
        break;
    case EventKind::PalmEnter:
    case EventKind::PalmMove:
        in.palm = true;
        in.palm_pos = ev.position;
        break;
    case EventKind::PalmLeave:
        in.palm = false;
        break;
    case EventKind::PinchStart: on_pinch_start(ev); break;
    case EventKind::PinchMove: on_pinch_move(ev); break;
    case EventKind::PinchEnd: on_pinch_end(ev); break;
    }
}

void InteractionEngine::update_markers(const LandmarkFrame& frame, const GestureRuntime& runtime) {
    markers_.clear();
    for (Hand h : kHands) {
        const HandObservation* obs = frame.find(h);
        if (!obs || runtime.state(h).point.phase != Phase::Active) continue;
        markers_.push_back({h, obs->index_tip, obs->thumb_tip, runtime.pinching(h)});
    }
}

void InteractionEngine::on_pinch_start(const GestureEvent& ev) {
    HandInput& me = hands_[index_of(ev.hand)];
    me.pinching = true;
    me.consumed = false;
    me.pinch_origin = ev.position;
    me.pinch_pos = ev.position;
    me.pinch_start_ms = ev.t_ms;
    me.pinch_region = {};
    if (locked()) {
        me.consumed = true;
        return;
    }
    const Region r = classify_point(scene_, ev.position);
    me.pinch_region = r;
    if (r.tag == RegionTag::Outside) return;

    const Hand other_hand = opposite(ev.hand);
    const HandInput& other = hands_[index_of(other_hand)];
    if (other.pinching && !other.consumed && other.pinch_region.overlay_index == r.overlay_index &&
        ev.t_ms - other.pinch_start_ms <= cfg_.pairing_window_ms) {
        if (try_bimanual(r.overlay_index, other_hand, ev.hand)) return;
    }

    switch (r.tag) {
    case RegionTag::BottomLeftCorner:
        pan(r.overlay_index, -1, ev.t_ms);
        me.consumed = true;
        break;
    case RegionTag::BottomRightCorner:
        pan(r.overlay_index, +1, ev.t_ms);
        me.consumed = true;
        break;
    case RegionTag::Interior:
    case RegionTag::PieWedge:
        if (reveal(r.overlay_index, ev.position)) {
            me.consumed = true;
        } else {
            grab(r.overlay_index, ev.hand, ev.position);
        }
        break;
    default:
        break;
    }
}

bool InteractionEngine::try_bimanual(int oi, Hand first, Hand second) {
    HandInput& a = hands_[index_of(first)];
    HandInput& b = hands_[index_of(second)];
    const RegionTag ta = a.pinch_region.tag;
    const RegionTag tb = b.pinch_region.tag;
    const ResolvedOverlay& o = scene_.overlays[static_cast<std::size_t>(oi)];
    const std::int64_t t = b.pinch_start_ms;

    bool recognized = false;
    if (ta == RegionTag::BottomMargin && tb == RegionTag::BottomMargin && o.rectilinear() && o.x.continuous()) {
        zoom_in(oi, a.pinch_origin, b.pinch_origin, t);
        recognized = true;
    } else if ((ta == RegionTag::TopMargin && tb == RegionTag::TopMargin) ||
               (ta == RegionTag::LeftMargin && tb == RegionTag::RightMargin) ||
               (ta == RegionTag::RightMargin && tb == RegionTag::LeftMargin)) {
        if (o.rectilinear() && o.x.continuous()) {
            zoom_out(oi, t);
            recognized = true;
        }
    } else if (ta == RegionTag::Interior && tb == RegionTag::Interior && o.kind() == ChartKind::StackedArea) {
        if (a.clone) destroy_clone(*a.clone);
        auto& rt = runtime_[static_cast<std::size_t>(oi)];
        rt.aggregate_holders[index_of(first)] = true;
        rt.aggregate_holders[index_of(second)] = true;
        recognized = true;
    }
    if (recognized) {
        a.consumed = true;
        b.consumed = true;
    }
    return recognized;
}

void InteractionEngine::set_domain(int oi, Domain target, std::int64_t t) {
    auto& o = scene_.overlays[static_cast<std::size_t>(oi)];
    const Domain from = o.visible_x();
    if (from == target) return;
    std::erase_if(domain_transitions_, [&](const DomainTransition& d) { return d.overlay == o.id(); });
    domain_transitions_.push_back({o.id(), from, target, t, cfg_.zoom_duration_ms});
    o.set_visible_x(target);
    ++runtime_[static_cast<std::size_t>(oi)].version;
}

void InteractionEngine::zoom_in(int oi, Point2 a, Point2 b, std::int64_t t) {
    const auto& o = scene_.overlays[static_cast<std::size_t>(oi)];
    auto target = zoom_in_target(o, o.invert_x(a.x), o.invert_x(b.x), cfg_.min_zoom_span);
    if (target) set_domain(oi, *target, t); // else SpanTooSmall: ignored
}

void InteractionEngine::zoom_out(int oi, std::int64_t t) {
    const auto& o = scene_.overlays[static_cast<std::size_t>(oi)];
    if (o.visible_x() == o.full_x) return; // AlreadyFullExtent
    set_domain(oi, o.full_x, t);
}

void InteractionEngine::pan(int oi, int direction, std::int64_t t) {
    const auto& o = scene_.overlays[static_cast<std::size_t>(oi)];
    if (!o.rectilinear() || !o.x.continuous() || o.visible_x() == o.full_x) return;
    const Domain next = pan_target(o.visible_x(), o.full_x, direction, cfg_.pan_fraction);
    if (next == o.visible_x()) return; // AlreadyAtExtent
    set_domain(oi, next, t);
}

bool InteractionEngine::reveal(int oi, Point2 p) {
    const auto& o = scene_.overlays[static_cast<std::size_t>(oi)];
    auto& rt = runtime_[static_cast<std::size_t>(oi)];
    if (rt.hidden.empty() || !o.x.continuous() || !o.plot.contains(p)) return false;
    if (o.kind() != ChartKind::Area && o.kind() != ChartKind::StackedArea) return false;
    const double v = o.invert_x(p.x);
    const double y = o.invert_y(p.y);
    for (const auto& s : o.series) {
        if (!rt.hidden.contains(s.id)) continue;
        std::set<std::string> others = rt.hidden;
        others.erase(s.id);
        auto ext = band_extent(o, s.id, v, others);
        if (ext && y >= ext->first && y <= ext->second) {
            rt.hidden.erase(s.id);
            return true;
        }
    }
    return false;
}

void InteractionEngine::grab(int oi, Hand h, Point2 p) {
    HandInput& me = hands_[index_of(h)];
    if (clones_.size() >= 2 || me.clone) return;
    const auto& o = scene_.overlays[static_cast<std::size_t>(oi)];
    auto el = element_at(o, p, runtime_[static_cast<std::size_t>(oi)].hidden);
    if (!el) return; // NoElementAtPinch: falls through silently

    CloneKind kind = CloneKind::ComparePayload;
    for (const auto& b : scene_.spec->bindings) {
        if (b.source == o.id()) kind = CloneKind::TransformPayload;
    }
    const int id = next_clone_id_++;
    clones_.push_back({id, o.id(), el->series, el->index, h, p, kind});
    me.clone = id;
}

void InteractionEngine::destroy_clone(int clone_id) {
    std::erase_if(clones_, [&](const CloneState& c) { return c.id == clone_id; });
    for (auto& h : hands_) {
        if (h.clone == clone_id) h.clone.reset();
    }
}

void InteractionEngine::release(Hand h, Point2 p) {
    HandInput& me = hands_[index_of(h)];
    auto it = std::find_if(clones_.begin(), clones_.end(), [&](const CloneState& c) { return c.id == *me.clone; });
    if (it == clones_.end()) {
        me.clone.reset();
        return;
    }
    const CloneState clone = *it;
    destroy_clone(clone.id);

    const Region target = classify_point(scene_, p);
    if (target.overlay_index < 0 || target.overlay_id == clone.overlay) return;
    const bool bound = std::any_of(scene_.spec->bindings.begin(), scene_.spec->bindings.end(), [&](const MultiplyBinding& b) {
        return b.source == clone.overlay && b.target == target.overlay_id;
    });
    if (!bound) return;

    const int si = scene_.find(clone.overlay);
    const auto& src = scene_.overlays[static_cast<std::size_t>(si)];
    auto& dst = scene_.overlays[static_cast<std::size_t>(target.overlay_index)];
    const auto& src_domain = src.spec->chart.shared_domain_id;
    if (!src_domain || src_domain != dst.spec->chart.shared_domain_id) return; // DomainMismatch
    const Series* source_series = src.find_series(clone.series);
    if (!source_series) return;

    auto& rt = runtime_[static_cast<std::size_t>(target.overlay_index)];
    std::vector<Series> next = dst.series;
    for (auto& s : next) {
        s.points = multiply_series(source_series->points, s.points);
        rt.overrides[s.id] = s.points;
    }
    dst.set_series(std::move(next));
    ++rt.version;
}

void InteractionEngine::on_pinch_move(const GestureEvent& ev) {
    HandInput& me = hands_[index_of(ev.hand)];
    me.pinch_pos = ev.position;
    if (me.clone) {
        for (auto& c : clones_) {
            if (c.id == *me.clone) c.position = ev.position;
        }
    }
    for (std::size_t i = 0; i < runtime_.size(); ++i) {
        auto& holder = runtime_[i].aggregate_holders[index_of(ev.hand)];
        if (holder && !scene_.overlays[i].frame.contains(ev.position)) holder = false;
    }
}

void InteractionEngine::on_pinch_end(const GestureEvent& ev) {
    HandInput& me = hands_[index_of(ev.hand)];
    if (me.clone) release(ev.hand, ev.position);
    for (auto& rt : runtime_) rt.aggregate_holders[index_of(ev.hand)] = false;
    me.pinching = false;
    me.consumed = false;
    me.pinch_region = {};
}

const std::set<std::string>& InteractionEngine::hidden(std::string_view overlay_id) const {
    static const std::set<std::string> kEmpty;
    const int i = scene_.find(overlay_id);
    return i < 0 ? kEmpty : runtime_[static_cast<std::size_t>(i)].hidden;
}

std::optional<Domain> InteractionEngine::visible_domain(std::string_view overlay_id) const {
    const int i = scene_.find(overlay_id);
    if (i < 0) return std::nullopt;
    const auto& o = scene_.overlays[static_cast<std::size_t>(i)];
    if (!o.rectilinear() || !o.x.continuous()) return std::nullopt;
    return o.visible_x();
}

std::array<Hand, 2> InteractionEngine::hand_order() const {
    return {cfg_.dominant_hand, opposite(cfg_.dominant_hand)};
}

// ---------------------------------------------------------------------------
// Rendering

RenderState InteractionEngine::render() const {
    RenderState rs;
    rs.scene_index = scene_index_;
    rs.scene_id = scene_.spec->id;
    rs.background = scene_.spec->background;
    for (std::size_t i = 0; i < scene_.overlays.size(); ++i) {
        const auto& o = scene_.overlays[i];
        const auto& rt = runtime_[i];
        OverlayState st;
        st.visible = o.spec->visible;
        st.geometry_version = rt.version;
        if (o.rectilinear() && o.x.continuous()) {
            st.x_full = o.full_x;
            st.x_visible = o.visible_x();
        }
        st.y = o.y_domain;
        st.hidden_series = rt.hidden;
        st.data_overrides = rt.overrides;
        if (rt.aggregating()) {
            AggregateBand band;
            for (Hand h : kHands) {
                if (rt.aggregate_holders[index_of(h)]) band.holders.push_back(h);
            }
            band.totals = aggregate_totals(o, rt.hidden);
            st.aggregate = std::move(band);
        }
        for (const auto& c : clones_) {
            if (c.overlay == o.id()) st.outlined.push_back(c.element_key());
        }
        std::sort(st.outlined.begin(), st.outlined.end());
        st.outlined.erase(std::unique(st.outlined.begin(), st.outlined.end()), st.outlined.end());
        rs.overlays[o.id()] = std::move(st);
    }
    rs.clones = clones_;
    rs.markers = markers_;
    rs.transition = transition_;
    rs.domain_transitions = domain_transitions_;
    if (!locked()) {
        derive_pointing(rs);
        derive_palm(rs);
    }
    return rs;
}

std::optional<IndexHighlight> InteractionEngine::index_highlight(int oi, double value, double screen_x, Hand h,
                                                                 bool linked,
                                                                 const std::optional<std::string>& filter) const {
    const auto& o = scene_.overlays[static_cast<std::size_t>(oi)];
    const auto& hidden = runtime_[static_cast<std::size_t>(oi)].hidden;
    IndexHighlight hl;
    hl.hand = h;
    hl.linked = linked;
    hl.value = value;
    if (o.x.continuous()) {
        const auto keys = x_keys(o, hidden);
        if (keys.empty()) return std::nullopt;
        hl.index = nearest_key(keys, value);
        hl.x = keys[hl.index];
    } else {
        if (o.x.bands.empty()) return std::nullopt;
        hl.index = o.x.nearest_band(screen_x);
        hl.x = static_cast<double>(hl.index);
    }
    hl.screen_x = o.x.position(hl.x);

    const bool filter_applies = filter && o.find_series(*filter) != nullptr;
    for (const auto& s : o.series) {
        if (hidden.contains(s.id)) continue;
        if (filter_applies && s.id != *filter) continue;
        for (const auto& p : s.points) {
            if (p.x == hl.x) hl.labels.push_back({s.id, p.x, p.y});
        }
    }
    return hl;
}

void InteractionEngine::derive_pointing(RenderState& rs) const {
    struct Pointer {
        Hand hand;
        Region region;
        Point2 pos;
    };
    std::vector<Pointer> pointers; // dominant first
    for (Hand h : hand_order()) {
        const HandInput& in = hands_[index_of(h)];
        if (!in.pointing) continue;
        Region r = classify_point(scene_, in.index);
        if (r.tag != RegionTag::Outside) pointers.push_back({h, r, in.index});
    }
    auto state_of = [&](int oi) -> OverlayState& { return rs.overlays.at(scene_.overlays[static_cast<std::size_t>(oi)].id()); };

    // Category linkage from legend swatches and pie wedges.
    std::map<std::string, std::string> category_filter; // category domain -> category
    for (const auto& ptr : pointers) {
        if (ptr.region.tag != RegionTag::LegendSwatch && ptr.region.tag != RegionTag::PieWedge) continue;
        const auto& o = scene_.overlays[static_cast<std::size_t>(ptr.region.overlay_index)];
        OverlayState& st = state_of(ptr.region.overlay_index);
        if (ptr.region.tag == RegionTag::PieWedge && !st.wedge) st.wedge = ptr.region.category;
        const auto& domain = o.spec->chart.category_domain_id;
        if (domain) {
            category_filter.emplace(*domain, ptr.region.category);
        } else if (st.emphasized.empty()) {
            st.emphasized = {ptr.region.category};
        }
    }
    for (const auto& [domain, category] : category_filter) {
        for (std::size_t i = 0; i < scene_.overlays.size(); ++i) {
            const auto& o = scene_.overlays[i];
            if (!o.spec->visible || o.spec->chart.category_domain_id != domain) continue;
            OverlayState& st = state_of(static_cast<int>(i));
            std::set<std::string> keys;
            for (const auto& s : o.series) keys.insert(s.id);
            for (const auto& b : o.x.bands) keys.insert(b);
            for (const auto& sw : o.swatches) keys.insert(sw.category);
            st.emphasized = {category};
            keys.erase(category);
            st.deemphasized = std::move(keys);
            if (o.kind() == ChartKind::Pie) st.wedge = category;
        }
    }
    auto filter_for = [&](const ResolvedOverlay& o) -> std::optional<std::string> {
        const auto& domain = o.spec->chart.category_domain_id;
        if (!domain) return std::nullopt;
        auto it = category_filter.find(*domain);
        if (it == category_filter.end()) return std::nullopt;
        return it->second;
    };

    // Direct pointing in plot interiors, dominant hand first.
    std::map<int, const Pointer*> direct;
    for (const auto& ptr : pointers) {
        const auto& o = scene_.overlays[static_cast<std::size_t>(ptr.region.overlay_index)];
        if (ptr.region.tag != RegionTag::Interior || !o.rectilinear()) continue;
        direct.emplace(ptr.region.overlay_index, &ptr);
    }
    std::map<std::string, std::pair<Hand, double>> domain_driver; // shared domain -> (hand, value)
    for (const auto& ptr : pointers) {
        auto it = direct.find(ptr.region.overlay_index);
        if (it == direct.end() || it->second != &ptr) continue;
        const int oi = ptr.region.overlay_index;
        const auto& o = scene_.overlays[static_cast<std::size_t>(oi)];
        const double value = o.x.continuous() ? o.invert_x(ptr.pos.x)
                                              : static_cast<double>(o.x.nearest_band(ptr.pos.x));
        state_of(oi).highlight = index_highlight(oi, value, ptr.pos.x, ptr.hand, false, filter_for(o));
        if (o.x.continuous() && o.spec->chart.shared_domain_id) {
            domain_driver.emplace(*o.spec->chart.shared_domain_id, std::pair{ptr.hand, value});
        }
    }
    for (const auto& [domain, driver] : domain_driver) {
        for (std::size_t i = 0; i < scene_.overlays.size(); ++i) {
            const auto& o = scene_.overlays[i];
            const int oi = static_cast<int>(i);
            if (direct.contains(oi) || !o.spec->visible || !o.rectilinear() || !o.x.continuous()) continue;
            if (o.spec->chart.shared_domain_id != domain) continue;
            state_of(oi).highlight = index_highlight(oi, driver.second, o.x.position(driver.second), driver.first,
                                                     true, filter_for(o));
        }
    }

    // Horizontal reference lines from the side margins.
    for (Hand h : kHands) {
        for (const auto& ptr : pointers) {
            if (ptr.hand != h) continue;
            if (ptr.region.tag != RegionTag::LeftMargin && ptr.region.tag != RegionTag::RightMargin) continue;
            const auto& o = scene_.overlays[static_cast<std::size_t>(ptr.region.overlay_index)];
            if (!o.rectilinear()) continue;
            state_of(ptr.region.overlay_index).margin_refs.push_back({h, ptr.pos.y, o.invert_y(ptr.pos.y)});
        }
    }
}

void InteractionEngine::derive_palm(RenderState& rs) const {
    for (Hand h : hand_order()) {
        const HandInput& in = hands_[index_of(h)];
        if (!in.palm) continue;
        const Region r = classify_point(scene_, in.palm_pos);
        if (r.tag == RegionTag::Outside) continue;
        const auto& o = scene_.overlays[static_cast<std::size_t>(r.overlay_index)];
        OverlayState& st = rs.overlays.at(o.id());
        if (st.gradient) continue;
        st.gradient = PalmGradient{h, in.palm_pos, cfg_.gradient_radius * std::hypot(o.frame.width, o.frame.height)};
    }
}

} // namespace chirono
