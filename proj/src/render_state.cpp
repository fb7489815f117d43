#include "chirono/render_state.hpp"

namespace chirono {

using nlohmann::json;

std::string CloneState::element_key() const {
    return index ? series + "#" + std::to_string(*index) : series;
}

namespace {

json pt(Point2 p) { return json::array({p.x, p.y}); }
json dom(const Domain& d) { return json::array({d.first, d.second}); }
json hand(Hand h) { return std::string(to_string(h)); }

json points(const std::vector<SeriesPoint>& ps) {
    json a = json::array();
    for (const auto& p : ps) a.push_back(json::array({p.x, p.y}));
    return a;
}

json rect(const Rect& r) { return json::array({r.x, r.y, r.width, r.height}); }

json overlay_json(const OverlayState& o) {
    json j;
    j["visible"] = o.visible;
    j["geometry_version"] = o.geometry_version;
    j["x_full"] = o.x_full ? dom(*o.x_full) : json(nullptr);
    j["x_visible"] = o.x_visible ? dom(*o.x_visible) : json(nullptr);
    j["y_domain"] = dom(o.y);

    if (o.highlight) {
        const auto& h = *o.highlight;
        json labels = json::array();
        for (const auto& l : h.labels) labels.push_back({{"series", l.series}, {"x", l.x}, {"y", l.y}});
        j["highlight"] = {{"hand", hand(h.hand)}, {"linked", h.linked}, {"value", h.value}, {"index", h.index},
                          {"x", h.x},          {"screen_x", h.screen_x}, {"labels", labels}};
    } else {
        j["highlight"] = nullptr;
    }
    json refs = json::array();
    for (const auto& r : o.margin_refs) refs.push_back({{"hand", hand(r.hand)}, {"screen_y", r.screen_y}, {"value", r.value}});
    j["margin_refs"] = refs;
    j["emphasized"] = o.emphasized;
    j["deemphasized"] = o.deemphasized;
    j["wedge"] = o.wedge ? json(*o.wedge) : json(nullptr);
    j["outlined"] = o.outlined;
    if (o.gradient) {
        j["gradient"] = {{"hand", hand(o.gradient->hand)}, {"center", pt(o.gradient->center)}, {"radius", o.gradient->radius}};
    } else {
        j["gradient"] = nullptr;
    }
    j["hidden_series"] = o.hidden_series;
    if (o.aggregate) {
        json holders = json::array();
        for (Hand h : o.aggregate->holders) holders.push_back(hand(h));
        j["aggregate"] = {{"holders", holders}, {"totals", points(o.aggregate->totals)}};
    } else {
        j["aggregate"] = nullptr;
    }
    json overrides = json::object();
    for (const auto& [sid, ps] : o.data_overrides) overrides[sid] = points(ps);
    j["data_overrides"] = overrides;
    return j;
}

json motion(const OverlayMotion& m) {
    return {{"overlay", m.overlay_id}, {"style", std::string(to_string(m.style))}, {"direction", std::string(to_string(m.direction))}};
}

} // namespace

json to_json(const TransitionPlan& plan) {
    json exits = json::array();
    json enters = json::array();
    json morphs = json::array();
    for (const auto& m : plan.exits) exits.push_back(motion(m));
    for (const auto& m : plan.enters) enters.push_back(motion(m));
    for (const auto& m : plan.morphs) morphs.push_back({{"overlay", m.overlay_id}, {"from", rect(m.from)}, {"to", rect(m.to)}});
    return {{"exits", exits}, {"enters", enters}, {"morphs", morphs}, {"duration_ms", plan.duration_ms}};
}

json to_json(const RenderState& s) {
    json j;
    j["scene_index"] = s.scene_index;
    j["scene_id"] = s.scene_id;
    j["background"] = {{"darken", s.background.darken}, {"grayscale", s.background.grayscale}};
    json overlays = json::object();
    for (const auto& [oid, o] : s.overlays) overlays[oid] = overlay_json(o);
    j["overlays"] = overlays;

    json clones = json::array();
    for (const auto& c : s.clones) {
        clones.push_back({{"id", c.id},
                          {"overlay", c.overlay},
                          {"series", c.series},
                          {"index", c.index ? json(*c.index) : json(nullptr)},
                          {"tether", hand(c.tether)},
                          {"position", pt(c.position)},
                          {"kind", c.kind == CloneKind::TransformPayload ? "TransformPayload" : "ComparePayload"}});
    }
    j["clones"] = clones;

    json markers = json::array();
    for (const auto& m : s.markers) {
        markers.push_back({{"hand", hand(m.hand)}, {"index", pt(m.index)}, {"thumb", pt(m.thumb)}, {"pinching", m.pinching}});
    }
    j["markers"] = markers;

    if (s.transition) {
        j["transition"] = {{"from_scene", s.transition->from_scene},
                           {"to_scene", s.transition->to_scene},
                           {"start_ms", s.transition->start_ms},
                           {"plan", to_json(s.transition->plan)}};
    } else {
        j["transition"] = nullptr;
    }
    json dts = json::array();
    for (const auto& d : s.domain_transitions) {
        dts.push_back({{"overlay", d.overlay}, {"from", dom(d.from)}, {"to", dom(d.to)},
                       {"start_ms", d.start_ms}, {"duration_ms", d.duration_ms}});
    }
    j["domain_transitions"] = dts;
    return j;
}

} // namespace chirono
