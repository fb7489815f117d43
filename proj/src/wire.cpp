#include "chirono/wire.hpp"
#include "chirono/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace chirono {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 3> kFamilyNames{"point", "palm", "pinch"};

[[noreturn]] void bad_config(const std::string& what) { throw Error(Errc::InvalidConfig, what); }

std::int64_t as_ms(const json& v, const std::string& key) {
    if (!v.is_number_integer()) bad_config(key + " must be an integer number of milliseconds");
    return v.get<std::int64_t>();
}

void read_durations(const json& v, std::array<std::int64_t, 3>& out, const std::string& key) {
    if (v.is_object()) {
        for (const auto& [name, ms] : v.items()) {
            std::size_t i = 0;
            while (i < kFamilyNames.size() && kFamilyNames[i] != name) ++i;
            if (i == kFamilyNames.size()) bad_config(key + ": unknown gesture family '" + name + "'");
            out[i] = as_ms(ms, key + "." + name);
        }
    } else {
        out.fill(as_ms(v, key));
    }
}

double as_real(const json& v, const std::string& key) {
    if (!v.is_number()) bad_config(key + " must be a number");
    return v.get<double>();
}

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::MalformedMessage, what); }

std::array<double, 2> read_xy(const json& v, const char* key) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        malformed(std::string("hand.") + key + " must be [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

std::string escape_token(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

void first_diff(const json& a, const json& b, const std::string& path, std::optional<std::string>& out) {
    if (out) return;
    if (a.type() != b.type()) {
        out = path;
        return;
    }
    if (a.is_object()) {
        for (const auto& [k, v] : a.items()) {
            if (!b.contains(k)) {
                out = path + "/" + escape_token(k);
                return;
            }
            first_diff(v, b.at(k), path + "/" + escape_token(k), out);
            if (out) return;
        }
        for (const auto& [k, v] : b.items()) {
            if (!a.contains(k)) {
                out = path + "/" + escape_token(k);
                return;
            }
        }
        return;
    }
    if (a.is_array()) {
        const std::size_t n = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            first_diff(a[i], b[i], path + "/" + std::to_string(i), out);
            if (out) return;
        }
        if (a.size() != b.size()) out = path + "/" + std::to_string(n);
        return;
    }
    if (a != b) out = path;
}

} // namespace

// ---------------------------------------------------------------------------
// Config

SessionConfig apply_config_patch(SessionConfig cfg, const json& patch) {
    if (!patch.is_object()) bad_config("config must be a JSON object");
    for (const auto& [key, v] : patch.items()) {
        if (key == "dwell_ms") {
            read_durations(v, cfg.gesture.dwell_ms, key);
        } else if (key == "timeout_ms") {
            read_durations(v, cfg.gesture.timeout_ms, key);
        } else if (key == "pinch_on_dist") {
            cfg.gesture.pinch_on_dist = as_real(v, key);
        } else if (key == "pinch_off_dist") {
            cfg.gesture.pinch_off_dist = as_real(v, key);
        } else if (key == "dominant_hand") {
            auto h = v.is_string() ? parse_hand(v.get<std::string>()) : std::nullopt;
            if (!h) bad_config("dominant_hand must be \"Right\" or \"Left\"");
            cfg.gesture.dominant_hand = *h;
        } else if (key == "confidence_threshold") {
            const double c = as_real(v, key);
            if (c < 0.0 || c > 1.0) bad_config("confidence_threshold outside [0, 1]");
            cfg.ingest.confidence_threshold = c;
        } else if (key == "mirror") {
            if (!v.is_boolean()) bad_config("mirror must be a boolean");
            cfg.ingest.mirror = v.get<bool>();
        } else {
            bad_config("unknown config key '" + key + "'");
        }
    }
    cfg.gesture.validate();
    return cfg;
}

ordered_json config_to_json(const SessionConfig& cfg) {
    auto durations = [](const std::array<std::int64_t, 3>& d) {
        ordered_json o;
        for (std::size_t i = 0; i < kFamilyNames.size(); ++i) o[std::string(kFamilyNames[i])] = d[i];
        return o;
    };
    ordered_json j;
    j["dwell_ms"] = durations(cfg.gesture.dwell_ms);
    j["timeout_ms"] = durations(cfg.gesture.timeout_ms);
    j["pinch_on_dist"] = cfg.gesture.pinch_on_dist;
    j["pinch_off_dist"] = cfg.gesture.pinch_off_dist;
    j["dominant_hand"] = std::string(to_string(cfg.gesture.dominant_hand));
    j["confidence_threshold"] = cfg.ingest.confidence_threshold;
    j["mirror"] = cfg.ingest.mirror;
    return j;
}

SessionConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open config " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) bad_config(path + ": not valid JSON");
    return apply_config_patch({}, j);
}

// ---------------------------------------------------------------------------
// Envelope

std::string encode(const WireMessage& msg) {
    json j;
    j["type"] = msg.type;
    j["seq"] = msg.seq;
    j["t_ms"] = msg.t_ms;
    j["payload"] = msg.payload;
    return j.dump();
}

WireMessage decode(std::string_view text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) malformed("not valid JSON");
    if (!j.is_object()) malformed("message must be a JSON object");
    WireMessage msg;
    if (!j.contains("type") || !j["type"].is_string()) malformed("missing string field 'type'");
    if (!j.contains("seq") || !j["seq"].is_number_integer()) malformed("missing integer field 'seq'");
    if (!j.contains("t_ms") || !j["t_ms"].is_number_integer()) malformed("missing integer field 't_ms'");
    msg.type = j["type"].get<std::string>();
    msg.seq = j["seq"].get<std::int64_t>();
    msg.t_ms = j["t_ms"].get<std::int64_t>();
    msg.payload = j.contains("payload") ? j["payload"] : json(nullptr);
    return msg;
}

// ---------------------------------------------------------------------------
// Frames and events

ordered_json frame_to_json(const RawFrame& frame) {
    ordered_json j;
    j["t_ms"] = frame.t_ms;
    ordered_json hands = ordered_json::array();
    for (const auto& h : frame.hands) {
        ordered_json oh;
        oh["handedness"] = h.handedness;
        oh["index"] = {h.index[0], h.index[1]};
        oh["thumb"] = {h.thumb[0], h.thumb[1]};
        oh["palm"] = {h.palm[0], h.palm[1]};
        oh["conf"] = h.conf;
        hands.push_back(std::move(oh));
    }
    j["hands"] = std::move(hands);
    return j;
}

RawFrame frame_from_json(const json& j, std::int64_t t_ms) {
    if (!j.is_object() || !j.contains("hands") || !j["hands"].is_array()) malformed("frame needs a 'hands' array");
    RawFrame f;
    f.t_ms = t_ms;
    for (const auto& h : j["hands"]) {
        if (!h.is_object()) malformed("hand must be an object");
        RawHand rh;
        if (!h.contains("handedness") || !h["handedness"].is_string()) malformed("hand.handedness must be a string");
        rh.handedness = h["handedness"].get<std::string>();
        for (const char* key : {"index", "thumb", "palm"}) {
            if (!h.contains(key)) malformed(std::string("hand.") + key + " missing");
        }
        rh.index = read_xy(h["index"], "index");
        rh.thumb = read_xy(h["thumb"], "thumb");
        rh.palm = read_xy(h["palm"], "palm");
        if (!h.contains("conf") || !h["conf"].is_number()) malformed("hand.conf must be a number");
        rh.conf = h["conf"].get<double>();
        f.hands.push_back(std::move(rh));
    }
    return f;
}

RawFrame frame_from_json(const json& j) {
    if (!j.is_object() || !j.contains("t_ms") || !j["t_ms"].is_number_integer()) malformed("frame needs integer t_ms");
    return frame_from_json(j, j["t_ms"].get<std::int64_t>());
}

ordered_json event_to_json(const GestureEvent& ev) {
    ordered_json j;
    j["t_ms"] = ev.t_ms;
    j["hand"] = std::string(to_string(ev.hand));
    j["kind"] = std::string(to_string(ev.kind));
    j["pos"] = {ev.position.x, ev.position.y};
    return j;
}

GestureEvent event_from_json(const json& j) {
    GestureEvent ev;
    try {
        ev.t_ms = j.at("t_ms").get<std::int64_t>();
        auto h = parse_hand(j.at("hand").get<std::string>());
        auto k = parse_event_kind(j.at("kind").get<std::string>());
        if (!h || !k) malformed("bad event hand or kind");
        ev.hand = *h;
        ev.kind = *k;
        ev.position = {j.at("pos").at(0).get<double>(), j.at("pos").at(1).get<double>()};
    } catch (const json::exception& e) {
        malformed(std::string("bad event: ") + e.what());
    }
    return ev;
}

// ---------------------------------------------------------------------------
// Diffs

json compute_diff(const json& before, const json& after) {
    json set = json::object();
    json remove = json::array();
    for (const auto& [k, v] : after.items()) {
        if (k == "overlays") continue;
        if (!before.contains(k) || before[k] != v) set["/" + escape_token(k)] = v;
    }
    for (const auto& [k, v] : before.items()) {
        if (!after.contains(k)) remove.push_back("/" + escape_token(k));
    }

    static const json kEmpty = json::object();
    const json& ob = before.contains("overlays") ? before["overlays"] : kEmpty;
    const json& oa = after.contains("overlays") ? after["overlays"] : kEmpty;
    for (const auto& [id, ov] : oa.items()) {
        const std::string base = "/overlays/" + escape_token(id);
        if (!ob.contains(id)) {
            set[base] = ov;
            continue;
        }
        const json& prev = ob[id];
        for (const auto& [field, value] : ov.items()) {
            if (!prev.contains(field) || prev[field] != value) set[base + "/" + escape_token(field)] = value;
        }
        for (const auto& [field, value] : prev.items()) {
            if (!ov.contains(field)) remove.push_back(base + "/" + escape_token(field));
        }
    }
    for (const auto& [id, ov] : ob.items()) {
        if (!oa.contains(id)) remove.push_back("/overlays/" + escape_token(id));
    }
    return {{"set", set}, {"remove", remove}};
}

bool diff_empty(const json& diff) { return diff.at("set").empty() && diff.at("remove").empty(); }

void apply_diff(json& state, const json& diff) {
    try {
        for (const auto& ptr : diff.at("remove")) {
            const json::json_pointer p(ptr.get<std::string>());
            state.at(p.parent_pointer()).erase(p.back());
        }
        for (const auto& [ptr, value] : diff.at("set").items()) state[json::json_pointer(ptr)] = value;
    } catch (const json::exception& e) {
        malformed(std::string("diff does not apply: ") + e.what());
    }
}

std::optional<std::string> first_difference(const json& a, const json& b) {
    std::optional<std::string> out;
    first_diff(a, b, "", out);
    return out;
}

} // namespace chirono
