#include "fixtures.hpp"
#include "trace_builder.hpp"

#include "chirono/error.hpp"
#include "chirono/session.hpp"

#include <doctest.h>

#include <sstream>
#include <thread>

using namespace chirono;
using namespace chirono::testing;
using nlohmann::json;

namespace {

std::string frame_msg(const RawFrame& f, std::int64_t seq) {
    return encode({std::string(kMsgFrame), seq, f.t_ms, json{{"hands", json::parse(frame_to_json(f).dump())["hands"]}}});
}

std::string key_msg(const std::string& key, std::int64_t t, std::int64_t seq) {
    return encode({std::string(kMsgKey), seq, t, key});
}

/// Folds a client's messages into the state it would display.
struct Viewer {
    json state;
    std::int64_t next_seq = 0;
    std::size_t fulls = 0;
    std::size_t diffs = 0;
    std::vector<WireMessage> errors;

    void take(const std::vector<std::string>& msgs) {
        for (const auto& text : msgs) {
            const WireMessage m = decode(text);
            if (m.type == kMsgRenderFull) {
                CHECK(m.seq >= next_seq); // a resync may skip dropped messages
            } else {
                CHECK(m.seq == next_seq);
            }
            next_seq = m.seq + 1;
            if (m.type == kMsgRenderFull) {
                state = m.payload;
                ++fulls;
            } else if (m.type == kMsgRenderDiff) {
                apply_diff(state, m.payload);
                ++diffs;
            } else if (m.type == kMsgError) {
                errors.push_back(m);
            }
        }
    }
};

void feed(SessionHub& hub, ClientId presenter, const Trace& trace, std::int64_t& seq) {
    for (const auto& r : trace.records) {
        if (const auto* f = std::get_if<RawFrame>(&r)) {
            hub.submit(presenter, frame_msg(*f, seq++));
        } else {
            const auto& k = std::get<KeyCommand>(r);
            hub.submit(presenter, key_msg(to_string(k.command), k.t_ms, seq++));
        }
        hub.process_pending();
    }
}

} // namespace

TEST_SUITE("session_server") {

TEST_CASE("pipeline runs frames through to the engine") {
    Pipeline p(study_deck());
    p.on_key({0, *parse_nav_command("goto:2")});
    CHECK(p.render().scene_id == "zoom");
    TraceBuilder tb;
    const auto& o = p.engine().scene().overlays[0];
    tb.empty(900).hold({right(plot_point(o, 0.5, 0.5))}, 400);
    std::vector<GestureEvent> events;
    for (const auto& r : tb.build().records) {
        auto out = p.on_frame(std::get<RawFrame>(r));
        CHECK(out.status == IngestStatus::Accepted);
        events.insert(events.end(), out.events.begin(), out.events.end());
    }
    REQUIRE_FALSE(events.empty());
    CHECK(events.front().kind == EventKind::PointEnter);
    CHECK(p.render().overlays.at("zoom_area").highlight);
    CHECK(p.render().markers.size() == 1);
}

TEST_CASE("config changes apply at runtime and bad ones are refused") {
    Pipeline p(study_deck());
    p.on_config(json{{"dwell_ms", 300}});
    CHECK(p.config().gesture.dwell_ms[0] == 300);
    CHECK_THROWS_AS(p.on_config(json{{"dwell_ms", 50}}), Error);
    CHECK(p.config().gesture.dwell_ms[0] == 300);
}

TEST_CASE("one presenter at a time") {
    SessionHub hub(study_deck());
    const auto a = hub.accept(Role::Presenter);
    CHECK_THROWS_AS(hub.accept(Role::Presenter), Error);
    hub.disconnect(a);
    CHECK_NOTHROW(hub.accept(Role::Presenter));
    CHECK(hub.client_count() == 1);
}

TEST_CASE("new clients start from a full snapshot") {
    SessionHub hub(study_deck());
    const auto pres = hub.accept(Role::Presenter);
    hub.submit(pres, key_msg("next", 10, 0));
    hub.process_pending();
    const auto late = hub.accept(Role::Audience);
    Viewer v;
    v.take(hub.drain(late));
    CHECK(v.fulls == 1);
    CHECK(v.state == hub.state());
    CHECK(v.state["scene_id"] == "trend");
}

TEST_CASE("malformed, stale and unauthorized input is answered with an error") {
    SessionHub hub(study_deck());
    const auto pres = hub.accept(Role::Presenter);
    const auto aud = hub.accept(Role::Audience);
    Viewer vp, va;
    vp.take(hub.drain(pres));
    va.take(hub.drain(aud));

    hub.submit(pres, "not json");
    hub.submit(pres, key_msg("next", 10, 5));
    hub.submit(pres, key_msg("next", 20, 5)); // repeated seq
    hub.submit(pres, key_msg("sideways", 30, 6));
    hub.submit(aud, key_msg("next", 40, 0));
    hub.process_pending();
    vp.take(hub.drain(pres));
    va.take(hub.drain(aud));
    REQUIRE(vp.errors.size() == 3);
    for (const auto& e : vp.errors) CHECK(e.payload["code"] == "MalformedMessage");
    REQUIRE(va.errors.size() == 1);
    CHECK(hub.state()["scene_id"] == "trend"); // only the valid "next" ran
    CHECK(va.state == hub.state());
}

TEST_CASE("a quiet session sends nothing; a key sends one diff") {
    SessionHub hub(study_deck());
    const auto pres = hub.accept(Role::Presenter);
    const auto aud = hub.accept(Role::Audience);
    Viewer v;
    v.take(hub.drain(aud));
    std::int64_t seq = 0;
    TraceBuilder tb;
    tb.empty(1000);
    feed(hub, pres, tb.build(), seq);
    CHECK(hub.drain(aud).empty());

    hub.submit(pres, key_msg("next", 1100, seq++));
    hub.process_pending();
    const auto msgs = hub.drain(aud);
    REQUIRE(msgs.size() == 1);
    const auto m = decode(msgs[0]);
    CHECK(m.type == kMsgRenderDiff);
    CHECK(m.t_ms == 1100);
    CHECK(m.payload["set"].contains("/transition"));
}

TEST_CASE("audience clients mirror the presenter byte for byte") {
    const auto deck = study_deck();
    SessionHub hub(deck);
    const auto pres = hub.accept(Role::Presenter);
    const auto a = hub.accept(Role::Audience);
    const auto b = hub.accept(Role::Audience);
    std::int64_t seq = 0;
    const Trace trace = load_trace(data_path("traces/transform.jsonl"));
    feed(hub, pres, trace, seq);
    const auto ma = hub.drain(a);
    const auto mb = hub.drain(b);
    CHECK(ma == mb);
    Viewer va, vp;
    va.take(ma);
    vp.take(hub.drain(pres));
    CHECK(va.state == hub.state());
    CHECK(vp.state == hub.state());
    CHECK(va.diffs > 5);
    CHECK(hub.state() == replay(trace, deck).final_state);
}

TEST_CASE("a slow consumer is resynchronised with a fresh snapshot") {
    HubOptions opts;
    opts.outbox_capacity = 8;
    SessionHub hub(study_deck(), {}, opts);
    const auto pres = hub.accept(Role::Presenter);
    const auto slow = hub.accept(Role::Audience);
    std::int64_t seq = 0;
    const Trace trace = load_trace(data_path("traces/zoom_pan.jsonl"));
    feed(hub, pres, trace, seq);
    const auto msgs = hub.drain(slow);
    CHECK(msgs.size() <= 8);
    Viewer v;
    v.take(msgs);
    CHECK(v.fulls >= 1);
    CHECK(decode(msgs.front()).type == kMsgRenderFull);
    CHECK(v.state == hub.state());
}

TEST_CASE("recorded sessions replay to the same state") {
    const auto deck = study_deck();
    SessionHub hub(deck);
    std::ostringstream log;
    hub.set_recorder(&log, deck->source_hash);
    const auto pres = hub.accept(Role::Presenter);
    std::int64_t seq = 0;
    feed(hub, pres, load_trace(data_path("traces/aggregate.jsonl")), seq);
    const Trace recorded = parse_trace(log.str());
    REQUIRE(recorded.header);
    CHECK(recorded.header->scene_hash == deck->source_hash);
    CHECK(replay(recorded, deck).final_state == hub.state());
}

TEST_CASE("frames coalesce when the engine falls behind") {
    SessionHub hub(study_deck());
    const auto pres = hub.accept(Role::Presenter);
    TraceBuilder tb;
    tb.empty(300);
    std::int64_t seq = 0;
    for (const auto& r : tb.build().records) hub.submit(pres, frame_msg(std::get<RawFrame>(r), seq++));
    CHECK(hub.process_pending() == 1);
    CHECK(hub.dropped_frames() == 8);
}

TEST_CASE("threaded engine loop") {
    SessionHub hub(study_deck());
    const auto pres = hub.accept(Role::Presenter);
    const auto aud = hub.accept(Role::Audience);
    std::thread engine([&] { hub.run(); });
    hub.submit(pres, key_msg("goto:3", 10, 0));
    for (int i = 0; i < 200 && hub.state()["scene_id"] != "stacked"; ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    hub.stop();
    engine.join();
    Viewer v;
    v.take(hub.drain(aud));
    CHECK(v.state["scene_id"] == "stacked");
}

} // TEST_SUITE
