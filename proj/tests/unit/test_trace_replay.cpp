#include "fixtures.hpp"
#include "trace_builder.hpp"

#include "chirono/error.hpp"
#include "chirono/svg.hpp"
#include "chirono/trace.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace chirono;
using namespace chirono::testing;
using nlohmann::json;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::Io;
}

/// First render-stream timestamp at which pred holds for the folded state.
std::optional<std::int64_t> first_time(const ReplayOutput& out, auto&& pred) {
    json state;
    for (const auto& line : out.render) {
        const WireMessage m = decode(line);
        if (m.type == kMsgRenderFull) state = m.payload;
        else apply_diff(state, m.payload);
        if (pred(state)) return m.t_ms;
    }
    return std::nullopt;
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

} // namespace

TEST_SUITE("trace_cli") {

TEST_CASE("traces round-trip through the text format") {
    for (const auto& name : corpus_names()) {
        CAPTURE(name);
        std::ifstream in(data_path("traces/" + name + ".jsonl"));
        const std::string text((std::istreambuf_iterator<char>(in)), {});
        const Trace t = parse_trace(text);
        CHECK(serialize(t) == text);
    }
}

TEST_CASE("malformed traces name the bad line") {
    const std::string ok = R"({"t_ms":0,"hands":[]})";
    try {
        (void)parse_trace(ok + "\n" + R"({"t_ms":5,"key":"jump"})" + "\n");
        FAIL("expected MalformedTrace");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MalformedTrace);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK(code_of([&] { (void)parse_trace(R"({"t_ms":9,"hands":[]})" "\n" + ok + "\n"); }) == Errc::MalformedTrace);
    CHECK(code_of([&] { (void)parse_trace(ok + "\n" R"({"format":"chirono-trace","version":1})" "\n"); }) ==
          Errc::MalformedTrace);
    CHECK(code_of([] { (void)load_trace("/nonexistent/trace.jsonl"); }) == Errc::Io);
}

TEST_CASE("an empty trace replays to one snapshot and no events") {
    const auto out = replay(Trace{}, study_deck());
    CHECK(out.events.empty());
    REQUIRE(out.render.size() == 1);
    const auto m = decode(out.render[0]);
    CHECK(m.type == kMsgRenderFull);
    CHECK(m.seq == 0);
    CHECK(m.t_ms == 0);
}

TEST_CASE("scene hash mismatch is refused") {
    Trace t = load_trace(data_path("traces/empty.jsonl"));
    REQUIRE(t.header);
    t.header->scene_hash = std::string(64, '0');
    CHECK(code_of([&] { (void)replay(t, study_deck()); }) == Errc::SceneHashMismatch);
}

TEST_CASE("realtime pacing does not change the output") {
    const Trace t = load_trace(data_path("traces/point_highlight.jsonl"));
    const auto fast = replay(t, study_deck());
    ReplayOptions opts;
    opts.mode = ReplayMode::Realtime;
    std::int64_t slept = 0;
    opts.sleep = [&](std::chrono::milliseconds d) { slept += d.count(); };
    const auto paced = replay(t, study_deck(), opts);
    CHECK(paced.events == fast.events);
    CHECK(paced.render == fast.render);
    CHECK(slept == t.last_t() - record_time(t.records.front()));
}

TEST_CASE("snapshot at a timestamp outside the trace is refused") {
    const Trace t = load_trace(data_path("traces/point_highlight.jsonl"));
    CHECK(code_of([&] { (void)replay_to(t, study_deck(), -1); }) == Errc::TimestampOutOfRange);
    CHECK(code_of([&] { (void)replay_to(t, study_deck(), t.last_t() + 1); }) == Errc::TimestampOutOfRange);
    CHECK_NOTHROW((void)replay_to(t, study_deck(), t.last_t()));
}

TEST_CASE("snapshots show the pointing reference line") {
    const auto deck = study_deck();
    const Trace t = load_trace(data_path("traces/point_highlight.jsonl"));
    const auto out = replay(t, deck);
    const auto at = first_time(out, [](const json& s) {
        return s["overlays"].contains("trend_line") && !s["overlays"]["trend_line"]["highlight"].is_null();
    });
    REQUIRE(at);
    const Pipeline p = replay_to(t, deck, *at);
    const std::string svg = render_svg(p.engine());
    CHECK(count(svg, "class=\"ref-line vertical\"") == 1);
    CHECK(count(svg, "class=\"ref-line vertical linked\"") == 1);
    CHECK(count(svg, "class=\"value-label\"") >= 3);
    const Pipeline before = replay_to(t, deck, *at - 1);
    CHECK(count(render_svg(before.engine()), "ref-line vertical") == 0);
}

TEST_CASE("snapshots show the aggregate band") {
    const auto deck = study_deck();
    const Trace t = load_trace(data_path("traces/aggregate.jsonl"));
    const auto out = replay(t, deck);
    const auto at = first_time(out, [](const json& s) {
        return s["overlays"].contains("stack") && !s["overlays"]["stack"]["aggregate"].is_null();
    });
    REQUIRE(at);
    CHECK(count(render_svg(replay_to(t, deck, *at).engine()), "class=\"total-band\"") == 1);
    CHECK(count(render_svg(replay_to(t, deck, t.last_t()).engine()), "class=\"total-band\"") == 0);
}

TEST_CASE("snapshot state equals the folded render stream") {
    const auto deck = study_deck();
    const Trace t = load_trace(data_path("traces/zoom_pan.jsonl"));
    const auto out = replay(t, deck);
    json state;
    for (const auto& line : out.render) {
        const WireMessage m = decode(line);
        if (m.type == kMsgRenderFull) state = m.payload;
        else apply_diff(state, m.payload);
    }
    CHECK(state == out.final_state);
    CHECK(replay_to(t, deck, t.last_t()).state_json() == out.final_state);
}

TEST_CASE("the committed goldens match") {
    const auto names = corpus_names();
    REQUIRE(names.size() >= 10);
    for (const auto& name : names) {
        CAPTURE(name);
        const auto out = replay(load_trace(data_path("traces/" + name + ".jsonl")), study_deck());
        const auto report = diff_golden(out, golden_path(name));
        CHECK_MESSAGE(report.pass, report.file << ":" << report.line << " " << report.pointer << " " << report.message);
    }
}

TEST_CASE("a perturbed dwell diverges from the goldens") {
    const Trace t = load_trace(data_path("traces/point_highlight.jsonl"));
    ReplayOptions opts;
    opts.config = apply_config_patch(t.header->config, json{{"dwell_ms", 300}});
    const auto report = diff_golden(replay(t, study_deck(), opts), golden_path("point_highlight"));
    CHECK_FALSE(report.pass);
    CHECK(report.file == kGoldenEvents);
    CHECK(report.line >= 1);
    CHECK(report.t_ms.has_value());
}

TEST_CASE("missing goldens are reported") {
    const auto out = replay(Trace{}, study_deck());
    CHECK(code_of([&] { (void)diff_golden(out, "/nonexistent/golden"); }) == Errc::MissingGolden);
}

TEST_CASE("written outputs diff clean against themselves") {
    const auto out = replay(load_trace(data_path("traces/legend_linkage.jsonl")), study_deck());
    const auto dir = std::filesystem::temp_directory_path() / "chirono-write-outputs";
    std::filesystem::remove_all(dir);
    write_outputs(out, dir.string());
    CHECK(diff_golden(out, dir.string()).pass);
    std::filesystem::remove_all(dir);
}

} // TEST_SUITE
