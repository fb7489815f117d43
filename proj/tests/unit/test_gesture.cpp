#include "oracle.hpp"
#include "trace_builder.hpp"

#include "chirono/error.hpp"
#include "chirono/gesture_runtime.hpp"

#include <doctest.h>

#include <map>
#include <random>

using namespace chirono;
using namespace chirono::testing;

namespace {

LandmarkFrame frame_at(std::int64_t t, std::vector<HandObservation> hands) { return {t, std::move(hands)}; }

HandObservation obs(Hand h, Point2 index, double pinch_dist = 0.2) {
    return {h, index, {index.x + pinch_dist, index.y}, {index.x, index.y + 0.1}, 0.9};
}

std::vector<GestureEvent> run(GestureRuntime& rt, const std::vector<LandmarkFrame>& frames) {
    std::vector<GestureEvent> all;
    for (const auto& f : frames) {
        auto evs = rt.step(f);
        all.insert(all.end(), evs.begin(), evs.end());
    }
    return all;
}

std::vector<GestureEvent> only(const std::vector<GestureEvent>& evs, Hand h, GestureFamily f) {
    std::vector<GestureEvent> out;
    for (const auto& e : evs) {
        if (e.hand == h && family_of(e.kind) == f) out.push_back(e);
    }
    return out;
}

char letter(EventKind k) {
    switch (static_cast<int>(k) % 3) {
    case 0: return 'S';
    case 1: return 'M';
    default: return 'E';
    }
}

std::vector<OracleEvent> as_oracle(const std::vector<GestureEvent>& evs) {
    std::vector<OracleEvent> out;
    for (const auto& e : evs) out.push_back({e.t_ms, letter(e.kind)});
    return out;
}

Sig pinch_sig(const HandObservation* h, const GestureConfig& cfg) {
    if (!h) return Sig::Missing;
    const double d = std::hypot(h->index_tip.x - h->thumb_tip.x, h->index_tip.y - h->thumb_tip.y);
    if (d < cfg.pinch_on_dist) return Sig::On;
    if (d > cfg.pinch_off_dist) return Sig::Off;
    return Sig::Hold;
}

} // namespace

TEST_SUITE("gesture_runtime") {

TEST_CASE("config accepts the protocol range and rejects outside it") {
    for (std::int64_t v : {99, 100, 500, 1000, 1001}) {
        for (std::size_t fam = 0; fam < 3; ++fam) {
            GestureConfig dwell;
            dwell.dwell_ms[fam] = v;
            GestureConfig timeout;
            timeout.timeout_ms[fam] = v;
            const bool ok = v >= 100 && v <= 1000;
            if (ok) {
                CHECK_NOTHROW(dwell.validate());
                CHECK_NOTHROW(timeout.validate());
            } else {
                CHECK_THROWS_AS(dwell.validate(), Error);
                CHECK_THROWS_AS(timeout.validate(), Error);
            }
        }
    }
    GestureConfig no_hysteresis;
    no_hysteresis.pinch_off_dist = no_hysteresis.pinch_on_dist;
    CHECK_THROWS_AS(no_hysteresis.validate(), Error);
    CHECK_THROWS_AS((void)GestureRuntime{no_hysteresis}, Error);
}

TEST_CASE("PointEnter at the first frame with t >= dwell") {
    GestureRuntime rt;
    std::vector<LandmarkFrame> frames;
    for (std::int64_t t = 0; t <= 400; t += 33) frames.push_back(frame_at(t, {obs(Hand::Right, {0.5, 0.5})}));
    auto evs = only(run(rt, frames), Hand::Right, GestureFamily::Point);
    REQUIRE_FALSE(evs.empty());
    CHECK(evs.front().kind == EventKind::PointEnter);
    CHECK(evs.front().t_ms == 231); // first multiple of 33 >= 200
}

TEST_CASE("presence shorter than dwell emits nothing") {
    GestureRuntime rt;
    std::vector<LandmarkFrame> frames;
    for (std::int64_t t = 0; t <= 150; t += 30) frames.push_back(frame_at(t, {obs(Hand::Right, {0.5, 0.5})}));
    for (std::int64_t t = 180; t <= 1500; t += 30) frames.push_back(frame_at(t, {}));
    CHECK(run(rt, frames).empty());
}

TEST_CASE("a pinch dropout shorter than timeout is bridged") {
    GestureRuntime rt;
    std::vector<LandmarkFrame> frames;
    for (std::int64_t t = 0; t < 1000; t += 20) frames.push_back(frame_at(t, {obs(Hand::Right, {0.5, 0.5}, 0.02)}));
    for (std::int64_t t = 1000; t < 1300; t += 20) frames.push_back(frame_at(t, {}));
    for (std::int64_t t = 1300; t < 1600; t += 20) frames.push_back(frame_at(t, {obs(Hand::Right, {0.5, 0.5}, 0.02)}));
    auto pinch = only(run(rt, frames), Hand::Right, GestureFamily::Pinch);
    REQUIRE_FALSE(pinch.empty());
    CHECK(pinch.front().kind == EventKind::PinchStart);
    for (std::size_t i = 1; i < pinch.size(); ++i) CHECK(pinch[i].kind == EventKind::PinchMove);
    CHECK(pinch.back().t_ms == 1580);
}

TEST_CASE("a dropout reaching timeout ends at the detection frame") {
    GestureRuntime rt;
    std::vector<LandmarkFrame> frames;
    for (std::int64_t t = 0; t < 1000; t += 20) frames.push_back(frame_at(t, {obs(Hand::Right, {0.5, 0.5}, 0.02)}));
    for (std::int64_t t = 1000; t < 1600; t += 20) frames.push_back(frame_at(t, {}));
    auto evs = run(rt, frames);
    std::vector<GestureEvent> ends;
    for (const auto& e : evs) {
        if (e.kind == EventKind::PinchEnd || e.kind == EventKind::PointLeave || e.kind == EventKind::PalmLeave) {
            ends.push_back(e);
        }
    }
    REQUIRE(ends.size() == 3);
    for (const auto& e : ends) CHECK(e.t_ms == 1400);
    // nested teardown order
    CHECK(ends[0].kind == EventKind::PinchEnd);
    CHECK(ends[1].kind == EventKind::PalmLeave);
    CHECK(ends[2].kind == EventKind::PointLeave);
}

TEST_CASE("pinch threshold: 0.03 held 250 ms starts") {
    GestureRuntime rt;
    std::vector<LandmarkFrame> frames;
    for (std::int64_t t = 0; t <= 250; t += 10) frames.push_back(frame_at(t, {obs(Hand::Right, {0.5, 0.5}, 0.03)}));
    auto pinch = only(run(rt, frames), Hand::Right, GestureFamily::Pinch);
    REQUIRE_FALSE(pinch.empty());
    CHECK(pinch.front().kind == EventKind::PinchStart);
    CHECK(pinch.front().t_ms == 200);
}

TEST_CASE("hysteresis band keeps an active pinch") {
    GestureRuntime rt;
    std::vector<LandmarkFrame> frames;
    for (std::int64_t t = 0; t <= 300; t += 20) frames.push_back(frame_at(t, {obs(Hand::Right, {0.5, 0.5}, 0.03)}));
    for (std::int64_t t = 320; t <= 3000; t += 20) {
        frames.push_back(frame_at(t, {obs(Hand::Right, {0.5, 0.5}, (t / 20) % 2 ? 0.06 : 0.07)}));
    }
    auto pinch = only(run(rt, frames), Hand::Right, GestureFamily::Pinch);
    REQUIRE_FALSE(pinch.empty());
    CHECK(pinch.front().kind == EventKind::PinchStart);
    for (std::size_t i = 1; i < pinch.size(); ++i) CHECK(pinch[i].kind == EventKind::PinchMove);
    CHECK(rt.pinching(Hand::Right));
}

TEST_CASE("hysteresis band does not start a pinch") {
    GestureRuntime rt;
    std::vector<LandmarkFrame> frames;
    for (std::int64_t t = 0; t <= 2000; t += 20) frames.push_back(frame_at(t, {obs(Hand::Right, {0.5, 0.5}, 0.06)}));
    CHECK(only(run(rt, frames), Hand::Right, GestureFamily::Pinch).empty());
}

TEST_CASE("wide pinch distance never pinches") {
    GestureRuntime rt;
    std::vector<LandmarkFrame> frames;
    for (std::int64_t t = 0; t <= 2000; t += 20) frames.push_back(frame_at(t, {obs(Hand::Right, {0.5, 0.5}, 0.2)}));
    CHECK(only(run(rt, frames), Hand::Right, GestureFamily::Pinch).empty());
}

TEST_CASE("release requires the off distance sustained for dwell") {
    GestureRuntime rt;
    std::vector<LandmarkFrame> frames;
    for (std::int64_t t = 0; t <= 300; t += 20) frames.push_back(frame_at(t, {obs(Hand::Right, {0.5, 0.5}, 0.03)}));
    for (std::int64_t t = 320; t <= 700; t += 20) frames.push_back(frame_at(t, {obs(Hand::Right, {0.5, 0.5}, 0.2)}));
    auto pinch = only(run(rt, frames), Hand::Right, GestureFamily::Pinch);
    REQUIRE(pinch.back().kind == EventKind::PinchEnd);
    CHECK(pinch.back().t_ms == 520);
}

TEST_CASE("dominant hand selection") {
    GestureConfig cfg;
    const std::vector<Hand> both{Hand::Left, Hand::Right};
    const std::vector<Hand> left_only{Hand::Left};
    CHECK(dominant(both, cfg) == Hand::Right);
    CHECK(dominant(left_only, cfg) == Hand::Left);
    cfg.dominant_hand = Hand::Left;
    CHECK(dominant(both, cfg) == Hand::Left);
    CHECK_THROWS_AS(dominant(std::span<const Hand>{}, cfg), Error);
}

TEST_CASE("simultaneous events: ends first, Right before Left") {
    std::vector<GestureEvent> evs{
        {EventKind::PointEnter, Hand::Left, {}, 10}, {EventKind::PinchMove, Hand::Right, {}, 10},
        {EventKind::PointLeave, Hand::Left, {}, 10}, {EventKind::PointEnter, Hand::Right, {}, 10},
        {EventKind::PinchEnd, Hand::Right, {}, 10},  {EventKind::PalmEnter, Hand::Right, {}, 5},
    };
    sort_canonical(evs);
    CHECK(evs[0].t_ms == 5);
    CHECK(evs[1].kind == EventKind::PinchEnd);
    CHECK(evs[2].kind == EventKind::PointLeave);
    CHECK(evs[3].kind == EventKind::PointEnter);
    CHECK(evs[3].hand == Hand::Right);
    CHECK(evs[4].hand == Hand::Left);
    CHECK(evs[5].kind == EventKind::PinchMove);
}

TEST_CASE("random traces conform to the reference oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 150; ++trial) {
        GestureConfig cfg;
        std::uniform_int_distribution<std::int64_t> ms(100, 1000);
        for (auto& d : cfg.dwell_ms) d = ms(rng);
        for (auto& d : cfg.timeout_ms) d = ms(rng);
        GestureRuntime rt(cfg);

        std::vector<LandmarkFrame> frames;
        std::map<std::pair<Hand, GestureFamily>, std::vector<std::pair<std::int64_t, Sig>>> signals;
        std::int64_t t = 0;
        std::array<bool, 2> present{false, false};
        std::array<double, 2> dist{0.2, 0.2};
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 300; ++i) {
            t += u(rng) < 0.05 ? 150 + static_cast<std::int64_t>(u(rng) * 400) : 33;
            LandmarkFrame f{t, {}};
            for (Hand h : kHands) {
                auto& p = present[index_of(h)];
                if (u(rng) < 0.06) p = !p;
                if (u(rng) < 0.08) {
                    const double r = u(rng);
                    dist[index_of(h)] = r < 0.45 ? 0.02 : r < 0.65 ? 0.065 : 0.2;
                }
                if (p) f.hands.push_back(obs(h, {u(rng), u(rng)}, dist[index_of(h)]));
            }
            for (Hand h : kHands) {
                const HandObservation* o = f.find(h);
                signals[{h, GestureFamily::Point}].emplace_back(t, o ? Sig::On : Sig::Missing);
                signals[{h, GestureFamily::Palm}].emplace_back(t, o ? Sig::On : Sig::Missing);
                signals[{h, GestureFamily::Pinch}].emplace_back(t, pinch_sig(o, cfg));
            }
            frames.push_back(std::move(f));
        }
        const auto evs = run(rt, frames);
        for (const auto& [key, sig] : signals) {
            const auto [h, fam] = key;
            const auto got = as_oracle(only(evs, h, fam));
            const auto want = debounce_oracle(sig, cfg.dwell(fam), cfg.timeout(fam));
            REQUIRE(got == want);
            std::string letters;
            for (const auto& e : got) letters += e.what;
            CHECK(lifecycle_ok(letters));
        }
    }
}

TEST_CASE("no Enter/Start earlier than first detection plus dwell") {
    TraceBuilder b;
    b.hold({right({0.5, 0.5}, true)}, 1000);
    b.empty(500);
    b.hold({right({0.5, 0.5}, true), left({0.2, 0.2})}, 1000);
    GestureRuntime rt;
    LandmarkIngest ingest;
    std::array<std::optional<std::int64_t>, 2> first_seen;
    for (const auto& r : b.build().records) {
        auto res = ingest.ingest(std::get<RawFrame>(r));
        for (Hand h : kHands) {
            if (res.frame.find(h)) {
                if (!first_seen[index_of(h)]) first_seen[index_of(h)] = res.frame.t_ms;
            } else {
                first_seen[index_of(h)].reset();
            }
        }
        for (const auto& e : rt.step(res.frame)) {
            if (letter(e.kind) == 'S') {
                REQUIRE(first_seen[index_of(e.hand)]);
                CHECK(e.t_ms >= *first_seen[index_of(e.hand)] + 200);
            }
        }
    }
}

TEST_CASE("gaps shorter than timeout never change the start/end count") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        TraceBuilder base;
        base.hold({right({0.4, 0.4}, true)}, 2000);
        base.empty(800);
        TraceBuilder gapped;
        gapped.hold({right({0.4, 0.4}, true)}, 700);
        gapped.empty(std::uniform_int_distribution<std::int64_t>(30, 360)(rng));
        gapped.hold({right({0.4, 0.4}, true)}, 2000 - gapped.now());
        gapped.empty(800);
        auto count = [](const Trace& t) {
            GestureRuntime rt;
            LandmarkIngest ingest;
            int n = 0;
            for (const auto& r : t.records) {
                for (const auto& e : rt.step(ingest.ingest(std::get<RawFrame>(r)).frame)) {
                    if (letter(e.kind) != 'M') ++n;
                }
            }
            return n;
        };
        CHECK(count(gapped.build()) == count(base.build()));
    }
}

} // TEST_SUITE
