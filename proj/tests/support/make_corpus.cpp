// Regenerates the committed regression traces:
//   make_corpus <deck.json> <out-dir>
// Goldens are then refreshed with `chirono replay --out-dir`.

#include "trace_builder.hpp"

#include "chirono/error.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

using namespace chirono;
using namespace chirono::testing;

namespace {

struct Ctx {
    const Deck& deck;
    std::vector<ResolvedScene> scenes;

    explicit Ctx(const Deck& d) : deck(d) {
        for (const auto& s : d.scenes) scenes.push_back(resolve_scene(s, d));
    }

    const ResolvedOverlay& ov(std::string_view id) const {
        for (const auto& s : scenes) {
            if (int i = s.find(id); i >= 0) return s.overlays[static_cast<std::size_t>(i)];
        }
        throw Error(Errc::InvalidScene, "no overlay " + std::string(id));
    }
};

// Navigate and let the transition finish.
void go(TraceBuilder& b, const std::string& cmd) {
    b.key(cmd);
    b.empty(900);
}

Trace point_highlight(const Ctx& c) {
    TraceBuilder b;
    go(b, "goto:1");
    const auto& line = c.ov("trend_line");
    b.glide(right(plot_point(line, 0.1, 0.5)), plot_point(line, 0.9, 0.4), 1500);
    b.hold({right(data_point(line, 2017.2, 20))}, 400);
    b.empty(600);
    return b.build();
}

Trace margin_reference(const Ctx& c) {
    TraceBuilder b;
    go(b, "goto:1");
    const auto& line = c.ov("trend_line");
    b.glide(left(frame_point(line, 0.05, 0.3)), frame_point(line, 0.05, 0.7), 800);
    b.glide(right(frame_point(line, 0.95, 0.6)), frame_point(line, 0.95, 0.4), 800, {left(frame_point(line, 0.05, 0.7))});
    b.empty(600);
    return b.build();
}

Trace palm_gradient(const Ctx& c) {
    TraceBuilder b;
    go(b, "goto:1");
    const auto& line = c.ov("trend_line");
    Pose r = right(plot_point(line, 0.7, 0.3));
    r.palm = plot_point(line, 0.7, 0.6);
    Pose l = left(plot_point(line, 0.2, 0.3));
    l.palm = plot_point(line, 0.25, 0.6);
    b.hold({l}, 500);
    b.hold({r, l}, 700);
    Pose outside = right({0.99, 0.99});
    outside.palm = Point2{0.99, 0.99};
    b.hold({outside, l}, 700);
    b.empty(600);
    return b.build();
}

Trace legend_linkage(const Ctx& c) {
    TraceBuilder b;
    go(b, "goto:5");
    const auto& legend = c.ov("share_legend");
    const auto& bars = c.ov("region_bars");
    const Point2 swatch = legend.swatches[1].rect.center(); // south
    b.hold({left(swatch)}, 500);
    b.glide(right(plot_point(bars, 0.2, 0.5)), plot_point(bars, 0.8, 0.5), 1000, {left(swatch)});
    b.hold({left(swatch)}, 300);
    b.empty(600);
    return b.build();
}

Trace pie_linkage(const Ctx& c) {
    TraceBuilder b;
    go(b, "goto:5");
    const auto& pie = c.ov("share_pie");
    const double r = pie.pie_radius * 0.5;
    auto at_angle = [&](double deg) {
        const double rad = deg * 3.14159265358979 / 180.0;
        return Point2{pie.pie_center.x + r * std::sin(rad) / pie.aspect, pie.pie_center.y - r * std::cos(rad)};
    };
    b.hold({right(at_angle(60))}, 500);
    b.hold({right(at_angle(200))}, 500);
    b.hold({right(at_angle(320))}, 500);
    b.empty(600);
    return b.build();
}

Trace zoom_pan(const Ctx& c) {
    TraceBuilder b;
    go(b, "goto:2");
    const auto& area = c.ov("zoom_area");
    const double bottom = area.plot.bottom() + (area.frame.bottom() - area.plot.bottom()) * 0.5;
    const Point2 a{area.x.position(2011), bottom};
    const Point2 z{area.x.position(2013), bottom};
    b.hold({left(a), right(z, false)}, 300);
    b.hold({left(a, true), right(z, false)}, 150);
    b.hold({left(a, true), right(z, true)}, 500);
    b.hold({left(a), right(z)}, 300);
    b.empty(500);
    const Point2 corner = frame_point(area, 0.97, 0.97);
    b.hold({right(corner, true)}, 400);
    b.empty(500);
    const double top = area.frame.y + (area.plot.y - area.frame.y) * 0.5;
    b.hold({left({area.x.position(2012), top}, true), right({area.x.position(2015), top}, true)}, 400);
    b.empty(600);
    return b.build();
}

Trace reveal(const Ctx& c) {
    TraceBuilder b;
    go(b, "goto:3");
    const auto& stack = c.ov("stack");
    const Point2 p = data_point(stack, 2015, 18 + 13 * 0.5);
    b.hold({right(p)}, 300);
    b.hold({right(p, true)}, 400);
    b.hold({right(p)}, 400);
    b.empty(600);
    return b.build();
}

Trace aggregate(const Ctx& c) {
    TraceBuilder b;
    go(b, "goto:3");
    const auto& stack = c.ov("stack");
    const Point2 l = plot_point(stack, 0.3, 0.05);
    const Point2 r = plot_point(stack, 0.7, 0.05);
    b.hold({left(l), right(r)}, 300);
    b.hold({left(l, true), right(r, true)}, 700);
    b.glide(right(r, true), {0.99, r.y}, 600, {left(l, true)});
    b.hold({left(l, true)}, 300);
    b.hold({left(l)}, 400);
    b.empty(600);
    return b.build();
}

Trace transform(const Ctx& c) {
    TraceBuilder b;
    go(b, "goto:4");
    const auto& fx = c.ov("fx_line");
    const auto& spend = c.ov("spend_bar");
    const Point2 grab = data_point(fx, 2015, 0.5);
    b.hold({right(grab)}, 300);
    b.hold({right(grab, true)}, 300);
    b.glide(right(grab, true), plot_point(spend, 0.5, 0.5), 800);
    b.hold({right(plot_point(spend, 0.5, 0.5), true)}, 100);
    b.hold({right(plot_point(spend, 0.5, 0.5))}, 400);
    b.empty(600);
    return b.build();
}

Trace compare_clone(const Ctx& c) {
    TraceBuilder b;
    go(b, "goto:4");
    const auto& spend = c.ov("spend_bar");
    const Point2 bar = data_point(spend, 2016, 50);
    b.hold({right(bar)}, 300);
    b.hold({right(bar, true)}, 300);
    b.glide(right(bar, true), {0.5, 0.95}, 600);
    b.hold({right({0.5, 0.95})}, 400);
    b.empty(600);
    return b.build();
}

Trace domain_mismatch(const Ctx& c) {
    TraceBuilder b;
    go(b, "goto:6");
    const auto& fx = c.ov("fx_area");
    const auto& fruit = c.ov("fruit_bars");
    const Point2 grab = data_point(fx, 2014, 0.5);
    b.hold({right(grab)}, 300);
    b.hold({right(grab, true)}, 300);
    b.glide(right(grab, true), plot_point(fruit, 0.4, 0.9), 700);
    b.hold({right(plot_point(fruit, 0.4, 0.9))}, 400);
    b.empty(600);
    return b.build();
}

Trace study_deck(const Ctx& c) {
    TraceBuilder b;
    b.hold({right(plot_point(c.ov("fruit_bar"), 0.4, 0.5))}, 600);
    b.empty(400);
    for (int i = 1; i < 8; ++i) {
        b.key("next");
        // pinch attempt during the transition lock
        b.hold({right({0.5, 0.5}, true)}, 300);
        b.empty(700);
        b.hold({right({0.3 + 0.05 * i, 0.5})}, 400);
        b.empty(500);
    }
    b.key("next"); // clamped at the last scene
    b.empty(300);
    b.key("prev");
    b.empty(900);
    b.key("goto:99");
    b.empty(900);
    b.key("goto:0");
    b.empty(900);
    return b.build();
}

Trace dropout(const Ctx& c) {
    TraceBuilder b;
    go(b, "goto:1");
    const auto& line = c.ov("trend_line");
    const Point2 p = plot_point(line, 0.5, 0.5);
    b.hold({right(p)}, 600);
    b.stall(250); // bridged
    b.hold({right(p)}, 300);
    b.empty(300); // bridged
    b.hold({right(p)}, 300);
    b.empty(500); // ends
    b.hold({right(p)}, 500);
    b.empty(600);
    return b.build();
}

Trace flourish(const Ctx& c) {
    TraceBuilder b;
    std::mt19937_64 rng(7);
    go(b, "goto:2");
    const auto& area = c.ov("zoom_area");
    const double bottom = area.plot.bottom() + (area.frame.bottom() - area.plot.bottom()) * 0.5;
    const Point2 a{area.x.position(2017), bottom};
    const Point2 z{area.x.position(2019), bottom};
    b.hold({left(a, true), right(z, true)}, 400);
    b.flourish(right(z, true), 0.2, 1500, rng, {left(a, true)});
    b.empty(600);
    return b.build();
}

Trace empty_trace(const Ctx&) { return TraceBuilder().build(); }

} // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: make_corpus <deck.json> <out-dir>\n";
        return 2;
    }
    const Deck deck = load_deck(argv[1]);
    const Ctx ctx(deck);
    TraceHeader header;
    header.scene_hash = deck.source_hash;

    const std::map<std::string, std::function<Trace(const Ctx&)>> scenarios{
        {"point_highlight", point_highlight}, {"margin_reference", margin_reference},
        {"palm_gradient", palm_gradient},     {"legend_linkage", legend_linkage},
        {"pie_linkage", pie_linkage},         {"zoom_pan", zoom_pan},
        {"reveal", reveal},                   {"aggregate", aggregate},
        {"transform", transform},             {"compare_clone", compare_clone},
        {"domain_mismatch", domain_mismatch}, {"study_deck", study_deck},
        {"dropout", dropout},                 {"flourish", flourish},
        {"empty", empty_trace},
    };
    std::filesystem::create_directories(argv[2]);
    for (const auto& [name, make] : scenarios) {
        Trace t = make(ctx);
        t.header = header;
        save_trace(t, (std::filesystem::path(argv[2]) / (name + ".jsonl")).string());
    }
    return 0;
}
