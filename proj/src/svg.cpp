#include "chirono/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>

namespace chirono {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string esc(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

double px(double x) { return x * kSvgWidth; }
double py(double y) { return y * kSvgHeight; }

std::string color_of(const ResolvedOverlay& o, const std::string& series) {
    if (const Series* s = o.find_series(series); s && !s->color.empty()) return s->color;
    for (const auto& [cat, color] : o.spec->chart.colors) {
        if (cat == series) return color;
    }
    return "#888888";
}

std::string emphasis(const OverlayState& st, const std::string& key) {
    if (st.emphasized.contains(key)) return " emphasized";
    if (st.deemphasized.contains(key)) return " deemphasized";
    return "";
}

bool outlined(const OverlayState& st, const std::string& key) {
    return std::find(st.outlined.begin(), st.outlined.end(), key) != st.outlined.end();
}

double clip_x(const ResolvedOverlay& o, double x) {
    return std::clamp(o.x.position(x), o.plot.x, o.plot.right());
}

double clip_y(const ResolvedOverlay& o, double v) {
    return std::clamp(o.apply_y(v), o.plot.y, o.plot.bottom());
}

void line_marks(std::ostringstream& out, const ResolvedOverlay& o, const OverlayState& st) {
    const bool highlighted_series = st.highlight.has_value();
    for (const auto& s : o.series) {
        if (st.hidden_series.contains(s.id)) continue;
        std::string d;
        for (const auto& p : s.points) {
            d += (d.empty() ? "M" : " L") + num(px(clip_x(o, p.x))) + " " + num(py(clip_y(o, p.y)));
        }
        bool bold = false;
        if (highlighted_series) {
            for (const auto& l : st.highlight->labels) bold = bold || l.series == s.id;
        }
        out << "<path class=\"series line" << emphasis(st, s.id) << (bold ? " bold" : "") << "\" data-series=\""
            << esc(s.id) << "\" d=\"" << d << "\" fill=\"none\" stroke=\"" << esc(s.color) << "\" stroke-width=\""
            << (bold ? 4 : 2) << "\"/>\n";
    }
}

void area_marks(std::ostringstream& out, const ResolvedOverlay& o, const OverlayState& st) {
    for (const auto& s : o.series) {
        if (st.hidden_series.contains(s.id)) continue;
        std::string top;
        std::string bottom;
        for (auto it = s.points.begin(); it != s.points.end(); ++it) {
            auto ext = band_extent(o, s.id, it->x, st.hidden_series);
            if (!ext) continue;
            const double x = px(clip_x(o, it->x));
            top += (top.empty() ? "M" : " L") + num(x) + " " + num(py(clip_y(o, ext->second)));
        }
        for (auto it = s.points.rbegin(); it != s.points.rend(); ++it) {
            auto ext = band_extent(o, s.id, it->x, st.hidden_series);
            if (!ext) continue;
            bottom += " L" + num(px(clip_x(o, it->x))) + " " + num(py(clip_y(o, ext->first)));
        }
        out << "<path class=\"series area" << emphasis(st, s.id) << (outlined(st, s.id) ? " outline" : "")
            << "\" data-series=\"" << esc(s.id) << "\" d=\"" << top << bottom << " Z\" fill=\"" << esc(s.color)
            << "\"/>\n";
    }
}

void bar_marks_svg(std::ostringstream& out, const ResolvedOverlay& o, const OverlayState& st) {
    for (const auto& m : bar_marks(o, st.hidden_series)) {
        const std::string key = m.series + "#" + std::to_string(m.index);
        std::string band_key;
        if (!o.x.continuous() && m.index < o.x.bands.size()) band_key = o.x.bands[m.index];
        std::string emph = emphasis(st, m.series);
        if (emph.empty() && !band_key.empty()) emph = emphasis(st, band_key);
        out << "<rect class=\"bar" << emph << (outlined(st, key) || outlined(st, m.series) ? " outline" : "")
            << "\" data-series=\"" << esc(m.series) << "\" data-index=\"" << m.index << "\" x=\"" << num(px(m.rect.x))
            << "\" y=\"" << num(py(m.rect.y)) << "\" width=\"" << num(px(m.rect.width)) << "\" height=\""
            << num(py(m.rect.height)) << "\" fill=\"" << esc(color_of(o, m.series)) << "\"/>\n";
    }
}

void pie_marks(std::ostringstream& out, const ResolvedOverlay& o, const OverlayState& st) {
    const double cx = px(o.pie_center.x);
    const double cy = py(o.pie_center.y);
    const double r = py(o.pie_radius);
    auto at = [&](double deg) {
        const double rad = deg * std::numbers::pi / 180.0;
        return num(cx + r * std::sin(rad)) + " " + num(cy - r * std::cos(rad));
    };
    for (std::size_t i = 0; i < o.wedges.size(); ++i) {
        const auto& w = o.wedges[i];
        const double sweep = w.end_deg - w.start_deg;
        std::string d;
        if (sweep >= 359.999) {
            d = "M" + at(0) + " A" + num(r) + " " + num(r) + " 0 1 1 " + at(180) + " A" + num(r) + " " + num(r) +
                " 0 1 1 " + at(0) + " Z";
        } else {
            d = "M" + num(cx) + " " + num(cy) + " L" + at(w.start_deg) + " A" + num(r) + " " + num(r) + " 0 " +
                (sweep > 180.0 ? "1" : "0") + " 1 " + at(w.end_deg) + " Z";
        }
        const bool focus = st.wedge && *st.wedge == w.category;
        out << "<path class=\"wedge" << emphasis(st, w.category) << (focus ? " highlighted" : "")
            << (outlined(st, w.category + "#" + std::to_string(i)) || outlined(st, w.category) ? " outline" : "")
            << "\" data-category=\"" << esc(w.category) << "\" d=\"" << d << "\" fill=\""
            << esc(color_of(o, w.category)) << "\"/>\n";
    }
}

void legend_marks(std::ostringstream& out, const ResolvedOverlay& o, const OverlayState& st) {
    for (const auto& sw : o.swatches) {
        out << "<rect class=\"swatch" << emphasis(st, sw.category) << "\" data-category=\"" << esc(sw.category)
            << "\" x=\"" << num(px(sw.rect.x)) << "\" y=\"" << num(py(sw.rect.y)) << "\" width=\""
            << num(py(sw.rect.height)) << "\" height=\"" << num(py(sw.rect.height)) << "\" fill=\"" << esc(sw.color)
            << "\"/>\n";
        out << "<text class=\"swatch-label\" x=\"" << num(px(sw.rect.x) + py(sw.rect.height) * 1.3) << "\" y=\""
            << num(py(sw.rect.center().y)) << "\">" << esc(sw.category) << "</text>\n";
    }
}

void annotations(std::ostringstream& out, const ResolvedOverlay& o, const OverlayState& st) {
    if (st.aggregate && !st.aggregate->totals.empty()) {
        std::string d;
        for (const auto& p : st.aggregate->totals) {
            d += (d.empty() ? "M" : " L") + num(px(clip_x(o, p.x))) + " " + num(py(clip_y(o, p.y)));
        }
        const auto& last = st.aggregate->totals.back();
        const auto& first = st.aggregate->totals.front();
        d += " L" + num(px(clip_x(o, last.x))) + " " + num(py(clip_y(o, 0.0)));
        d += " L" + num(px(clip_x(o, first.x))) + " " + num(py(clip_y(o, 0.0))) + " Z";
        out << "<path class=\"total-band\" d=\"" << d << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"3\"/>\n";
    }
    if (st.highlight) {
        const auto& h = *st.highlight;
        out << "<line class=\"ref-line vertical" << (h.linked ? " linked" : "") << "\" data-hand=\""
            << to_string(h.hand) << "\" x1=\"" << num(px(h.screen_x)) << "\" y1=\"" << num(py(o.plot.y))
            << "\" x2=\"" << num(px(h.screen_x)) << "\" y2=\"" << num(py(o.plot.bottom())) << "\"/>\n";
        for (const auto& l : h.labels) {
            out << "<text class=\"value-label\" data-series=\"" << esc(l.series) << "\" x=\"" << num(px(h.screen_x) + 6)
                << "\" y=\"" << num(py(clip_y(o, l.y))) << "\">" << esc(l.series) << ": " << num(l.y) << "</text>\n";
        }
    }
    for (const auto& m : st.margin_refs) {
        out << "<line class=\"ref-line horizontal\" data-hand=\"" << to_string(m.hand) << "\" x1=\""
            << num(px(o.plot.x)) << "\" y1=\"" << num(py(m.screen_y)) << "\" x2=\"" << num(px(o.plot.right()))
            << "\" y2=\"" << num(py(m.screen_y)) << "\"/>\n";
        out << "<text class=\"value-label\" x=\"" << num(px(o.plot.right()) + 4) << "\" y=\"" << num(py(m.screen_y))
            << "\">" << num(m.value) << "</text>\n";
    }
    if (st.gradient) {
        out << "<circle class=\"palm-gradient\" data-hand=\"" << to_string(st.gradient->hand) << "\" cx=\""
            << num(px(st.gradient->center.x)) << "\" cy=\"" << num(py(st.gradient->center.y)) << "\" r=\""
            << num(py(st.gradient->radius)) << "\" fill=\"url(#palm-gradient)\"/>\n";
    }
}

} // namespace

std::string render_svg(const InteractionEngine& engine) {
    const RenderState rs = engine.render();
    const ResolvedScene& scene = engine.scene();
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgWidth << "\" height=\"" << kSvgHeight
        << "\" viewBox=\"0 0 " << kSvgWidth << " " << kSvgHeight << "\" data-scene=\"" << esc(rs.scene_id) << "\">\n";
    out << "<defs>\n<radialGradient id=\"palm-gradient\"><stop offset=\"0\" stop-color=\"#ffffff\" "
           "stop-opacity=\"0\"/><stop offset=\"1\" stop-color=\"#000000\" stop-opacity=\"0.5\"/></radialGradient>\n";
    out << "<filter id=\"grayscale\"><feColorMatrix type=\"saturate\" values=\"0\"/></filter>\n</defs>\n";
    out << "<rect class=\"background" << (rs.background.darken ? " darken" : "")
        << (rs.background.grayscale ? " grayscale" : "") << "\" x=\"0\" y=\"0\" width=\"" << kSvgWidth
        << "\" height=\"" << kSvgHeight << "\" fill=\"" << (rs.background.darken ? "#202020" : "#606060") << "\""
        << (rs.background.grayscale ? " filter=\"url(#grayscale)\"" : "") << "/>\n";

    std::vector<std::size_t> order(scene.overlays.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scene.overlays[a].spec->z_order < scene.overlays[b].spec->z_order;
    });
    for (std::size_t i : order) {
        const auto& o = scene.overlays[i];
        const OverlayState& st = rs.overlays.at(o.id());
        if (!st.visible) continue;
        out << "<g class=\"overlay " << to_string(o.kind()) << "\" id=\"overlay-" << esc(o.id()) << "\">\n";
        switch (o.kind()) {
        case ChartKind::Line: line_marks(out, o, st); break;
        case ChartKind::Area:
        case ChartKind::StackedArea: area_marks(out, o, st); break;
        case ChartKind::Bar:
        case ChartKind::StackedBar: bar_marks_svg(out, o, st); break;
        case ChartKind::Pie: pie_marks(out, o, st); break;
        case ChartKind::Legend: legend_marks(out, o, st); break;
        }
        annotations(out, o, st);
        out << "</g>\n";
    }

    for (const auto& c : rs.clones) {
        out << "<g class=\"clone\" data-overlay=\"" << esc(c.overlay) << "\" data-series=\"" << esc(c.series)
            << "\" data-kind=\"" << (c.kind == CloneKind::TransformPayload ? "transform" : "compare") << "\">"
            << "<rect x=\"" << num(px(c.position.x) - 24) << "\" y=\"" << num(py(c.position.y) - 16)
            << "\" width=\"48\" height=\"32\" fill-opacity=\"0.6\"/></g>\n";
    }
    for (const auto& m : rs.markers) {
        out << "<circle class=\"marker" << (m.pinching ? " pinching" : "") << "\" data-hand=\"" << to_string(m.hand)
            << "\" cx=\"" << num(px(m.index.x)) << "\" cy=\"" << num(py(m.index.y)) << "\" r=\"10\" fill=\""
            << (m.pinching ? "#ff3b30" : "#ffffff") << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace chirono
