#include "chirono/chart_model.hpp"
#include "chirono/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace chirono {

std::string_view to_string(ChartKind k) {
    switch (k) {
    case ChartKind::Bar: return "bar";
    case ChartKind::StackedBar: return "stacked_bar";
    case ChartKind::Line: return "line";
    case ChartKind::Area: return "area";
    case ChartKind::StackedArea: return "stacked_area";
    case ChartKind::Pie: return "pie";
    case ChartKind::Legend: return "legend";
    }
    return "?";
}

std::optional<ChartKind> parse_chart_kind(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(ChartKind::Legend); ++i) {
        auto k = static_cast<ChartKind>(i);
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

std::string_view to_string(TransitionStyle s) { return s == TransitionStyle::Fade ? "fade" : "translate"; }

std::string_view to_string(Direction d) {
    switch (d) {
    case Direction::Left: return "left";
    case Direction::Right: return "right";
    case Direction::Up: return "up";
    case Direction::Down: return "down";
    }
    return "?";
}

std::string_view to_string(RegionTag t) {
    switch (t) {
    case RegionTag::Interior: return "Interior";
    case RegionTag::LeftMargin: return "LeftMargin";
    case RegionTag::RightMargin: return "RightMargin";
    case RegionTag::TopMargin: return "TopMargin";
    case RegionTag::BottomMargin: return "BottomMargin";
    case RegionTag::BottomLeftCorner: return "BottomLeftCorner";
    case RegionTag::BottomRightCorner: return "BottomRightCorner";
    case RegionTag::LegendSwatch: return "LegendSwatch";
    case RegionTag::PieWedge: return "PieWedge";
    case RegionTag::Outside: return "Outside";
    }
    return "?";
}

std::optional<std::size_t> DataTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    return std::nullopt;
}

const OverlaySpec* SceneSpec::overlay(std::string_view oid) const {
    for (const auto& o : overlays) {
        if (o.id == oid) return &o;
    }
    return nullptr;
}

int ResolvedScene::find(std::string_view oid) const {
    for (std::size_t i = 0; i < overlays.size(); ++i) {
        if (overlays[i].id() == oid) return static_cast<int>(i);
    }
    return -1;
}

namespace {

constexpr std::array<const char*, 10> kPalette{"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2",
                                               "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

std::string color_for(const ChartSpec& chart, const std::string& key, std::size_t ordinal) {
    for (const auto& [cat, color] : chart.colors) {
        if (cat == key) return color;
    }
    return kPalette[ordinal % kPalette.size()];
}

std::string cell_label(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) {
        if (std::floor(*d) == *d && std::abs(*d) < 1e15) return std::to_string(static_cast<long long>(*d));
        return std::to_string(*d);
    }
    return {};
}

double cell_number(const Cell& c, const std::string& what) {
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (std::holds_alternative<std::monostate>(c)) throw Error(Errc::InvalidScene, "missing value for " + what);
    throw Error(Errc::InvalidScene, "non-numeric value for " + what);
}

const DataTable& table_for(const OverlaySpec& spec, const Deck& deck) {
    auto it = deck.tables.find(spec.chart.table);
    if (it == deck.tables.end()) {
        throw Error(Errc::InvalidScene, "overlay '" + spec.id + "' references unknown table '" + spec.chart.table + "'");
    }
    return it->second;
}

std::size_t require_column(const DataTable& t, const std::string& name, const std::string& overlay) {
    auto c = t.column(name);
    if (!c) throw Error(Errc::InvalidScene, "overlay '" + overlay + "': unknown column '" + name + "'");
    return *c;
}

struct SeriesBuild {
    std::vector<Series> series;
    std::vector<std::string> bands;
};

SeriesBuild build_rectilinear(const OverlaySpec& spec, const DataTable& t) {
    const ChartSpec& c = spec.chart;
    if (c.y_fields.empty()) throw Error(Errc::InvalidScene, "overlay '" + spec.id + "' has no y_fields");
    const std::size_t xc = require_column(t, c.x_field, spec.id);
    const bool band = c.x_scale == ScaleKind::Band;
    if (!band && t.types[xc] == ColumnType::Category) {
        throw Error(Errc::InvalidScene, "overlay '" + spec.id + "': continuous x on a category column");
    }

    SeriesBuild out;
    auto band_index = [&](const Cell& cell) {
        const std::string label = cell_label(cell);
        auto it = std::find(out.bands.begin(), out.bands.end(), label);
        if (it != out.bands.end()) return static_cast<double>(it - out.bands.begin());
        out.bands.push_back(label);
        return static_cast<double>(out.bands.size() - 1);
    };
    auto x_of = [&](const std::vector<Cell>& row) {
        return band ? band_index(row[xc]) : cell_number(row[xc], spec.id + "." + c.x_field);
    };

    if (!c.category_field.empty() && c.y_fields.size() == 1) {
        const std::size_t cc = require_column(t, c.category_field, spec.id);
        const std::size_t yc = require_column(t, c.y_fields.front(), spec.id);
        std::vector<std::string> order;
        for (const auto& [cat, color] : c.colors) order.push_back(cat);
        for (const auto& row : t.rows) {
            const std::string cat = cell_label(row[cc]);
            if (std::find(order.begin(), order.end(), cat) == order.end()) order.push_back(cat);
        }
        for (std::size_t i = 0; i < order.size(); ++i) {
            out.series.push_back({order[i], color_for(c, order[i], i), {}});
        }
        for (const auto& row : t.rows) {
            const std::string cat = cell_label(row[cc]);
            auto it = std::find(order.begin(), order.end(), cat);
            auto& s = out.series[static_cast<std::size_t>(it - order.begin())];
            s.points.push_back({x_of(row), cell_number(row[yc], spec.id + "." + c.y_fields.front())});
        }
        std::erase_if(out.series, [](const Series& s) { return s.points.empty(); });
    } else {
        for (std::size_t i = 0; i < c.y_fields.size(); ++i) {
            const std::size_t yc = require_column(t, c.y_fields[i], spec.id);
            Series s{c.y_fields[i], color_for(c, c.y_fields[i], i), {}};
            for (const auto& row : t.rows) {
                s.points.push_back({x_of(row), cell_number(row[yc], spec.id + "." + c.y_fields[i])});
            }
            out.series.push_back(std::move(s));
        }
    }

    for (const auto& s : out.series) {
        for (std::size_t i = 1; i < s.points.size(); ++i) {
            if (!(s.points[i].x > s.points[i - 1].x)) {
                throw Error(Errc::UnsortedData, "overlay '" + spec.id + "' series '" + s.id +
                                                    "': x values must be strictly increasing");
            }
        }
    }
    return out;
}

Domain compute_y_domain(const ResolvedOverlay& o) {
    double lo = 0.0;
    double hi = 0.0;
    if (o.stacked()) {
        std::map<double, double> pos;
        std::map<double, double> neg;
        for (const auto& s : o.series) {
            for (const auto& p : s.points) (p.y >= 0 ? pos : neg)[p.x] += p.y;
        }
        for (const auto& [x, v] : pos) hi = std::max(hi, v);
        for (const auto& [x, v] : neg) lo = std::min(lo, v);
    } else {
        for (const auto& s : o.series) {
            for (const auto& p : s.points) {
                lo = std::min(lo, p.y);
                hi = std::max(hi, p.y);
            }
        }
    }
    return {lo, hi};
}

void check_domain(const Domain& d, const std::string& what) {
    if (!(d.second - d.first > 0.0) || !std::isfinite(d.first) || !std::isfinite(d.second)) {
        throw Error(Errc::DegenerateDomain, what + " has zero extent");
    }
}

} // namespace

double XAxis::position(double x) const {
    if (continuous()) return scale.apply(x);
    return range0 + (x + 0.5) * band_width();
}

double XAxis::band_width() const {
    return bands.empty() ? 0.0 : (range1 - range0) / static_cast<double>(bands.size());
}

std::size_t XAxis::nearest_band(double screen_x) const {
    if (bands.empty()) return 0;
    const double f = std::floor((screen_x - range0) / band_width());
    return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(bands.size() - 1)));
}

bool ResolvedOverlay::rectilinear() const {
    return kind() != ChartKind::Pie && kind() != ChartKind::Legend;
}

bool ResolvedOverlay::stacked() const {
    return kind() == ChartKind::StackedArea || kind() == ChartKind::StackedBar;
}

const Series* ResolvedOverlay::find_series(std::string_view sid) const {
    for (const auto& s : series) {
        if (s.id == sid) return &s;
    }
    return nullptr;
}

double ResolvedOverlay::invert_x(double screen_x) const {
    if (!x.continuous()) throw Error(Errc::NonInvertibleScale, "overlay '" + id() + "' has a band x scale");
    return x.scale.invert(screen_x);
}

void ResolvedOverlay::set_visible_x(Domain d) {
    x.scale.d0 = d.first;
    x.scale.d1 = d.second;
}

void ResolvedOverlay::set_series(std::vector<Series> s) {
    series = std::move(s);
    Domain d = compute_y_domain(*this);
    if (!(d.second > d.first)) d.second = d.first + 1.0;
    y_domain = d;
    y.d0 = d.first;
    y.d1 = d.second;
}

ResolvedOverlay resolve_geometry(const OverlaySpec& spec, const Deck& deck) {
    const ChartSpec& c = spec.chart;
    ResolvedOverlay o;
    o.spec = &spec;
    o.aspect = deck.aspect;
    o.frame = spec.frame;
    o.plot = {spec.frame.x + c.margins.left * spec.frame.width, spec.frame.y + c.margins.top * spec.frame.height,
              spec.frame.width * (1.0 - c.margins.left - c.margins.right),
              spec.frame.height * (1.0 - c.margins.top - c.margins.bottom)};
    if (!(o.plot.width > 0.0) || !(o.plot.height > 0.0)) {
        throw Error(Errc::InvalidScene, "overlay '" + spec.id + "': margins leave no plot interior");
    }
    o.x.range0 = o.plot.x;
    o.x.range1 = o.plot.right();
    o.x.kind = c.x_scale;

    if (c.kind == ChartKind::Legend) {
        std::vector<std::string> cats = c.categories;
        if (cats.empty()) {
            for (const auto& [cat, color] : c.colors) cats.push_back(cat);
        }
        if (cats.empty() && !c.table.empty() && !c.category_field.empty()) {
            const DataTable& t = table_for(spec, deck);
            const std::size_t cc = require_column(t, c.category_field, spec.id);
            for (const auto& row : t.rows) {
                std::string cat = cell_label(row[cc]);
                if (std::find(cats.begin(), cats.end(), cat) == cats.end()) cats.push_back(cat);
            }
        }
        const double h = o.plot.height / static_cast<double>(std::max<std::size_t>(cats.size(), 1));
        for (std::size_t i = 0; i < cats.size(); ++i) {
            o.swatches.push_back({cats[i], color_for(c, cats[i], i),
                                  {o.plot.x, o.plot.y + h * static_cast<double>(i), o.plot.width, h}});
        }
        return o;
    }

    const DataTable& t = table_for(spec, deck);

    if (c.kind == ChartKind::Pie) {
        if (c.category_field.empty() || c.y_fields.empty()) {
            throw Error(Errc::InvalidScene, "pie overlay '" + spec.id + "' needs category_field and y_fields");
        }
        const std::size_t cc = require_column(t, c.category_field, spec.id);
        const std::size_t yc = require_column(t, c.y_fields.front(), spec.id);
        double total = 0.0;
        for (const auto& row : t.rows) {
            Wedge w{cell_label(row[cc]), cell_number(row[yc], spec.id + "." + c.y_fields.front()), 0.0, 0.0};
            if (w.value < 0.0) throw Error(Errc::InvalidScene, "pie overlay '" + spec.id + "' has a negative value");
            for (const auto& other : o.wedges) {
                if (other.category == w.category) {
                    throw Error(Errc::InvalidScene, "pie overlay '" + spec.id + "' repeats category " + w.category);
                }
            }
            total += w.value;
            o.wedges.push_back(w);
        }
        if (!(total > 0.0)) throw Error(Errc::DegenerateDomain, "pie overlay '" + spec.id + "' sums to zero");
        double acc = 0.0;
        for (std::size_t i = 0; i < o.wedges.size(); ++i) {
            o.wedges[i].start_deg = 360.0 * acc / total;
            acc += o.wedges[i].value;
            o.wedges[i].end_deg = i + 1 == o.wedges.size() ? 360.0 : 360.0 * acc / total;
        }
        // Wedges double as series so category linkage and clones treat them uniformly.
        for (std::size_t i = 0; i < o.wedges.size(); ++i) {
            o.series.push_back({o.wedges[i].category, color_for(c, o.wedges[i].category, i),
                                {{static_cast<double>(i), o.wedges[i].value}}});
        }
        o.pie_center = o.plot.center();
        o.pie_radius = std::min(o.plot.width * o.aspect, o.plot.height) / 2.0;
        return o;
    }

    SeriesBuild built = build_rectilinear(spec, t);
    o.series = std::move(built.series);
    o.x.bands = std::move(built.bands);
    if (o.series.empty()) throw Error(Errc::DegenerateDomain, "overlay '" + spec.id + "' has no data");

    for (const auto& h : c.hidden_series) {
        if (!o.find_series(h)) {
            throw Error(Errc::InvalidScene, "overlay '" + spec.id + "' hides unknown series '" + h + "'");
        }
    }
    if (o.stacked()) {
        for (const auto& s : o.series) {
            bool same = s.points.size() == o.series.front().points.size();
            for (std::size_t i = 0; same && i < s.points.size(); ++i) {
                same = s.points[i].x == o.series.front().points[i].x;
            }
            if (!same) {
                throw Error(Errc::InvalidScene, "stacked overlay '" + spec.id + "': series must share x keys");
            }
        }
    }

    if (o.x.continuous()) {
        Domain d{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
        double min_step = std::numeric_limits<double>::infinity();
        for (const auto& s : o.series) {
            for (std::size_t i = 0; i < s.points.size(); ++i) {
                d.first = std::min(d.first, s.points[i].x);
                d.second = std::max(d.second, s.points[i].x);
                if (i > 0) min_step = std::min(min_step, s.points[i].x - s.points[i - 1].x);
            }
        }
        if (c.x_domain) {
            d = *c.x_domain;
        } else if (c.kind == ChartKind::Bar || c.kind == ChartKind::StackedBar) {
            const double pad = std::isfinite(min_step) ? min_step / 2.0 : 0.5;
            d = {d.first - pad, d.second + pad};
        }
        check_domain(d, "overlay '" + spec.id + "' x domain");
        o.full_x = d;
        o.x.scale = {d.first, d.second, o.plot.x, o.plot.right()};
    } else {
        o.full_x = {0.0, static_cast<double>(o.x.bands.size())};
        o.x.scale = {0.0, static_cast<double>(o.x.bands.size()), o.plot.x, o.plot.right()};
    }

    Domain yd = c.y_domain ? *c.y_domain : compute_y_domain(o);
    check_domain(yd, "overlay '" + spec.id + "' y domain");
    o.y_domain = yd;
    o.y = {yd.first, yd.second, o.plot.bottom(), o.plot.y};
    return o;
}

ResolvedScene resolve_scene(const SceneSpec& spec, const Deck& deck) {
    ResolvedScene scene;
    scene.spec = &spec;
    for (const auto& o : spec.overlays) scene.overlays.push_back(resolve_geometry(o, deck));
    return scene;
}

double pie_angle(Point2 center, Point2 p, double aspect) {
    const double dx = (p.x - center.x) * aspect;
    const double dy = p.y - center.y;
    double deg = std::atan2(dx, -dy) * 180.0 / std::numbers::pi;
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg -= 360.0;
    return deg;
}

int wedge_at_angle(const std::vector<Wedge>& wedges, double angle_deg) {
    for (std::size_t i = 0; i < wedges.size(); ++i) {
        if (angle_deg >= wedges[i].start_deg && angle_deg < wedges[i].end_deg) return static_cast<int>(i);
    }
    return -1;
}

Region classify_in_overlay(const ResolvedOverlay& o, Point2 p) {
    Region r;
    r.overlay_id = o.id();
    if (!o.frame.contains(p)) return r;

    enum { Low, Mid, High };
    const int col = p.x < o.plot.x ? Low : p.x > o.plot.right() ? High : Mid;
    const int row = p.y < o.plot.y ? Low : p.y > o.plot.bottom() ? High : Mid;

    if (row == Low) {
        r.tag = RegionTag::TopMargin;
    } else if (row == High) {
        r.tag = col == Low ? RegionTag::BottomLeftCorner : col == High ? RegionTag::BottomRightCorner : RegionTag::BottomMargin;
    } else if (col == Low) {
        r.tag = RegionTag::LeftMargin;
    } else if (col == High) {
        r.tag = RegionTag::RightMargin;
    } else {
        r.tag = RegionTag::Interior;
        if (o.kind() == ChartKind::Legend && !o.swatches.empty()) {
            const double h = o.plot.height / static_cast<double>(o.swatches.size());
            const double f = std::floor((p.y - o.plot.y) / h);
            const auto i = static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(o.swatches.size() - 1)));
            r.tag = RegionTag::LegendSwatch;
            r.category = o.swatches[i].category;
        } else if (o.kind() == ChartKind::Pie) {
            const double dx = (p.x - o.pie_center.x) * o.aspect;
            const double dy = p.y - o.pie_center.y;
            if (std::hypot(dx, dy) <= o.pie_radius) {
                const int w = wedge_at_angle(o.wedges, pie_angle(o.pie_center, p, o.aspect));
                if (w >= 0) {
                    r.tag = RegionTag::PieWedge;
                    r.category = o.wedges[static_cast<std::size_t>(w)].category;
                }
            }
        }
    }
    return r;
}

Region classify_point(const ResolvedScene& scene, Point2 p) {
    int best = -1;
    for (std::size_t i = 0; i < scene.overlays.size(); ++i) {
        const auto& o = scene.overlays[i];
        if (!o.spec->visible || !o.spec->interactive || !o.frame.contains(p)) continue;
        if (best < 0 || o.spec->z_order >= scene.overlays[static_cast<std::size_t>(best)].spec->z_order) {
            best = static_cast<int>(i);
        }
    }
    if (best < 0) return {};
    Region r = classify_in_overlay(scene.overlays[static_cast<std::size_t>(best)], p);
    r.overlay_index = best;
    return r;
}

std::vector<double> x_keys(const ResolvedOverlay& o, const std::set<std::string>& hidden) {
    std::vector<double> keys;
    for (const auto& s : o.series) {
        if (hidden.contains(s.id)) continue;
        for (const auto& p : s.points) keys.push_back(p.x);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

std::size_t nearest_key(const std::vector<double>& keys, double v) {
    auto it = std::lower_bound(keys.begin(), keys.end(), v);
    if (it == keys.begin()) return 0;
    if (it == keys.end()) return keys.size() - 1;
    const auto i = static_cast<std::size_t>(it - keys.begin());
    return (v - keys[i - 1] < keys[i] - v) ? i - 1 : i;
}

namespace {

std::optional<double> interpolate(const Series& s, double x) {
    if (s.points.empty() || x < s.points.front().x || x > s.points.back().x) return std::nullopt;
    auto it = std::lower_bound(s.points.begin(), s.points.end(), x,
                               [](const SeriesPoint& p, double v) { return p.x < v; });
    if (it->x == x) return it->y;
    const auto& b = *it;
    const auto& a = *(it - 1);
    return a.y + (x - a.x) / (b.x - a.x) * (b.y - a.y);
}

} // namespace

std::optional<Domain> band_extent(const ResolvedOverlay& o, std::string_view series_id, double x,
                                  const std::set<std::string>& hidden) {
    double base = 0.0;
    for (const auto& s : o.series) {
        if (s.id == series_id) {
            auto v = interpolate(s, x);
            if (!v) return std::nullopt;
            const double top = base + *v;
            return Domain{std::min(base, top), std::max(base, top)};
        }
        if (o.stacked() && !hidden.contains(s.id)) base += interpolate(s, x).value_or(0.0);
    }
    return std::nullopt;
}

std::vector<BarMark> bar_marks(const ResolvedOverlay& o, const std::set<std::string>& hidden) {
    std::vector<BarMark> marks;
    if (o.kind() != ChartKind::Bar && o.kind() != ChartKind::StackedBar) return marks;
    std::vector<const Series*> visible;
    for (const auto& s : o.series) {
        if (!hidden.contains(s.id)) visible.push_back(&s);
    }
    if (visible.empty()) return marks;

    double slot = 0.0;
    if (!o.x.continuous()) {
        slot = o.x.band_width() * 0.8;
    } else {
        const auto keys = x_keys(o, hidden);
        double step = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < keys.size(); ++i) {
            step = std::min(step, std::abs(o.x.position(keys[i]) - o.x.position(keys[i - 1])));
        }
        slot = std::isfinite(step) ? step * 0.8 : o.plot.width * 0.1;
    }

    std::map<double, double> stack_base;
    const double m = static_cast<double>(visible.size());
    for (std::size_t j = 0; j < visible.size(); ++j) {
        const Series& s = *visible[j];
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            const auto& p = s.points[i];
            const double cx = o.x.position(p.x);
            if (cx < o.plot.x - 1e-12 || cx > o.plot.right() + 1e-12) continue;
            double lo = 0.0;
            double hi = p.y;
            double left = cx - slot / 2.0;
            double width = slot;
            if (o.stacked()) {
                lo = stack_base[p.x];
                hi = lo + p.y;
                stack_base[p.x] = hi;
            } else {
                width = slot / m;
                left += width * static_cast<double>(j);
            }
            const double y0 = o.apply_y(std::max(lo, hi));
            const double y1 = o.apply_y(std::min(lo, hi));
            marks.push_back({s.id, i, {left, y0, width, y1 - y0}});
        }
    }
    return marks;
}

} // namespace chirono
