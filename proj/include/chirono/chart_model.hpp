#pragma once

#include "chirono/geometry.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace chirono {

// ---------------------------------------------------------------------------
// Declarative model (as loaded from the scene file)

enum class ChartKind : std::uint8_t { Bar, StackedBar, Line, Area, StackedArea, Pie, Legend };
enum class ScaleKind : std::uint8_t { Linear, Temporal, Band };
enum class ColumnType : std::uint8_t { Temporal, Number, Category };

std::string_view to_string(ChartKind k);
std::optional<ChartKind> parse_chart_kind(std::string_view s);

using Cell = std::variant<std::monostate, double, std::string>;

struct DataTable {
    std::vector<std::string> columns;
    std::vector<ColumnType> types;
    std::vector<std::vector<Cell>> rows;

    [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;
};

struct Margins {
    double left = 0.1;
    double right = 0.1;
    double top = 0.1;
    double bottom = 0.1;
};

struct IntervalRegion {
    std::string label;
    double lo = 0.0;
    double hi = 0.0;
};

using Domain = std::pair<double, double>;

struct ChartSpec {
    ChartKind kind = ChartKind::Line;
    std::string table;
    std::string x_field;
    ScaleKind x_scale = ScaleKind::Linear;
    std::vector<std::string> y_fields;
    std::string category_field;
    std::vector<std::pair<std::string, std::string>> colors; // ordered category -> color
    std::vector<std::string> categories;                     // Legend entries when no table
    Margins margins;
    std::optional<std::string> shared_domain_id;
    std::optional<std::string> category_domain_id;
    std::vector<IntervalRegion> interval_regions;
    std::set<std::string> hidden_series;
    std::optional<Domain> x_domain;
    std::optional<Domain> y_domain;
};

enum class TransitionStyle : std::uint8_t { Fade, Translate };
enum class Direction : std::uint8_t { Left, Right, Up, Down };

std::string_view to_string(TransitionStyle s);
std::string_view to_string(Direction d);

struct OverlaySpec {
    std::string id;
    ChartSpec chart;
    Rect frame;
    bool visible = true;
    bool interactive = true;
    int z_order = 0;
    TransitionStyle enter_style = TransitionStyle::Fade;
    TransitionStyle exit_style = TransitionStyle::Fade;
    Direction enter_from = Direction::Right;
    Direction exit_to = Direction::Left;
};

struct Background {
    bool darken = false;
    bool grayscale = false;
};

struct MultiplyBinding {
    std::string source;
    std::string target;
};

struct SceneSpec {
    std::string id;
    std::vector<OverlaySpec> overlays;
    Background background;
    std::vector<MultiplyBinding> bindings;
    std::int64_t transition_ms = 500;

    [[nodiscard]] const OverlaySpec* overlay(std::string_view id) const;
};

struct Deck {
    std::vector<SceneSpec> scenes;
    std::map<std::string, DataTable> tables;
    double aspect = 16.0 / 9.0; // screen width / height
    std::string source_hash;    // SHA-256 hex of the scene file bytes, when loaded from disk
};

/// Parses and validates a scene document. Throws Error on any invariant
/// violation (InvalidScene, UnsortedData, DegenerateDomain).
Deck parse_deck(std::string_view json_text, const std::string& base_dir = ".");
Deck load_deck(const std::string& path);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::string& path);

// ---------------------------------------------------------------------------
// Resolved geometry

struct SeriesPoint {
    double x = 0.0; // domain value, or band index for band scales
    double y = 0.0;

    friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

struct Series {
    std::string id;
    std::string color;
    std::vector<SeriesPoint> points;
};

/// Affine map between a domain interval and a screen interval.
struct LinearScale {
    double d0 = 0.0;
    double d1 = 1.0;
    double r0 = 0.0;
    double r1 = 1.0;

    [[nodiscard]] double apply(double v) const { return r0 + (v - d0) / (d1 - d0) * (r1 - r0); }
    [[nodiscard]] double invert(double s) const { return d0 + (s - r0) / (r1 - r0) * (d1 - d0); }
};

struct XAxis {
    ScaleKind kind = ScaleKind::Linear;
    LinearScale scale;               // continuous kinds
    std::vector<std::string> bands;  // band kind
    double range0 = 0.0;
    double range1 = 1.0;

    [[nodiscard]] bool continuous() const { return kind != ScaleKind::Band; }
    [[nodiscard]] double position(double x) const;
    [[nodiscard]] double band_width() const;
    [[nodiscard]] std::size_t nearest_band(double screen_x) const;
};

struct Wedge {
    std::string category;
    double value = 0.0;
    double start_deg = 0.0; // clockwise from 12 o'clock, [start, end)
    double end_deg = 0.0;
};

struct Swatch {
    std::string category;
    std::string color;
    Rect rect;
};

enum class RegionTag : std::uint8_t {
    Interior,
    LeftMargin,
    RightMargin,
    TopMargin,
    BottomMargin,
    BottomLeftCorner,
    BottomRightCorner,
    LegendSwatch,
    PieWedge,
    Outside,
};

std::string_view to_string(RegionTag t);

struct Region {
    RegionTag tag = RegionTag::Outside;
    std::string overlay_id;
    std::string category; // LegendSwatch / PieWedge
    int overlay_index = -1;

    friend bool operator==(const Region&, const Region&) = default;
};

struct ResolvedOverlay {
    const OverlaySpec* spec = nullptr;
    double aspect = 16.0 / 9.0;
    Rect frame;
    Rect plot;
    std::vector<Series> series;
    XAxis x;
    LinearScale y;
    Domain full_x{0.0, 1.0};
    Domain y_domain{0.0, 1.0};

    std::vector<Wedge> wedges;
    Point2 pie_center;
    double pie_radius = 0.0; // in screen-height units
    std::vector<Swatch> swatches;

    [[nodiscard]] const std::string& id() const { return spec->id; }
    [[nodiscard]] ChartKind kind() const { return spec->chart.kind; }
    [[nodiscard]] bool rectilinear() const;
    [[nodiscard]] bool stacked() const;
    [[nodiscard]] Domain visible_x() const { return {x.scale.d0, x.scale.d1}; }
    [[nodiscard]] const Series* find_series(std::string_view id) const;

    /// Throws Error(NonInvertibleScale) for band scales.
    [[nodiscard]] double invert_x(double screen_x) const;
    [[nodiscard]] double invert_y(double screen_y) const { return y.invert(screen_y); }
    [[nodiscard]] double apply_y(double v) const { return y.apply(v); }

    void set_visible_x(Domain d);
    /// Replaces series data and re-resolves the y scale.
    void set_series(std::vector<Series> series);
};

/// Resolves scales and mark geometry from the overlay declaration and tables.
ResolvedOverlay resolve_geometry(const OverlaySpec& spec, const Deck& deck);

struct ResolvedScene {
    const SceneSpec* spec = nullptr;
    std::vector<ResolvedOverlay> overlays;

    [[nodiscard]] int find(std::string_view id) const;
};

ResolvedScene resolve_scene(const SceneSpec& spec, const Deck& deck);

/// Region of p relative to one overlay, regardless of interactivity.
Region classify_in_overlay(const ResolvedOverlay& overlay, Point2 p);

/// Region within the topmost visible, interactive overlay containing p.
Region classify_point(const ResolvedScene& scene, Point2 p);

/// Pie angle of p around center, degrees clockwise from 12 o'clock in [0, 360).
double pie_angle(Point2 center, Point2 p, double aspect);
/// Index of the wedge whose [start, end) contains angle, or -1.
int wedge_at_angle(const std::vector<Wedge>& wedges, double angle_deg);

/// Sorted union of x keys over the given series.
std::vector<double> x_keys(const ResolvedOverlay& overlay, const std::set<std::string>& hidden);

/// Nearest key to v; equidistant neighbours resolve to the larger key.
std::size_t nearest_key(const std::vector<double>& sorted_keys, double v);

/// Vertical extent [lo, hi] (domain units) of a series at x, with stacking
/// over the series not in hidden. Empty when x lies outside the series.
std::optional<Domain> band_extent(const ResolvedOverlay& overlay, std::string_view series_id, double x,
                                  const std::set<std::string>& hidden);

struct BarMark {
    std::string series;
    std::size_t index = 0;
    Rect rect;
};

std::vector<BarMark> bar_marks(const ResolvedOverlay& overlay, const std::set<std::string>& hidden);

} // namespace chirono
