#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace chirono {

/// Normalized screen position. Origin top-left, x rightward as the presenter
/// sees themselves, both axes in [0,1] after ingestion.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }

double distance(Point2 a, Point2 b);
Point2 clamp_unit(Point2 p);

struct Rect {
    double x = 0.0;
    double y = 0.0;
    double width = 0.0;
    double height = 0.0;

    [[nodiscard]] double right() const { return x + width; }
    [[nodiscard]] double bottom() const { return y + height; }
    [[nodiscard]] Point2 center() const { return {x + width / 2.0, y + height / 2.0}; }
    // Closed on all sides.
    [[nodiscard]] bool contains(Point2 p) const {
        return p.x >= x && p.x <= right() && p.y >= y && p.y <= bottom();
    }

    friend bool operator==(const Rect&, const Rect&) = default;
};

// Right sorts first: it is the canonical order for simultaneous events.
enum class Hand : std::uint8_t { Right = 0, Left = 1 };

inline constexpr std::array<Hand, 2> kHands{Hand::Right, Hand::Left};

inline Hand opposite(Hand h) { return h == Hand::Right ? Hand::Left : Hand::Right; }
inline std::size_t index_of(Hand h) { return static_cast<std::size_t>(h); }

std::string_view to_string(Hand h);
std::optional<Hand> parse_hand(std::string_view s);

} // namespace chirono
