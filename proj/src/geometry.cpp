#include "chirono/geometry.hpp"
#include "chirono/error.hpp"

#include <algorithm>
#include <cmath>

namespace chirono {

std::string_view to_string(Errc code) {
    switch (code) {
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::EmptyHandSet: return "EmptyHandSet";
    case Errc::InvalidScene: return "InvalidScene";
    case Errc::DegenerateDomain: return "DegenerateDomain";
    case Errc::UnsortedData: return "UnsortedData";
    case Errc::NonInvertibleScale: return "NonInvertibleScale";
    case Errc::MalformedMessage: return "MalformedMessage";
    case Errc::SecondPresenter: return "SecondPresenter";
    case Errc::MalformedTrace: return "MalformedTrace";
    case Errc::SceneHashMismatch: return "SceneHashMismatch";
    case Errc::TimestampOutOfRange: return "TimestampOutOfRange";
    case Errc::MissingGolden: return "MissingGolden";
    case Errc::Io: return "Io";
    }
    return "Unknown";
}

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point2 clamp_unit(Point2 p) { return {std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0)}; }

std::string_view to_string(Hand h) { return h == Hand::Right ? "Right" : "Left"; }

std::optional<Hand> parse_hand(std::string_view s) {
    if (s == "Right") return Hand::Right;
    if (s == "Left") return Hand::Left;
    return std::nullopt;
}

} // namespace chirono
