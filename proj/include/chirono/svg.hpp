#pragma once

#include "chirono/interaction_engine.hpp"

#include <string>

namespace chirono {

inline constexpr double kSvgWidth = 1280.0;
inline constexpr double kSvgHeight = 720.0;

/// Self-contained SVG of the engine's current picture. Element order
/// follows overlay z order, then declaration order, so output diffs well.
std::string render_svg(const InteractionEngine& engine);

} // namespace chirono
