#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "pcurve/chain.hpp"
#include "pcurve/construction.hpp"

namespace pcurve {

struct RenderOptions {
  double width = 800.0;  // pixels; height follows the aspect ratio
  double margin = 20.0;
  bool outer_chain = true;
  // Shade the admissible band of every wedge for this alpha.
  std::optional<double> band_alpha;
  std::string title;
};

// Root triangle, inner chain (solid), outer chain (dashed) and optional
// bands. Output depends only on the inputs.
std::string render_svg(const InscribedChainPair& snapshot, const RenderOptions& options = {});

// Circle, tangent-chord triangles and the glued curve.
std::string render_theorem_svg(const TheoremResult& result, Point center, double radius,
                               const RenderOptions& options = {});

// Throws std::runtime_error if the path cannot be written.
void write_svg(const std::string& svg, const std::filesystem::path& path);

}  // namespace pcurve
