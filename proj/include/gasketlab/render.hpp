#pragma once

#include <array>
#include <cstdio>
#include <string>

#include "gasketlab/geometry.hpp"

namespace gasketlab {

struct RenderOptions {
  bool color_blocks = false;
  double width = 800.0;
  double margin = 10.0;
};

namespace detail {

inline std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                     "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace detail

/// All depth-k cylinder triangles as an SVG document. With color_blocks each
/// triangle is filled by the horizontal block of its first symbol.
inline std::string render_svg(const GasketSpec& spec, std::size_t depth, const RenderOptions& opt = {}) {
  const double scale = opt.width - 2 * opt.margin;
  const double height = scale * 0.8660254037844386 + 2 * opt.margin;
  auto px = [&](const ObliquePoint& z) {
    const auto [x, y] = cartesian(z);
    return detail::fmt_coord(opt.margin + x * scale) + "," + detail::fmt_coord(height - opt.margin - y * scale);
  };
  const auto idx = block_index(horizontal_blocks(spec), spec.size());

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt_coord(opt.width) + "\" height=\"" +
         detail::fmt_coord(height) + "\" viewBox=\"0 0 " + detail::fmt_coord(opt.width) + " " +
         detail::fmt_coord(height) + "\">\n";
  const Triangle unit{{Frac(0), Frac(0)}, Frac(1)};
  out += "  <polygon points=\"" + px(unit.vertex(Role::A)) + " " + px(unit.vertex(Role::B)) + " " +
         px(unit.vertex(Role::G)) + "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";
  for (const Word& w : words_of_length(spec.size(), depth)) {
    const Triangle t = cylinder(spec, w);
    std::string fill = "#333333";
    if (opt.color_blocks && !w.empty()) {
      const int b = idx[static_cast<std::size_t>(w.front())];
      fill = detail::kPalette[static_cast<std::size_t>(b) % detail::kPalette.size()];
    }
    out += "  <polygon points=\"" + px(t.vertex(Role::A)) + " " + px(t.vertex(Role::B)) + " " +
           px(t.vertex(Role::G)) + "\" class=\"cell\" fill=\"" + fill + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace gasketlab
