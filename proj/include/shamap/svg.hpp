#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>

#include "shamap/dataset.hpp"
#include "shamap/error.hpp"
#include "shamap/matrix.hpp"

namespace shamap {

struct SvgOptions {
  int width = 640;
  int height = 480;
  double marker = 3.0;
  std::string title;
};

namespace detail {

// Label colors. Slot 0 is blue and slot 1 is red; further labels cycle.
inline constexpr std::array<std::string_view, 20> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ff9896", "#98df8a", "#ffbb78", "#c5b0d5",
    "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5"};

inline std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

// Scatter plot of the first two embedding coordinates. Even labels draw as
// circles, odd labels as crosses; color comes from a 20-slot palette keyed
// by label. Output is plain deterministic text: fixed attribute order and
// two-decimal coordinates.
inline std::string scatter_svg(const Matrix& coords,
                               const LabelSet* labels = nullptr,
                               const SvgOptions& opts = {}) {
  if (coords.cols() < 2)
    throw std::invalid_argument("scatter_svg: need at least 2 coordinates");
  const std::size_t n = coords.rows();
  if (n == 0) throw std::invalid_argument("scatter_svg: no points");
  if (labels && labels->size() != n)
    throw std::invalid_argument("scatter_svg: label count mismatch");

  double xmin = coords(0, 0), xmax = xmin, ymin = coords(0, 1), ymax = ymin;
  for (std::size_t i = 1; i < n; ++i) {
    xmin = std::min(xmin, coords(i, 0));
    xmax = std::max(xmax, coords(i, 0));
    ymin = std::min(ymin, coords(i, 1));
    ymax = std::max(ymax, coords(i, 1));
  }
  if (xmax - xmin == 0.0) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin == 0.0) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double mx = 0.05 * opts.width, my = 0.05 * opts.height;
  const double pw = opts.width - 2.0 * mx, ph = opts.height - 2.0 * my;
  auto px = [&](double x) { return mx + (x - xmin) / (xmax - xmin) * pw; };
  // SVG y grows downward, data y grows upward.
  auto py = [&](double y) { return my + (ymax - y) / (ymax - ymin) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(opts.width) + "\" height=\"" +
         std::to_string(opts.height) + "\" viewBox=\"0 0 " +
         std::to_string(opts.width) + " " + std::to_string(opts.height) +
         "\">\n";
  out += "<rect x=\"" + detail::fmt2(mx) + "\" y=\"" + detail::fmt2(my) +
         "\" width=\"" + detail::fmt2(pw) + "\" height=\"" + detail::fmt2(ph) +
         "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  if (!opts.title.empty())
    out += "<text x=\"" + detail::fmt2(opts.width / 2.0) + "\" y=\"" +
           detail::fmt2(my * 0.75) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
           opts.title + "</text>\n";

  const double r = opts.marker;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = labels ? (*labels)[i] : 0;
    const int slot = ((label % 20) + 20) % 20;
    const std::string_view color = detail::kPalette[slot];
    const double cx = px(coords(i, 0)), cy = py(coords(i, 1));
    if (((label % 2) + 2) % 2 == 0) {
      out += "<circle class=\"pt\" cx=\"" + detail::fmt2(cx) + "\" cy=\"" +
             detail::fmt2(cy) + "\" r=\"" + detail::fmt2(r) + "\" fill=\"" +
             std::string(color) + "\"/>\n";
    } else {
      out += "<path class=\"pt\" d=\"M" + detail::fmt2(cx - r) + " " +
             detail::fmt2(cy - r) + "L" + detail::fmt2(cx + r) + " " +
             detail::fmt2(cy + r) + "M" + detail::fmt2(cx - r) + " " +
             detail::fmt2(cy + r) + "L" + detail::fmt2(cx + r) + " " +
             detail::fmt2(cy - r) + "\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.5\" fill=\"none\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw FormatError("write failed: " + path);
}

}  // namespace shamap
