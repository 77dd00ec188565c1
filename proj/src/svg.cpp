#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "sdg/pipeline.hpp"

namespace sdg {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
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

}  // namespace

std::string error_bar_svg(std::span<const PlotPoint> points, std::string_view title,
                          std::string_view x_label, std::string_view y_label,
                          const ParamRecord* params) {
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  if (!points.empty()) {
    x_lo = x_hi = points.front().x;
    y_lo = std::min(0.0, points.front().mean - points.front().sd);
    y_hi = std::max(1.0, points.front().mean + points.front().sd);
    for (const PlotPoint& p : points) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      y_lo = std::min(y_lo, p.mean - p.sd);
      y_hi = std::max(y_hi, p.mean + p.sd);
    }
    if (x_hi == x_lo) {
      x_lo -= 0.5;
      x_hi += 0.5;
    }
  }
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto sy = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (params) {
    std::string body = params->to_toml();
    // "--" is not allowed inside XML comments.
    for (std::size_t at; (at = body.find("--")) != std::string::npos;) body.replace(at, 2, "- -");
    svg += "<!--\n" + body + "-->\n";
  }
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fixed(kWidth) +
         "\" height=\"" + fixed(kHeight) + "\" viewBox=\"0 0 " + fixed(kWidth) + " " +
         fixed(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fixed(kWidth) + "\" height=\"" + fixed(kHeight) +
         "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         escape(title) + "</text>\n";

  // axes and ticks
  svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(kTop + plot_h) + "\" x2=\"" +
         fixed(kLeft + plot_w) + "\" y2=\"" + fixed(kTop + plot_h) + "\"/>\n";
  svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(kTop) + "\" x2=\"" + fixed(kLeft) +
         "\" y2=\"" + fixed(kTop + plot_h) + "\"/>\n";
  svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const double xv = x_lo + (x_hi - x_lo) * t / kTicks;
    const double yv = y_lo + (y_hi - y_lo) * t / kTicks;
    svg += "<line x1=\"" + fixed(sx(xv)) + "\" y1=\"" + fixed(kTop + plot_h) + "\" x2=\"" +
           fixed(sx(xv)) + "\" y2=\"" + fixed(kTop + plot_h + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed(sx(xv)) + "\" y=\"" + fixed(kTop + plot_h + 20) +
           "\" text-anchor=\"middle\">" + tick_label(xv) + "</text>\n";
    svg += "<line x1=\"" + fixed(kLeft - 5) + "\" y1=\"" + fixed(sy(yv)) + "\" x2=\"" +
           fixed(kLeft) + "\" y2=\"" + fixed(sy(yv)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed(kLeft - 8) + "\" y=\"" + fixed(sy(yv) + 4) +
           "\" text-anchor=\"end\">" + tick_label(yv) + "</text>\n";
  }
  svg += "<text x=\"" + fixed(kLeft + plot_w / 2) + "\" y=\"" + fixed(kHeight - 15) +
         "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fixed(kTop + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fixed(kTop + plot_h / 2) + ")\">" + escape(y_label) + "</text>\n";
  svg += "</g>\n";

  if (!points.empty()) {
    std::string path;
    for (const PlotPoint& p : points) {
      path += (path.empty() ? "M" : " L") + fixed(sx(p.x)) + " " + fixed(sy(p.mean));
    }
    svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
    svg += "<g stroke=\"#1f77b4\" stroke-width=\"1.5\">\n";
    for (const PlotPoint& p : points) {
      const double x = sx(p.x);
      const double lo = sy(p.mean - p.sd);
      const double hi = sy(p.mean + p.sd);
      svg += "<line x1=\"" + fixed(x) + "\" y1=\"" + fixed(lo) + "\" x2=\"" + fixed(x) +
             "\" y2=\"" + fixed(hi) + "\"/>\n";
      svg += "<line x1=\"" + fixed(x - 4) + "\" y1=\"" + fixed(lo) + "\" x2=\"" + fixed(x + 4) +
             "\" y2=\"" + fixed(lo) + "\"/>\n";
      svg += "<line x1=\"" + fixed(x - 4) + "\" y1=\"" + fixed(hi) + "\" x2=\"" + fixed(x + 4) +
             "\" y2=\"" + fixed(hi) + "\"/>\n";
      svg += "<circle cx=\"" + fixed(x) + "\" cy=\"" + fixed(sy(p.mean)) +
             "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    }
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace sdg
