#include <algorithm>
#include <cmath>
#include <cstdio>

#include "swingnam/feedback.hpp"

namespace swingnam {

namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

std::string render_curve_svg(const ShapeCurve& curve, std::optional<double> marker, const SvgOptions& options) {
  if (curve.xs.size() < 2 || curve.xs.size() != curve.ys.size() || curve.density.bins() == 0) {
    throw Error(ErrorCode::InvalidArgument, "curve '" + curve.feature + "' cannot be rendered");
  }
  const double left = 70, right = 20, top = 40, bottom = 50;
  const double plot_w = options.width - left - right;
  const double plot_h = options.height - top - bottom;

  const double x0 = curve.xs.front(), x1 = curve.xs.back();
  double y0 = *std::min_element(curve.ys.begin(), curve.ys.end());
  double y1 = *std::max_element(curve.ys.begin(), curve.ys.end());
  if (!(y1 - y0 > 1e-12)) {
    y0 -= 1.0;
    y1 += 1.0;
  } else {
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
  }
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * plot_w; };
  auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * plot_h; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) + "\" height=\"" +
       std::to_string(options.height) + "\" viewBox=\"0 0 " + std::to_string(options.width) + " " +
       std::to_string(options.height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(options.width) + "\" height=\"" +
       std::to_string(options.height) + "\" fill=\"white\"/>\n";

  // Density bands, darker where more training samples fall.
  const std::size_t peak = std::max<std::size_t>(1, *std::max_element(curve.density.counts.begin(), curve.density.counts.end()));
  s += "<g class=\"density\">\n";
  for (std::size_t b = 0; b < curve.density.bins(); ++b) {
    const double frac = static_cast<double>(curve.density.counts[b]) / static_cast<double>(peak);
    const int shade = static_cast<int>(std::lround(255.0 - 150.0 * frac));
    const double bx0 = px(std::max(x0, curve.density.edges[b]));
    const double bx1 = px(std::min(x1, curve.density.edges[b + 1]));
    char fill[16];
    std::snprintf(fill, sizeof(fill), "#%02x%02x%02x", shade, shade, shade);
    s += "<rect x=\"" + num(bx0) + "\" y=\"" + num(top) + "\" width=\"" + num(std::max(0.0, bx1 - bx0)) +
         "\" height=\"" + num(plot_h) + "\" fill=\"" + fill + "\" data-count=\"" +
         std::to_string(curve.density.counts[b]) + "\"/>\n";
  }
  s += "</g>\n";

  // Axes.
  s += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" + num(left + plot_w) + "\" y2=\"" +
       num(top + plot_h) + "\"/>\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(top + plot_h) +
       "\"/>\n";
  s += "</g>\n";
  s += "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  s += "<text x=\"" + num(left) + "\" y=\"" + num(top + plot_h + 16) + "\" text-anchor=\"middle\">" + label(x0) +
       "</text>\n";
  s += "<text x=\"" + num(left + plot_w) + "\" y=\"" + num(top + plot_h + 16) + "\" text-anchor=\"middle\">" +
       label(x1) + "</text>\n";
  s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(top + plot_h) + "\" text-anchor=\"end\">" + label(y0) +
       "</text>\n";
  s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(top + 10) + "\" text-anchor=\"end\">" + label(y1) + "</text>\n";
  s += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"" + num(options.height - 10.0) + "\" text-anchor=\"middle\">" +
       xml_escape(curve.feature) + "</text>\n";
  s += "<text x=\"16\" y=\"" + num(top + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       num(top + plot_h / 2) + ")\">effect</text>\n";
  const std::string title = options.title.empty() ? curve.feature : options.title;
  s += "<text x=\"" + num(options.width / 2.0) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
       xml_escape(title) + "</text>\n";
  s += "</g>\n";

  s += "<polyline class=\"shape\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < curve.xs.size(); ++i) {
    if (i) s += ' ';
    s += num(px(curve.xs[i])) + "," + num(py(curve.ys[i]));
  }
  s += "\"/>\n";

  if (marker) {
    const double mx = px(std::clamp(*marker, x0, x1));
    s += "<line class=\"optimal-marker\" x1=\"" + num(mx) + "\" y1=\"" + num(top) + "\" x2=\"" + num(mx) + "\" y2=\"" +
         num(top + plot_h) + "\" stroke=\"red\" stroke-width=\"2\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace swingnam
