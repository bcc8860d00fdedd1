#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pctile/charts.hpp"

namespace pctile::svg {

struct Dimensions {
  double width = 800.0;
  double height = 500.0;
};

namespace detail {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return std::string(buf);
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> p = {"#4c78a8", "#f58518", "#54a24b",
                                             "#e45756", "#72b7b2", "#b279a2"};
  return p;
}

class Canvas {
 public:
  Canvas(double w, double h) {
    if (w <= 0.0 || h <= 0.0) throw std::invalid_argument("svg: zero-size canvas");
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
         << num(w) << "\" height=\"" << num(h) << "\" viewBox=\"0 0 " << num(w) << " "
         << num(h) << "\">\n";
    out_ << "<rect x=\"0\" y=\"0\" width=\"" << num(w) << "\" height=\"" << num(h)
         << "\" fill=\"white\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0, bool dashed = false) {
    out_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
         << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
         << num(width) << "\"";
    if (dashed) out_ << " stroke-dasharray=\"6,4\"";
    out_ << "/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "none") {
    out_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
         << "\" height=\"" << num(h) << "\" fill=\"" << fill << "\" stroke=\"" << stroke
         << "\"/>\n";
  }

  void text(double x, double y, const std::string& s, double size = 12.0,
            const std::string& anchor = "middle", const std::string& fill = "#333333",
            double rotate = 0.0) {
    out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\""
         << num(size) << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor
         << "\" fill=\"" << fill << "\"";
    if (rotate != 0.0)
      out_ << " transform=\"rotate(" << num(rotate) << " " << num(x) << " " << num(y)
           << ")\"";
    out_ << ">" << escape(s) << "</text>\n";
  }

  void polygon(const std::vector<std::pair<double, double>>& pts,
               const std::string& fill, const std::string& stroke) {
    out_ << "<polygon points=\"";
    for (const auto& [x, y] : pts) out_ << num(x) << "," << num(y) << " ";
    out_ << "\" fill=\"" << fill << "\" fill-opacity=\"0.5\" stroke=\"" << stroke
         << "\"/>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

struct Frame {
  double left, right, top, bottom;  // plot area in canvas coordinates
  double ymin, ymax;                // data range mapped onto [bottom, top]
  double y(double v) const {
    return bottom - (v - ymin) / (ymax - ymin) * (bottom - top);
  }
};

inline void draw_y_axis(Canvas& c, const Frame& f, const std::string& label) {
  c.line(f.left, f.top, f.left, f.bottom, "#333333");
  c.line(f.left, f.bottom, f.right, f.bottom, "#333333");
  for (int i = 0; i <= 5; ++i) {
    const double v = f.ymin + (f.ymax - f.ymin) * i / 5.0;
    const double y = f.y(v);
    c.line(f.left - 4, y, f.left, y, "#333333");
    c.text(f.left - 8, y + 4, num(v), 11, "end");
  }
  if (!label.empty())
    c.text(f.left - 45, (f.top + f.bottom) / 2.0, label, 12, "middle", "#333333", -90);
}

}  // namespace detail

inline std::string render_svg(const BarChartSpec& spec, Dimensions dims = {}) {
  detail::Canvas c(dims.width, dims.height);
  detail::Frame f{70, dims.width - 20, 50, dims.height - 70, 0.0, 1.0};

  double ymax = 0.0;
  for (const auto& b : spec.bars) {
    ymax = std::max(ymax, b.value);
    if (b.err_hi) ymax = std::max(ymax, *b.err_hi);
  }
  for (const auto& r : spec.reference_lines) ymax = std::max(ymax, r.value);
  if (ymax <= 0.0) ymax = 1.0;
  f.ymax = ymax * 1.15;

  detail::draw_y_axis(c, f, spec.y_axis);
  if (!spec.title.empty())
    c.text((f.left + f.right) / 2.0, 25, spec.title, 14);

  // distinct groups in first-seen order, colored from the palette
  std::vector<std::string> groups;
  for (const auto& b : spec.bars)
    if (std::find(groups.begin(), groups.end(), b.group) == groups.end())
      groups.push_back(b.group);
  auto color_of = [&](const std::string& g) {
    const auto i = static_cast<std::size_t>(
        std::find(groups.begin(), groups.end(), g) - groups.begin());
    return detail::palette()[i % detail::palette().size()];
  };

  const bool grouped = !spec.class_labels.empty();
  const std::size_t n_cats = grouped ? spec.class_labels.size() : spec.bars.size();
  const double cat_w = (f.right - f.left) / static_cast<double>(n_cats);

  std::size_t bar_index = 0;
  for (std::size_t cat = 0; cat < n_cats; ++cat) {
    const double cx = f.left + cat_w * (static_cast<double>(cat) + 0.5);
    const std::size_t per_cat = grouped ? groups.size() : 1;
    const double bw = cat_w * 0.8 / static_cast<double>(per_cat);
    for (std::size_t s = 0; s < per_cat && bar_index < spec.bars.size(); ++s) {
      const auto& b = spec.bars[bar_index++];
      const double x =
          cx - cat_w * 0.4 + bw * static_cast<double>(s);
      const double y = f.y(b.value);
      c.rect(x, y, bw, f.bottom - y, color_of(b.group), "#333333");
      if (!b.value_label.empty())
        c.text(x + bw / 2.0, f.bottom + 14, b.value_label, 9);
      if (b.annotation)
        c.text(x + bw / 2.0, y - 4, detail::num(*b.annotation), 9);
      if (b.err_lo && b.err_hi) {
        const double xc = x + bw / 2.0;
        c.line(xc, f.y(*b.err_lo), xc, f.y(*b.err_hi), "#111111", 1.5);
        c.line(xc - 4, f.y(*b.err_lo), xc + 4, f.y(*b.err_lo), "#111111", 1.5);
        c.line(xc - 4, f.y(*b.err_hi), xc + 4, f.y(*b.err_hi), "#111111", 1.5);
      }
    }
    const std::string cat_label =
        grouped ? spec.class_labels[cat] : spec.bars[cat].group;
    c.text(cx, f.bottom + 30, cat_label, 11);
  }

  for (const auto& r : spec.reference_lines) {
    const double y = f.y(r.value);
    c.line(f.left, y, f.right, y, "#555555", 1.0, r.style == "dashed");
    if (!r.label.empty()) c.text(f.right - 4, y - 4, r.label, 10, "end", "#555555");
  }

  if (grouped) {
    double lx = f.left;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      c.rect(lx, dims.height - 22, 10, 10, color_of(groups[i]), "#333333");
      c.text(lx + 14, dims.height - 13, groups[i], 10, "start");
      lx += 24 + 7.0 * static_cast<double>(groups[i].size());
    }
  }
  return c.finish();
}

inline std::string render_svg(const ViolinSpec& spec, Dimensions dims = {}) {
  detail::Canvas c(dims.width, dims.height);
  detail::Frame f{70, dims.width - 20, 40, dims.height - 50, 0.0, 100.0};
  detail::draw_y_axis(c, f, "percentile");

  const std::size_t n = spec.groups.size();
  if (n == 0) return c.finish();
  const double slot = (f.right - f.left) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = spec.groups[i];
    const double cx = f.left + slot * (static_cast<double>(i) + 0.5);
    const auto color = detail::palette()[i % detail::palette().size()];
    if (!g.point_mass && !g.density.empty()) {
      double dmax = 0.0;
      for (const auto& [_, d] : g.density) dmax = std::max(dmax, d);
      const double half = slot * 0.4;
      std::vector<std::pair<double, double>> pts;
      for (const auto& [v, d] : g.density)
        pts.emplace_back(cx + d / dmax * half, f.y(v));
      for (auto it = g.density.rbegin(); it != g.density.rend(); ++it)
        pts.emplace_back(cx - it->second / dmax * half, f.y(it->first));
      c.polygon(pts, color, color);
    }
    // adjacent-value spikes and IQR box
    c.line(cx, f.y(g.lower_adjacent), cx, f.y(g.upper_adjacent), "#333333");
    c.rect(cx - 6, f.y(g.q3), 12, f.y(g.q1) - f.y(g.q3), "#ffffff", "#333333");
    c.line(cx - 6, f.y(g.median), cx + 6, f.y(g.median), "#000000", 2.0);
    if (g.point_mass) c.rect(cx - 3, f.y(g.median) - 3, 6, 6, "#000000");
    c.text(cx, f.bottom + 18, g.group, 11);
  }
  return c.finish();
}

inline std::string render_svg(const BoxPlotSpec& spec, Dimensions dims = {}) {
  detail::Canvas c(dims.width, dims.height);
  detail::Frame f{70, dims.width - 20, 40, dims.height - 90, 0.0, 100.0};
  detail::draw_y_axis(c, f, "percentile");

  const std::size_t n = spec.boxes.size();
  if (n > 0) {
    const double slot = (f.right - f.left) / static_cast<double>(n);
    std::vector<std::string> groups;
    for (const auto& b : spec.boxes)
      if (std::find(groups.begin(), groups.end(), b.group) == groups.end())
        groups.push_back(b.group);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& b = spec.boxes[i];
      const double cx = f.left + slot * (static_cast<double>(i) + 0.5);
      const auto gi = static_cast<std::size_t>(
          std::find(groups.begin(), groups.end(), b.group) - groups.begin());
      const auto color = detail::palette()[gi % detail::palette().size()];
      c.line(cx, f.y(b.whisker_lo), cx, f.y(b.whisker_hi), "#333333");
      c.rect(cx - slot * 0.3, f.y(b.q3), slot * 0.6, f.y(b.q1) - f.y(b.q3), color,
             "#333333");
      // median cross
      c.line(cx - 4, f.y(b.median) - 4, cx + 4, f.y(b.median) + 4, "#000000", 1.5);
      c.line(cx - 4, f.y(b.median) + 4, cx + 4, f.y(b.median) - 4, "#000000", 1.5);
      c.text(cx, f.bottom + 14, std::to_string(b.year), 9);
    }
  }
  const double ry = f.y(spec.reference_line);
  c.line(f.left, ry, f.right, ry, "#555555", 1.0);
  double ly = dims.height - 60;
  for (const auto& label : spec.group_labels) {
    c.text(f.left, ly, label, 10, "start");
    ly += 13;
  }
  return c.finish();
}

}  // namespace pctile::svg
