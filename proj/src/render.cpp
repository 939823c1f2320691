#include "pcurve/render.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <vector>

#include "pcurve/admissible.hpp"
#include "pcurve/report.hpp"

namespace pcurve {

namespace {

struct Box {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void add(Point p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string escape(const std::string& s) {
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

// Plane to pixel transform with the y axis flipped.
class Canvas {
 public:
  Canvas(const Box& box, const RenderOptions& options) : margin_(options.margin) {
    const double span_x = std::max(box.max_x - box.min_x, 1e-300);
    const double span_y = std::max(box.max_y - box.min_y, 1e-300);
    scale_ = (options.width - 2 * margin_) / std::max(span_x, span_y);
    width_ = options.width;
    height_ = span_y * scale_ + 2 * margin_;
    origin_ = {box.min_x, box.max_y};
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" +
             num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) + "\">\n";
    body_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty())
      body_ += "<title>" + escape(options.title) + "</title>\n";
  }

  std::string coords(const std::vector<Point>& pts) const {
    std::string out;
    for (const Point& p : pts) {
      if (!out.empty()) out += ' ';
      out += num((p.x - origin_.x) * scale_ + margin_) + "," + num((origin_.y - p.y) * scale_ + margin_);
    }
    return out;
  }

  void polygon(const std::vector<Point>& pts, const std::string& style) {
    body_ += "<polygon points=\"" + coords(pts) + "\" " + style + "/>\n";
  }
  void polyline(const std::vector<Point>& pts, const std::string& style) {
    body_ += "<polyline points=\"" + coords(pts) + "\" fill=\"none\" " + style + "/>\n";
  }
  void circle(Point c, double r, const std::string& style) {
    body_ += "<circle cx=\"" + num((c.x - origin_.x) * scale_ + margin_) + "\" cy=\"" +
             num((origin_.y - c.y) * scale_ + margin_) + "\" r=\"" + num(r * scale_) + "\" " + style +
             "/>\n";
  }
  void group_open(const std::string& id) { body_ += "<g id=\"" + id + "\">\n"; }
  void group_close() { body_ += "</g>\n"; }

  std::string finish() { return body_ + "</svg>\n"; }

 private:
  double margin_;
  double scale_ = 1.0;
  double width_ = 0.0;
  double height_ = 0.0;
  Point origin_;
  std::string body_;
};

// Band boundary mapped back from canonical coordinates.
std::vector<Point> band_outline(const Wedge& w, double delta) {
  constexpr int kSamples = 32;
  std::vector<Point> upper, lower;
  for (int k = 0; k <= kSamples; ++k) {
    const double t = -0.5 + static_cast<double>(k) / kSamples;
    upper.push_back(band_point(w, t, delta).q);
    lower.push_back(band_point(w, t, -delta).q);
  }
  std::reverse(lower.begin(), lower.end());
  upper.insert(upper.end(), lower.begin(), lower.end());
  return upper;
}

constexpr const char* kTriangleStyle = "fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"";
constexpr const char* kInnerStyle = "stroke=\"black\" stroke-width=\"2\"";
constexpr const char* kOuterStyle = "stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"";
constexpr const char* kBandStyle = "fill=\"#4a90d9\" fill-opacity=\"0.35\" stroke=\"none\"";

}  // namespace

std::string render_svg(const InscribedChainPair& snapshot, const RenderOptions& options) {
  const Triangle& root = snapshot.root();
  Box box;
  for (const Point p : {root.a, root.b, root.c}) box.add(p);
  Canvas canvas(box, options);

  canvas.group_open("root");
  canvas.polygon({root.a, root.b, root.c}, kTriangleStyle);
  canvas.group_close();

  if (options.band_alpha) {
    canvas.group_open("bands");
    for (const Wedge& w : snapshot.wedges()) {
      const double delta = delta_for(*options.band_alpha, w.s);
      if (delta > 0.0) canvas.polygon(band_outline(w, delta), kBandStyle);
    }
    canvas.group_close();
  }
  if (options.outer_chain) {
    canvas.group_open("outer");
    canvas.polyline(snapshot.outer(), kOuterStyle);
    canvas.group_close();
  }
  canvas.group_open("inner");
  canvas.polyline(snapshot.inner(), kInnerStyle);
  canvas.group_close();
  return canvas.finish();
}

std::string render_theorem_svg(const TheoremResult& result, Point center, double radius,
                               const RenderOptions& options) {
  Box box;
  for (const Triangle& t : result.triangles)
    for (const Point p : {t.a, t.b, t.c}) box.add(p);
  Canvas canvas(box, options);
  canvas.circle(center, radius, "fill=\"none\" stroke=\"#cccccc\" stroke-width=\"1\"");
  canvas.group_open("wedges");
  for (const Triangle& t : result.triangles) canvas.polygon({t.a, t.b, t.c}, kTriangleStyle);
  canvas.group_close();
  if (options.outer_chain) {
    canvas.group_open("outer");
    for (const InscribedChainPair& pair : result.pairs) canvas.polyline(pair.outer(), kOuterStyle);
    canvas.group_close();
  }
  canvas.group_open("curve");
  canvas.polyline(result.curve, kInnerStyle);
  canvas.group_close();
  return canvas.finish();
}

void write_svg(const std::string& svg, const std::filesystem::path& path) {
  write_text_file(path, svg);
}

}  // namespace pcurve
