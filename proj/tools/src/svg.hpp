#pragma once

// Minimal self-contained SVG 1.1 emitter for the CLI plots: math-coordinate
// canvas with a y-flip, inline styles only.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <planarmap/geometry.hpp>

namespace svgplot {

class Canvas {
public:
    Canvas(double x_min, double x_max, double y_min, double y_max, int width_px, int height_px)
        : x_min_(x_min),
          x_max_(x_max),
          y_min_(y_min),
          y_max_(y_max),
          w_(width_px),
          h_(height_px) {}

    double px(double x) const {
        return margin_ + (x - x_min_) / (x_max_ - x_min_) * (w_ - 2 * margin_);
    }
    double py(double y) const {
        return h_ - margin_ - (y - y_min_) / (y_max_ - y_min_) * (h_ - 2 * margin_);
    }

    void comment(const std::string& text) { body_ << "<!-- " << text << " -->\n"; }

    void line(planarmap::Point a, planarmap::Point b, const char* stroke, double width) {
        body_ << "<line x1=\"" << num(px(a.x)) << "\" y1=\"" << num(py(a.y)) << "\" x2=\""
              << num(px(b.x)) << "\" y2=\"" << num(py(b.y)) << "\" stroke=\"" << stroke
              << "\" stroke-width=\"" << num(width) << "\"/>\n";
    }

    void polyline(const std::vector<planarmap::Point>& pts, const char* stroke, double width,
                  bool dashed = false) {
        if (pts.size() < 2) return;
        body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
              << num(width) << "\"";
        if (dashed) body_ << " stroke-dasharray=\"6 4\"";
        body_ << " points=\"";
        for (const auto& p : pts) body_ << num(px(p.x)) << "," << num(py(p.y)) << " ";
        body_ << "\"/>\n";
    }

    void circle(planarmap::Point c, double r_px, const char* fill, const char* stroke) {
        body_ << "<circle cx=\"" << num(px(c.x)) << "\" cy=\"" << num(py(c.y)) << "\" r=\""
              << num(r_px) << "\" fill=\"" << fill << "\" stroke=\"" << stroke
              << "\" stroke-width=\"1.5\"/>\n";
    }

    void square(planarmap::Point c, double half_px, const char* fill, const char* stroke) {
        body_ << "<rect x=\"" << num(px(c.x) - half_px) << "\" y=\"" << num(py(c.y) - half_px)
              << "\" width=\"" << num(2 * half_px) << "\" height=\"" << num(2 * half_px)
              << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"/>\n";
    }

    void frame(const planarmap::Window& w, const char* stroke) {
        body_ << "<rect x=\"" << num(px(w.x_min)) << "\" y=\"" << num(py(w.y_max)) << "\" width=\""
              << num(px(w.x_max) - px(w.x_min)) << "\" height=\"" << num(py(w.y_min) - py(w.y_max))
              << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1\"/>\n";
    }

    void text(planarmap::Point at, const std::string& s, int size_px, const char* fill) {
        body_ << "<text x=\"" << num(px(at.x)) << "\" y=\"" << num(py(at.y)) << "\" font-size=\""
              << size_px << "\" font-family=\"sans-serif\" fill=\"" << fill << "\">" << escape(s)
              << "</text>\n";
    }

    bool save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) return false;
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
            << "\" viewBox=\"0 0 " << w_ << " " << h_ << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << body_.str() << "</svg>\n";
        return static_cast<bool>(out);
    }

private:
    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return buf;
    }
    static std::string escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '&') {
                out += "&amp;";
            } else if (c == '<') {
                out += "&lt;";
            } else if (c == '>') {
                out += "&gt;";
            } else {
                out += c;
            }
        }
        return out;
    }

    double x_min_, x_max_, y_min_, y_max_;
    int w_, h_;
    double margin_ = 12.0;
    std::ostringstream body_;
};

} // namespace svgplot
