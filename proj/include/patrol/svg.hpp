#pragma once

// Position-time diagram as SVG 1.1. Position runs left to right, time runs
// downward. This is the only place rationals become floating point.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "patrol/gaps.hpp"
#include "patrol/model.hpp"
#include "patrol/rational.hpp"

namespace patrol {

struct SvgOptions {
  int periods = 1;
  std::optional<Rational> idle;  // draw coverage parallelograms and gaps at this candidate
  std::optional<double> width_px;
};

namespace detail {

inline std::string fmt_px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

class Canvas {
 public:
  Canvas(double scale, double margin) : scale_(scale), margin_(margin) {}
  std::string x(const Rational& pos) const { return fmt_px(margin_ + pos.to_double() * scale_); }
  std::string y(const Rational& t) const { return fmt_px(margin_ + t.to_double() * scale_); }
  std::string pt(const Rational& pos, const Rational& t) const { return x(pos) + "," + y(t); }

 private:
  double scale_;
  double margin_;
};

}  // namespace detail

inline std::string render_svg(const Schedule& s, const SvgOptions& opt = {}) {
  const double margin = 40;
  const Rational& len = s.fence.length;
  const double scale = opt.width_px ? (*opt.width_px - 2 * margin) / len.to_double() : 100.0;
  const detail::Canvas c(scale, margin);
  const bool periodic = s.time_model.is_periodic();
  const int copies = periodic ? std::max(opt.periods, 1) : 1;
  const Rational& period = s.time_model.end();
  const Rational span = periodic ? period * Rational(copies) : period;

  const double w = 2 * margin + len.to_double() * scale;
  const double h = 2 * margin + span.to_double() * scale;
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + detail::fmt_px(w) + "\" height=\"" +
         detail::fmt_px(h) + "\" viewBox=\"0 0 " + detail::fmt_px(w) + " " + detail::fmt_px(h) + "\">\n";
  out += "<style>.agent{fill:none;stroke:#1f4e99;stroke-width:1.5}.cover{fill:#6aa84f;fill-opacity:0.15;stroke:none}"
         ".gap{fill:#cc0000;fill-opacity:0.6;stroke:#cc0000}.axis{stroke:#000;stroke-width:1}"
         "text{font-family:sans-serif;font-size:12px}</style>\n";

  // axes
  out += "<line class=\"axis\" x1=\"" + c.x(0) + "\" y1=\"" + c.y(0) + "\" x2=\"" + c.x(len) + "\" y2=\"" + c.y(0) +
         "\"/>\n";
  out += "<line class=\"axis\" x1=\"" + c.x(0) + "\" y1=\"" + c.y(0) + "\" x2=\"" + c.x(0) + "\" y2=\"" + c.y(span) +
         "\"/>\n";
  out += "<text x=\"" + c.x(len / Rational(2)) + "\" y=\"" + detail::fmt_px(margin - 20) +
         "\" text-anchor=\"middle\">position</text>\n";
  out += "<text x=\"" + detail::fmt_px(margin - 25) + "\" y=\"" + c.y(span / Rational(2)) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 " + detail::fmt_px(margin - 25) + " " +
         c.y(span / Rational(2)) + ")\">time</text>\n";
  out += "<text x=\"" + c.x(len) + "\" y=\"" + detail::fmt_px(margin - 5) + "\" text-anchor=\"middle\">" + len.str() +
         "</text>\n";
  out += "<text x=\"" + detail::fmt_px(margin - 5) + "\" y=\"" + c.y(span) + "\" text-anchor=\"end\">" + span.str() +
         "</text>\n";

  if (opt.idle) {
    out += "<g id=\"coverage\">\n";
    for (int p = 0; p < copies; ++p) {
      const Rational shift = period * Rational(p);
      for (const Piece& pc : pieces_of(s)) {
        if (pc.is_stationary()) continue;
        const Rational a = pc.from.time + shift;
        const Rational b = pc.to.time + shift;
        out += "<polygon class=\"cover\" points=\"" + c.pt(pc.from.position, a) + " " + c.pt(pc.to.position, b) +
               " " + c.pt(pc.to.position, b + *opt.idle) + " " + c.pt(pc.from.position, a + *opt.idle) + "\"/>\n";
      }
    }
    out += "</g>\n";
    if (periodic) {
      const auto regions = analyze_gaps(s, *opt.idle);
      out += "<g id=\"gaps\">\n";
      for (int p = 0; p < copies; ++p) {
        const Rational shift = period * Rational(p);
        for (const auto& r : regions) {
          out += "<polygon class=\"gap\" points=\"";
          for (std::size_t i = 0; i < r.vertices.size(); ++i) {
            if (i != 0) out += ' ';
            out += c.pt(r.vertices[i].x, r.vertices[i].t + shift);
          }
          out += "\"/>\n";
        }
      }
      out += "</g>\n";
    }
  }

  for (const Agent& a : s.agents) {
    const auto& bp = a.trajectory.breakpoints;
    std::string d;
    for (int p = 0; p < copies; ++p) {
      const Rational shift = period * Rational(p);
      for (std::size_t i = 0; i < bp.size(); ++i) {
        const bool jump = i == 0 || bp[i].time == bp[i - 1].time;
        if (!d.empty()) d += ' ';
        d += (jump ? "M" : "L") + c.pt(bp[i].position, bp[i].time + shift);
      }
    }
    out += "<path class=\"agent\" data-agent=\"" + std::to_string(a.id) + "\" d=\"" + d + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace patrol
