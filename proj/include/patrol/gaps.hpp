#pragma once

// Uncovered regions of the position-time diagram at a candidate idle time I.
//
// A piece covers the parallelogram between itself and its copy shifted up by
// I. Inside one cell between consecutive critical positions the event lines
// keep their order, so the uncovered set is a union of trapezoids
// e1(x) + I < t < e2(x) over consecutive event lines e1 < e2. Trapezoids on
// adjacent cells bounded by the same two lines are joined back together,
// then everything is clipped to the strip [t0, t0 + period].

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "patrol/error.hpp"
#include "patrol/model.hpp"
#include "patrol/rational.hpp"
#include "patrol/verify.hpp"

namespace patrol {

struct DiagramPoint {
  Rational x;  // position
  Rational t;  // time
  friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
  friend auto operator<=>(const DiagramPoint&, const DiagramPoint&) = default;
};

/// Convex polygon, counterclockwise in (x, t), starting at the
/// lexicographically smallest vertex.
struct GapRegion {
  std::vector<DiagramPoint> vertices;

  Rational area() const {
    Rational twice;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const auto& a = vertices[i];
      const auto& b = vertices[(i + 1) % vertices.size()];
      twice += a.x * b.t - b.x * a.t;
    }
    return twice / Rational(2);
  }
  friend bool operator==(const GapRegion&, const GapRegion&) = default;
};

namespace detail {

struct Line {
  Rational k, d;  // t = k * x + d
  Rational at(const Rational& x) const { return k * x + d; }
  friend bool operator==(const Line&, const Line&) = default;
};

struct Trapezoid {
  Rational x0, x1;
  Line lower, upper;
};

inline Rational cross(const DiagramPoint& o, const DiagramPoint& a, const DiagramPoint& b) {
  return (a.x - o.x) * (b.t - o.t) - (a.t - o.t) * (b.x - o.x);
}

/// Drops repeated and collinear vertices, then rotates to the smallest one.
inline std::vector<DiagramPoint> tidy(std::vector<DiagramPoint> pts) {
  bool changed = true;
  while (changed && pts.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& prev = pts[(i + pts.size() - 1) % pts.size()];
      const auto& next = pts[(i + 1) % pts.size()];
      if (pts[i] == prev || cross(prev, pts[i], next).sign() == 0) {
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (pts.size() < 3) return {};
  std::rotate(pts.begin(), std::min_element(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// Keeps the part of a convex polygon with t >= bound (keep_above) or t <= bound.
inline std::vector<DiagramPoint> clip_time(const std::vector<DiagramPoint>& poly, const Rational& bound,
                                           bool keep_above) {
  std::vector<DiagramPoint> out;
  auto inside = [&](const DiagramPoint& p) { return keep_above ? p.t >= bound : p.t <= bound; };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    const bool ia = inside(a);
    const bool ib = inside(b);
    if (ia) out.push_back(a);
    if (ia != ib) {
      const Rational x = a.x + (b.x - a.x) * (bound - a.t) / (b.t - a.t);
      out.push_back({x, bound});
    }
  }
  return out;
}

}  // namespace detail

/// Uncovered regions in [0, length] x [t0, t0 + period] at candidate idle I.
/// Empty iff every point is revisited within I in steady state.
inline std::vector<GapRegion> analyze_gaps(const Schedule& s, const Rational& candidate_idle,
                                           const Rational& t0 = Rational()) {
  detail::require_valid(s);
  if (!s.time_model.is_periodic()) throw Error(ErrorCode::NotPeriodic, "gap analysis needs a periodic schedule");
  if (candidate_idle.sign() <= 0) throw Error(ErrorCode::NonpositiveInput, "candidate idle " + candidate_idle.str());
  const Rational& period = s.time_model.end();
  const Rational& idle = candidate_idle;

  const std::vector<Rational> crit = critical_positions(s);
  detail::PieceIndex idx = detail::index_pieces(s);
  auto& mv = idx.moving;
  auto& stays = idx.stays;
  std::sort(mv.begin(), mv.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  std::sort(stays.begin(), stays.end(), [](const auto& a, const auto& b) { return a.position < b.position; });

  const Rational jmin = floor((t0 - idle) / period) - Rational(1);
  const Rational jmax = floor(t0 / period) + Rational(2);

  // A stationary agent at x covers the segment x = c, t in [from, to + I].
  auto edge_blocked = [&](const Rational& c, const Rational& lo_t, const Rational& hi_t) {
    for (const auto& st : stays) {
      if (st.position != c) continue;
      for (Rational j = jmin; j <= jmax; j += Rational(1)) {
        const Rational a = st.t_from + j * period;
        const Rational b = st.t_to + j * period + idle;
        if (a < hi_t && b > lo_t) return true;
      }
    }
    return false;
  };

  std::vector<detail::Trapezoid> done;
  std::vector<detail::Trapezoid> open;  // trapezoids reaching the right end of the previous cell
  std::vector<const detail::MovingLine*> active;
  std::size_t next_moving = 0;
  for (std::size_t c = 0; c + 1 < crit.size(); ++c) {
    const Rational& c0 = crit[c];
    const Rational& c1 = crit[c + 1];
    while (next_moving < mv.size() && mv[next_moving].lo <= c0) active.push_back(&mv[next_moving++]);
    std::erase_if(active, [&](const detail::MovingLine* m) { return m->hi <= c0; });

    std::vector<detail::Line> events;
    for (const auto* m : active) {
      if (m->hi < c1) continue;
      for (Rational j = jmin; j <= jmax; j += Rational(1)) events.push_back({m->k, m->d + j * period});
    }
    const Rational mid = (c0 + c1) / Rational(2);
    std::sort(events.begin(), events.end(), [&](const detail::Line& a, const detail::Line& b) {
      const Rational va = a.at(mid);
      const Rational vb = b.at(mid);
      return va < vb || (va == vb && a.k < b.k);
    });
    events.erase(std::unique(events.begin(), events.end()), events.end());

    std::vector<detail::Trapezoid> here;
    if (events.empty()) {
      here.push_back({c0, c1, {Rational(), t0}, {Rational(), t0 + period}});
    }
    for (std::size_t i = 0; i + 1 < events.size(); ++i) {
      detail::Line lower{events[i].k, events[i].d + idle};
      const detail::Line& upper = events[i + 1];
      const Rational fa = upper.at(c0) - lower.at(c0);
      const Rational fb = upper.at(c1) - lower.at(c1);
      if (fa.sign() <= 0 && fb.sign() <= 0) continue;
      Rational lo = c0;
      Rational hi = c1;
      if (fa.sign() < 0) lo = c0 + (c1 - c0) * (-fa) / (fb - fa);
      if (fb.sign() < 0) hi = c0 + (c1 - c0) * fa / (fa - fb);
      if (upper.at(lo) <= t0 && upper.at(hi) <= t0) continue;
      if (lower.at(lo) >= t0 + period && lower.at(hi) >= t0 + period) continue;
      here.push_back({std::move(lo), std::move(hi), std::move(lower), upper});
    }

    std::vector<detail::Trapezoid> next_open;
    std::vector<bool> used(open.size(), false);
    for (auto& tz : here) {
      if (tz.x0 == c0) {
        for (std::size_t o = 0; o < open.size(); ++o) {
          if (used[o] || !(open[o].lower == tz.lower) || !(open[o].upper == tz.upper)) continue;
          if (edge_blocked(c0, tz.lower.at(c0), tz.upper.at(c0))) continue;
          used[o] = true;
          tz.x0 = open[o].x0;
          break;
        }
      }
      if (tz.x1 == c1) {
        next_open.push_back(std::move(tz));
      } else {
        done.push_back(std::move(tz));
      }
    }
    for (std::size_t o = 0; o < open.size(); ++o) {
      if (!used[o]) done.push_back(std::move(open[o]));
    }
    open = std::move(next_open);
  }
  for (auto& tz : open) done.push_back(std::move(tz));

  std::vector<GapRegion> regions;
  for (const auto& tz : done) {
    std::vector<DiagramPoint> poly{{tz.x0, tz.lower.at(tz.x0)},
                                   {tz.x1, tz.lower.at(tz.x1)},
                                   {tz.x1, tz.upper.at(tz.x1)},
                                   {tz.x0, tz.upper.at(tz.x0)}};
    poly = detail::clip_time(poly, t0, true);
    if (poly.empty()) continue;
    poly = detail::clip_time(poly, t0 + period, false);
    poly = detail::tidy(std::move(poly));
    if (poly.empty()) continue;
    GapRegion r{std::move(poly)};
    if (r.area().sign() > 0) regions.push_back(std::move(r));
  }
  std::sort(regions.begin(), regions.end(),
            [](const GapRegion& a, const GapRegion& b) { return a.vertices < b.vertices; });
  return regions;
}

inline Rational total_area(std::span<const GapRegion> regions) {
  Rational sum;
  for (const auto& r : regions) sum += r.area();
  return sum;
}

}  // namespace patrol
