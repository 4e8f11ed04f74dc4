#pragma once

// Exact idle-time verification.
//
// For a fixed position x every moving piece through x contributes one visit
// instant (a linear function of x) and every stationary piece at x a visit
// interval. Between two consecutive critical positions the set of moving
// pieces through x is constant and no two of their event lines cross, so the
// order of visit events is fixed and every gap length is linear in x. The
// supremum of the gap over a closed cell is therefore reached at one of its
// ends, possibly only as a one-sided limit: a stationary agent parked at the
// end or a piece ending there is seen at x itself but not just beside it.
// gap_at() takes the maximum of the closed gap and both one-sided limits,
// which makes the sweep exact.
//
// Periodic seam: event times lie in [0, period]. An event line a and a shifted
// line b + period can only meet where a reaches time `period` and b time 0,
// i.e. at breakpoint positions, which are critical anyway. The shifted pairs
// are still intersected so the critical set does not depend on this argument.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patrol/error.hpp"
#include "patrol/model.hpp"
#include "patrol/rational.hpp"

namespace patrol {

/// Times at which some agent occupies a position. enter == exit for a
/// transversal crossing.
struct VisitInterval {
  Rational enter;
  Rational exit;
  friend bool operator==(const VisitInterval&, const VisitInterval&) = default;
};

/// One unvisited stretch at a fixed position. On the time circle of a
/// periodic schedule `end` may exceed the period.
struct Gap {
  Rational length;
  Rational start;
  Rational end;
};

struct Witness {
  Rational position;
  Rational gap_start;
  Rational gap_end;
};

struct IdleReport {
  std::optional<Rational> idle;  // nullopt: some point is never visited (periodic)
  std::vector<Witness> witnesses;
  std::size_t critical_position_count = 0;

  bool unbounded() const { return !idle.has_value(); }
  std::string idle_str() const { return idle ? idle->str() : "unbounded"; }
};

namespace detail {

struct MovingLine {
  Rational lo, hi;        // position range
  Rational k, d;          // t = k * x + d
  Rational t_from, t_to;  // time range
  Rational at(const Rational& x) const { return k * x + d; }
};

struct Stay {
  Rational position;
  Rational t_from, t_to;
};

struct PieceIndex {
  std::vector<MovingLine> moving;
  std::vector<Stay> stays;
};

inline PieceIndex index_pieces(const Schedule& s) {
  PieceIndex idx;
  for (const Piece& p : pieces_of(s)) {
    if (p.is_stationary()) {
      idx.stays.push_back({p.from.position, p.from.time, p.to.time});
      continue;
    }
    MovingLine m;
    m.lo = p.lo();
    m.hi = p.hi();
    m.k = p.inverse_slope();
    m.d = p.from.time - p.from.position * m.k;
    m.t_from = p.from.time;
    m.t_to = p.to.time;
    idx.moving.push_back(std::move(m));
  }
  return idx;
}

enum class Side { At, Left, Right };

/// Appends visits seen from `side` of x by the candidate pieces. Returns false
/// when that side does not exist (outside the ends of a segment).
inline bool collect_visits(const Schedule& s, const Rational& x, Side side,
                           std::span<const MovingLine* const> moving, std::span<const Stay* const> stays,
                           std::vector<VisitInterval>& out) {
  const Rational& len = s.fence.length;
  const bool seam = s.fence.is_circle() && (x.sign() == 0 || x == len);
  if (!s.fence.is_circle()) {
    if (side == Side::Left && x.sign() == 0) return false;
    if (side == Side::Right && x == len) return false;
  }
  auto probe = [&](const Rational& p) {
    for (const MovingLine* m : moving) {
      const bool inside = side == Side::At     ? m->lo <= p && p <= m->hi
                          : side == Side::Left ? m->lo < p && p <= m->hi
                                               : m->lo <= p && p < m->hi;
      if (!inside) continue;
      Rational t = m->at(p);
      out.push_back({t, t});
    }
    if (side != Side::At) return;
    for (const Stay* st : stays) {
      if (st->position == p) out.push_back({st->t_from, st->t_to});
    }
  };
  if (!seam) {
    probe(x);
  } else if (side == Side::At) {
    probe(Rational());
    probe(len);
  } else if (side == Side::Left) {
    probe(len);  // just below the seam
  } else {
    probe(Rational());
  }
  return true;
}

inline void merge_visits(std::vector<VisitInterval>& v) {
  std::sort(v.begin(), v.end(), [](const VisitInterval& a, const VisitInterval& b) {
    return a.enter < b.enter || (a.enter == b.enter && a.exit < b.exit);
  });
  std::size_t w = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (w > 0 && v[i].enter <= v[w - 1].exit) {
      if (v[i].exit > v[w - 1].exit) v[w - 1].exit = v[i].exit;
    } else {
      if (w != i) v[w] = std::move(v[i]);
      ++w;
    }
  }
  v.resize(w);
}

/// Longest gap between merged visits. nullopt means unbounded (a periodic
/// schedule that never visits).
inline std::optional<Gap> longest_gap(std::vector<VisitInterval>& v, const TimeModel& tm) {
  merge_visits(v);
  const Rational& end = tm.end();
  std::optional<Gap> best;
  auto offer = [&](const Rational& a, const Rational& b) {
    Rational len = b - a;
    if (!best || len > best->length) best = Gap{std::move(len), a, b};
  };
  if (tm.is_periodic()) {
    if (v.empty()) return std::nullopt;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) offer(v[i].exit, v[i + 1].enter);
    offer(v.back().exit, v.front().enter + end);
    return best;
  }
  Rational prev;
  for (const auto& iv : v) {
    offer(prev, iv.enter);
    prev = iv.exit;
  }
  offer(prev, end);
  return best;
}

/// Gap at x over the given candidate pieces, including both one-sided limits.
inline std::optional<Gap> gap_from_candidates(const Schedule& s, const Rational& x,
                                              std::span<const MovingLine* const> moving,
                                              std::span<const Stay* const> stays,
                                              std::vector<VisitInterval>& scratch) {
  std::optional<Gap> best;
  for (Side side : {Side::At, Side::Left, Side::Right}) {
    scratch.clear();
    if (!collect_visits(s, x, side, moving, stays, scratch)) continue;
    std::optional<Gap> g = longest_gap(scratch, s.time_model);
    if (!g) return std::nullopt;
    if (!best || g->length > best->length) best = std::move(g);
  }
  return best;
}

inline void require_valid(const Schedule& s) {
  const ValidationReport report = validate_schedule(s);
  if (!report.ok()) throw Error(ErrorCode::InvalidSchedule, report.findings.front().str());
}

inline void require_position(const Schedule& s, const Rational& x) {
  if (x.sign() < 0 || x > s.fence.length) {
    throw Error(ErrorCode::PositionOutOfRange, x.str() + " not in [0, " + s.fence.length.str() + "]");
  }
}

}  // namespace detail

/// Per-position gap evaluation by a linear scan over all pieces. Used by the
/// sampling oracle and for spot checks; exact_idle() has its own sweep.
class GapProbe {
 public:
  explicit GapProbe(const Schedule& s) : s_(s), index_(detail::index_pieces(s)) {
    for (const auto& m : index_.moving) moving_.push_back(&m);
    for (const auto& st : index_.stays) stays_.push_back(&st);
  }

  std::vector<VisitInterval> visits(const Rational& x) const {
    detail::require_position(s_, x);
    std::vector<VisitInterval> out;
    detail::collect_visits(s_, x, detail::Side::At, moving_, stays_, out);
    detail::merge_visits(out);
    return out;
  }

  std::optional<Gap> gap(const Rational& x) const {
    detail::require_position(s_, x);
    std::vector<VisitInterval> scratch;
    return detail::gap_from_candidates(s_, x, moving_, stays_, scratch);
  }

 private:
  const Schedule& s_;
  detail::PieceIndex index_;
  std::vector<const detail::MovingLine*> moving_;
  std::vector<const detail::Stay*> stays_;
};

/// Merged visit intervals at x within one period (or within [0, end]).
inline std::vector<VisitInterval> visit_timeline(const Schedule& s, const Rational& x) {
  return GapProbe(s).visits(x);
}

/// Longest gap at x (with one-sided limits); nullopt when unbounded.
inline std::optional<Gap> gap_at(const Schedule& s, const Rational& x) { return GapProbe(s).gap(x); }

/// Breakpoint positions, 0, length and every crossing of two moving pieces
/// (and of a piece with a period-shifted copy of another).
inline std::vector<Rational> critical_positions(const Schedule& s) {
  std::vector<Rational> out{Rational(), s.fence.length};
  for (const Agent& a : s.agents) {
    for (const Breakpoint& b : a.trajectory.breakpoints) out.push_back(b.position);
  }
  detail::PieceIndex idx = detail::index_pieces(s);
  auto& mv = idx.moving;
  std::sort(mv.begin(), mv.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  const bool periodic = s.time_model.is_periodic();
  const Rational& period = s.time_model.end();

  auto cross = [&](const detail::MovingLine& a, const detail::MovingLine& b, const Rational& shift) {
    if (a.k == b.k) return;
    if (std::max(a.t_from, b.t_from + shift) > std::min(a.t_to, b.t_to + shift)) return;
    Rational x = (b.d + shift - a.d) / (a.k - b.k);
    if (x > std::max(a.lo, b.lo) && x < std::min(a.hi, b.hi)) out.push_back(std::move(x));
  };

  // Sweep by position: only pieces whose position ranges overlap can meet.
  std::vector<const detail::MovingLine*> active;
  for (const auto& p : mv) {
    std::erase_if(active, [&](const detail::MovingLine* a) { return a->hi <= p.lo; });
    for (const detail::MovingLine* a : active) {
      cross(*a, p, Rational());
      if (periodic) {
        cross(*a, p, period);
        cross(p, *a, period);
      }
    }
    active.push_back(&p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Exact idle time: the largest gap over all critical positions.
inline IdleReport exact_idle(const Schedule& s) {
  detail::require_valid(s);
  IdleReport report;
  const std::vector<Rational> crit = critical_positions(s);
  report.critical_position_count = crit.size();

  detail::PieceIndex idx = detail::index_pieces(s);
  auto& mv = idx.moving;
  auto& stays = idx.stays;
  std::sort(mv.begin(), mv.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  std::sort(stays.begin(), stays.end(), [](const auto& a, const auto& b) { return a.position < b.position; });

  const Rational& len = s.fence.length;
  const bool circle = s.fence.is_circle();
  std::vector<const detail::MovingLine*> seam_moving;
  std::vector<const detail::Stay*> seam_stays;
  if (circle) {
    for (const auto& m : mv) {
      if (m.lo.sign() == 0 || m.hi == len) seam_moving.push_back(&m);
    }
    for (const auto& st : stays) {
      if (st.position.sign() == 0 || st.position == len) seam_stays.push_back(&st);
    }
  }

  std::vector<const detail::MovingLine*> active;
  std::vector<const detail::Stay*> here;
  std::vector<VisitInterval> scratch;
  std::size_t next_moving = 0;
  std::size_t next_stay = 0;
  for (const Rational& x : crit) {
    while (next_moving < mv.size() && mv[next_moving].lo <= x) active.push_back(&mv[next_moving++]);
    std::erase_if(active, [&](const detail::MovingLine* m) { return m->hi < x; });
    while (next_stay < stays.size() && stays[next_stay].position < x) ++next_stay;
    here.clear();
    for (std::size_t i = next_stay; i < stays.size() && stays[i].position == x; ++i) here.push_back(&stays[i]);

    const bool seam = circle && (x.sign() == 0 || x == len);
    std::optional<Gap> g = seam ? detail::gap_from_candidates(s, x, seam_moving, seam_stays, scratch)
                                : detail::gap_from_candidates(s, x, active, here, scratch);
    if (!g) {
      if (report.idle) report.witnesses.clear();
      report.idle.reset();
      report.witnesses.push_back({x, Rational(), Rational()});
      return report;
    }
    if (report.witnesses.empty() || g->length > *report.idle) {
      report.idle = g->length;
      report.witnesses.clear();
    } else if (g->length != *report.idle) {
      continue;
    }
    report.witnesses.push_back({x, g->start, g->end});
  }
  return report;
}

/// Independent oracle: max gap over the grid positions j * length / grid.
inline std::optional<Rational> sampled_idle(const Schedule& s, std::size_t grid) {
  if (grid == 0) throw Error(ErrorCode::NonpositiveInput, "grid must be at least 1");
  GapProbe probe(s);
  std::optional<Rational> best;
  const Rational g(static_cast<std::int64_t>(grid));
  for (std::size_t j = 0; j <= grid; ++j) {
    const Rational x = s.fence.length * Rational(static_cast<std::int64_t>(j)) / g;
    std::optional<Gap> gap = probe.gap(x);
    if (!gap) return std::nullopt;
    if (!best || gap->length > *best) best = gap->length;
  }
  return best;
}

/// length / sum of speeds.
inline Rational volume_lower_bound(const Fence& fence, std::span<const Rational> speeds) {
  if (speeds.empty()) throw Error(ErrorCode::EmptySpeeds, "no speeds given");
  for (const auto& v : speeds) {
    if (v.sign() <= 0) throw Error(ErrorCode::NonpositiveInput, "speed " + v.str());
  }
  return fence.length / sum_exact(speeds);
}

inline std::vector<Rational> speeds_of(const Schedule& s) {
  std::vector<Rational> v;
  v.reserve(s.agents.size());
  for (const auto& a : s.agents) v.push_back(a.max_speed);
  return v;
}

struct ComparisonReport {
  std::optional<Rational> idle;
  Rational lower_bound;
  std::optional<Rational> rho_vs_a1;  // segment only
  std::optional<Rational> rho_vs_a2;  // circle only
};

/// Ratios against A1 (segment: 2*length / sum v) and A2 (circle:
/// length / max_i i*v_i with speeds sorted descending).
inline ComparisonReport compare(const Schedule& s) {
  ComparisonReport r;
  const IdleReport idle = exact_idle(s);
  r.idle = idle.idle;
  std::vector<Rational> speeds = speeds_of(s);
  r.lower_bound = volume_lower_bound(s.fence, speeds);
  if (!r.idle) return r;
  if (s.fence.is_circle()) {
    std::sort(speeds.begin(), speeds.end(), std::greater<>());
    Rational best;
    for (std::size_t i = 0; i < speeds.size(); ++i) {
      Rational m = Rational(static_cast<std::int64_t>(i + 1)) * speeds[i];
      if (m > best) best = std::move(m);
    }
    r.rho_vs_a2 = *r.idle * best / s.fence.length;
  } else {
    r.rho_vs_a1 = *r.idle * sum_exact(speeds) / (Rational(2) * s.fence.length);
  }
  return r;
}

}  // namespace patrol
