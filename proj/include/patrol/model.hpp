#pragma once

// Fences, piecewise-linear trajectories and schedules.
//
// Trajectories are stored wrap-normalized: every stored position lies in
// [0, length]. On a circle a crossing of the seam becomes a pair of
// breakpoints with equal time and positions (length, 0) when moving
// clockwise, or (0, length) when moving counterclockwise. Those zero-duration
// pairs are the only pieces allowed to have equal endpoint times.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "patrol/error.hpp"
#include "patrol/rational.hpp"

namespace patrol {

enum class FenceKind { Segment, Circle };

struct Fence {
  FenceKind kind = FenceKind::Segment;
  Rational length = 1;

  bool is_circle() const { return kind == FenceKind::Circle; }
  friend bool operator==(const Fence&, const Fence&) = default;
};

struct Breakpoint {
  Rational time;
  Rational position;
  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

struct Trajectory {
  std::vector<Breakpoint> breakpoints;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct Agent {
  int id = 0;
  Rational max_speed = 1;
  Trajectory trajectory;
  friend bool operator==(const Agent&, const Agent&) = default;
};

enum class TimeModelKind { Periodic, Horizon };

/// Either a period (trajectories repeat) or a finite horizon [0, end].
struct TimeModel {
  TimeModelKind kind = TimeModelKind::Periodic;
  Rational value = 1;

  static TimeModel periodic(Rational period) { return {TimeModelKind::Periodic, std::move(period)}; }
  static TimeModel horizon(Rational end) { return {TimeModelKind::Horizon, std::move(end)}; }

  bool is_periodic() const { return kind == TimeModelKind::Periodic; }
  /// Period or horizon end; either way the last breakpoint time.
  const Rational& end() const { return value; }
  friend bool operator==(const TimeModel&, const TimeModel&) = default;
};

enum class Direction { None, Unidirectional };

struct Schedule {
  Fence fence;
  TimeModel time_model;
  std::vector<Agent> agents;
  Direction direction = Direction::None;
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// One linear piece of an agent's trajectory.
struct Piece {
  std::size_t agent = 0;  // index into Schedule::agents
  std::size_t index = 0;  // piece i joins breakpoints i and i+1
  Breakpoint from;
  Breakpoint to;

  bool is_wrap_marker() const { return from.time == to.time; }
  bool is_stationary() const { return from.position == to.position; }
  const Rational& lo() const { return std::min(from.position, to.position); }
  const Rational& hi() const { return std::max(from.position, to.position); }
  /// dt/dx of a moving piece; the time at which it sits at x is from.time + (x - from.position) * inverse_slope().
  Rational inverse_slope() const { return (to.time - from.time) / (to.position - from.position); }
  Rational time_at(const Rational& x) const { return from.time + (x - from.position) * inverse_slope(); }
};

/// Every non-marker piece of every agent, in agent then time order.
inline std::vector<Piece> pieces_of(const Schedule& s) {
  std::vector<Piece> out;
  for (std::size_t a = 0; a < s.agents.size(); ++a) {
    const auto& bp = s.agents[a].trajectory.breakpoints;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      Piece p{a, i, bp[i], bp[i + 1]};
      if (!p.is_wrap_marker()) out.push_back(std::move(p));
    }
  }
  return out;
}

/// Converts a trajectory given in unwrapped coordinates (times strictly
/// increasing, positions any rational) into stored form. On a segment the
/// input is returned unchanged.
inline Trajectory wrap_normalize(const Fence& fence, std::span<const Breakpoint> unwrapped) {
  Trajectory out;
  if (unwrapped.empty()) return out;
  if (!fence.is_circle()) {
    out.breakpoints.assign(unwrapped.begin(), unwrapped.end());
    return out;
  }
  const Rational& len = fence.length;
  auto push = [&](const Rational& t, const Rational& x) {
    if (!out.breakpoints.empty()) {
      const Breakpoint& last = out.breakpoints.back();
      if (last.time == t && last.position == x) return;
    }
    out.breakpoints.push_back({t, x});
  };
  // The cell is the copy of [0, len] holding the piece's interior.
  auto emit = [&](const Rational& t0, const Rational& u0, const Rational& t1, const Rational& u1) {
    const Rational cell = floor(std::min(u0, u1) / len) * len;
    const Rational s0 = u0 - cell;
    const Rational s1 = u1 - cell;
    push(t0, s0);  // differs from the previous end only at a seam crossing: that pair is the marker
    push(t1, s1);
  };
  for (std::size_t i = 0; i + 1 < unwrapped.size(); ++i) {
    const auto& [t0, u0] = unwrapped[i];
    const auto& [t1, u1] = unwrapped[i + 1];
    if (u0 == u1) {
      emit(t0, u0, t1, u1);
      continue;
    }
    const bool forward = u1 > u0;
    const Rational lo = std::min(u0, u1);
    const Rational hi = std::max(u0, u1);
    std::vector<Rational> cuts;
    for (Rational c = (floor(lo / len) + 1) * len; c < hi; c += len) cuts.push_back(c);
    if (!forward) std::reverse(cuts.begin(), cuts.end());
    Rational ta = t0;
    Rational ua = u0;
    for (const Rational& c : cuts) {
      const Rational tc = t0 + (c - u0) * (t1 - t0) / (u1 - u0);
      emit(ta, ua, tc, c);
      ta = tc;
      ua = c;
    }
    emit(ta, ua, t1, u1);
  }
  if (unwrapped.size() == 1) {
    out.breakpoints.push_back({unwrapped[0].time, mod(unwrapped[0].position, len)});
  }
  return out;
}

/// Position of the agent at time t, wrapped into [0, length) on a circle.
inline Rational eval_trajectory(const Trajectory& traj, const Fence& fence, const TimeModel& time_model,
                                const Rational& t) {
  const auto& bp = traj.breakpoints;
  if (bp.empty()) throw Error(ErrorCode::InvalidSchedule, "empty trajectory");
  if (t.sign() < 0) throw Error(ErrorCode::TimeOutOfRange, "negative time " + t.str());
  Rational local = t;
  if (time_model.is_periodic()) {
    local = mod(t, time_model.end());
  } else if (t > time_model.end()) {
    throw Error(ErrorCode::TimeOutOfRange, "time " + t.str() + " beyond horizon " + time_model.end().str());
  }
  Rational x;
  auto it = std::upper_bound(bp.begin(), bp.end(), local,
                             [](const Rational& v, const Breakpoint& b) { return v < b.time; });
  if (it == bp.end()) {
    x = bp.back().position;
  } else if (it == bp.begin()) {
    x = bp.front().position;
  } else {
    const Breakpoint& b = *it;
    const Breakpoint& a = *(it - 1);
    x = a.position + (b.position - a.position) * (local - a.time) / (b.time - a.time);
  }
  if (fence.is_circle()) x = mod(x, fence.length);
  return x;
}

struct Finding {
  std::string code;
  int agent_id = 0;
  std::optional<std::size_t> piece;
  std::string detail;

  std::string str() const {
    std::ostringstream os;
    os << code;
    if (agent_id != 0) os << " agent=" << agent_id;
    if (piece) os << " piece=" << *piece;
    if (!detail.empty()) os << " (" << detail << ")";
    return os.str();
  }
};

struct AgentValidation {
  int id = 0;
  bool continuity = true;
  bool speed = true;
  bool closure = true;
  std::optional<bool> direction;  // only evaluated for unidirectional schedules

  bool ok() const { return continuity && speed && closure && direction.value_or(true); }
};

struct ValidationReport {
  std::vector<AgentValidation> agents;
  std::vector<Finding> findings;

  bool ok() const { return findings.empty(); }

  std::string summary() const {
    std::size_t passed = 0;
    for (const auto& a : agents) passed += a.ok() ? 1 : 0;
    std::ostringstream os;
    os << "valid=" << (ok() ? "true" : "false") << " agents_ok=" << passed << "/" << agents.size();
    return os.str();
  }
};

/// Checks continuity, per-piece speed bounds, period closure and (for
/// unidirectional schedules) direction. Never throws; all problems are
/// reported as findings.
inline ValidationReport validate_schedule(const Schedule& s) {
  ValidationReport report;
  auto schedule_finding = [&](std::string code, std::string detail) {
    report.findings.push_back({std::move(code), 0, std::nullopt, std::move(detail)});
  };
  if (s.fence.length.sign() <= 0) schedule_finding("NONPOSITIVE_LENGTH", s.fence.length.str());
  if (s.time_model.end().sign() <= 0) schedule_finding("NONPOSITIVE_PERIOD", s.time_model.end().str());
  if (s.agents.empty()) schedule_finding("NO_AGENTS", "");
  const bool uni = s.direction == Direction::Unidirectional;
  if (uni && !s.fence.is_circle()) schedule_finding("DIRECTION_ON_SEGMENT", "unidirectional needs a circle");
  if (!report.findings.empty()) return report;

  const Rational& len = s.fence.length;
  const Rational& end = s.time_model.end();
  std::vector<int> ids;
  for (const Agent& agent : s.agents) {
    AgentValidation av;
    av.id = agent.id;
    if (uni) av.direction = true;
    auto fail = [&](bool AgentValidation::*field, std::string code, std::optional<std::size_t> piece,
                    std::string detail) {
      av.*field = false;
      report.findings.push_back({std::move(code), agent.id, piece, std::move(detail)});
    };
    auto fail_direction = [&](std::size_t piece, std::string detail) {
      av.direction = false;
      report.findings.push_back({"DIRECTION_VIOLATION", agent.id, piece, std::move(detail)});
    };
    ids.push_back(agent.id);
    const auto& bp = agent.trajectory.breakpoints;
    if (agent.max_speed.sign() <= 0) {
      fail(&AgentValidation::speed, "NONPOSITIVE_SPEED", std::nullopt, agent.max_speed.str());
    }
    if (bp.size() < 2) {
      fail(&AgentValidation::continuity, "TOO_FEW_BREAKPOINTS", std::nullopt, "");
      report.agents.push_back(av);
      continue;
    }
    if (bp.front().time.sign() != 0) {
      fail(&AgentValidation::continuity, "START_TIME", std::nullopt, "first time " + bp.front().time.str());
    }
    if (bp.back().time != end) {
      fail(&AgentValidation::closure, "END_TIME", std::nullopt,
           "last time " + bp.back().time.str() + " != " + end.str());
    }
    for (std::size_t i = 0; i < bp.size(); ++i) {
      if (bp[i].position.sign() < 0 || bp[i].position > len) {
        fail(&AgentValidation::continuity, "POSITION_OUT_OF_RANGE", i, bp[i].position.str());
      }
    }
    bool previous_was_marker = false;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      const Breakpoint& a = bp[i];
      const Breakpoint& b = bp[i + 1];
      const Rational dt = b.time - a.time;
      const Rational dx = b.position - a.position;
      if (dt.sign() < 0) {
        fail(&AgentValidation::continuity, "NON_MONOTONE_TIME", i, a.time.str() + " > " + b.time.str());
        continue;
      }
      if (dt.sign() == 0) {
        const bool wrap = s.fence.is_circle() && abs(dx) == len;
        if (dx.sign() == 0) {
          fail(&AgentValidation::continuity, "DEGENERATE_PIECE", i, "zero-length piece");
        } else if (!wrap) {
          fail(&AgentValidation::continuity, "DISCONTINUITY", i, a.position.str() + " -> " + b.position.str());
        } else if (previous_was_marker) {
          fail(&AgentValidation::continuity, "DISCONTINUITY", i, "consecutive wrap markers");
        } else if (uni && dx.sign() > 0) {
          fail_direction(i, "counterclockwise wrap");
        }
        previous_was_marker = true;
        continue;
      }
      previous_was_marker = false;
      if (abs(dx) > agent.max_speed * dt) {
        fail(&AgentValidation::speed, "SPEED_EXCEEDED", i,
             "speed " + (abs(dx) / dt).str() + " > " + agent.max_speed.str());
      }
      if (uni && dx.sign() < 0) fail_direction(i, "negative slope");
    }
    if (s.time_model.is_periodic()) {
      const Rational diff = abs(bp.back().position - bp.front().position);
      const bool closed = diff.sign() == 0 || (s.fence.is_circle() && diff == len);
      if (!closed) {
        fail(&AgentValidation::closure, "PERIOD_CLOSURE", std::nullopt,
             bp.front().position.str() + " vs " + bp.back().position.str());
      }
    }
    report.agents.push_back(av);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) schedule_finding("DUPLICATE_ID", "");
  return report;
}

/// Least common multiple of a list of positive periods.
inline Rational common_period(std::span<const Rational> periods) {
  if (periods.empty()) throw Error(ErrorCode::NonpositiveInput, "no periods given");
  Rational acc = periods.front();
  if (acc.sign() <= 0) throw Error(ErrorCode::NonpositiveInput, "period " + acc.str());
  for (std::size_t i = 1; i < periods.size(); ++i) acc = rational_lcm(acc, periods[i]);
  return acc;
}

}  // namespace patrol
