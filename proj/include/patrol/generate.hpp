#pragma once

// Schedule constructors. Each returns the schedule, the closed-form idle time
// when one is known, and ordered key=value metadata.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patrol/error.hpp"
#include "patrol/gaps.hpp"
#include "patrol/model.hpp"
#include "patrol/rational.hpp"

namespace patrol {

struct GeneratorOutput {
  Schedule schedule;
  std::optional<Rational> predicted_idle;
  std::vector<std::pair<std::string, std::string>> metadata;

  void meta(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
  void meta(std::string key, const Rational& value) { meta(std::move(key), value.str()); }

  const std::string* find(std::string_view key) const {
    for (const auto& [k, v] : metadata) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

namespace detail {

inline Rational rint(std::int64_t v) { return Rational(v); }

inline void require_positive(std::span<const Rational> speeds) {
  if (speeds.empty()) throw Error(ErrorCode::EmptySpeeds, "no speeds given");
  for (const auto& v : speeds) {
    if (v.sign() <= 0) throw Error(ErrorCode::NonpositiveInput, "speed " + v.str());
  }
}

/// max_i i * v_i over speeds sorted descending, and the smallest maximizing i.
inline std::pair<Rational, std::size_t> best_index_product(std::span<const Rational> sorted) {
  Rational best;
  std::size_t r = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    Rational m = rint(static_cast<std::int64_t>(i + 1)) * sorted[i];
    if (m > best) {
      best = std::move(m);
      r = i + 1;
    }
  }
  return {best, r};
}

inline Agent make_agent(int id, Rational max_speed, const Fence& fence, const std::vector<Breakpoint>& unwrapped) {
  return Agent{id, std::move(max_speed), wrap_normalize(fence, unwrapped)};
}

/// Polyline from a start position and (duration, velocity) legs.
inline std::vector<Breakpoint> from_legs(const Rational& start,
                                         std::initializer_list<std::pair<Rational, Rational>> legs) {
  std::vector<Breakpoint> bp{{Rational(), start}};
  for (const auto& [dt, v] : legs) {
    const Breakpoint& last = bp.back();
    bp.push_back({last.time + dt, last.position + dt * v});
  }
  return bp;
}

/// Repeats a one-period unwrapped polyline `times` times.
inline std::vector<Breakpoint> repeat(const std::vector<Breakpoint>& bp, const Rational& period, int times) {
  const Rational drift = bp.back().position - bp.front().position;
  std::vector<Breakpoint> out;
  for (int k = 0; k < times; ++k) {
    for (std::size_t i = k == 0 ? 0 : 1; i < bp.size(); ++i) {
      out.push_back({bp[i].time + rint(k) * period, bp[i].position + rint(k) * drift});
    }
  }
  return out;
}

inline Rational rho_for(const Schedule& s, const Rational& idle) {
  std::vector<Rational> speeds;
  for (const auto& a : s.agents) speeds.push_back(a.max_speed);
  if (s.fence.is_circle()) {
    std::sort(speeds.begin(), speeds.end(), std::greater<>());
    return idle * best_index_product(speeds).first / s.fence.length;
  }
  return idle * sum_exact(speeds) / (rint(2) * s.fence.length);
}

inline void standard_metadata(GeneratorOutput& out) {
  std::vector<Rational> speeds;
  for (const auto& a : out.schedule.agents) speeds.push_back(a.max_speed);
  out.meta("k", std::to_string(out.schedule.agents.size()));
  const Rational sum = sum_exact(speeds);
  std::string text = sum.str();
  if (text.size() > 80) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", sum.to_double());
    out.meta("speed_sum_approx", buf);
  } else {
    out.meta("speed_sum", std::move(text));
  }
  if (out.predicted_idle) {
    out.meta("predicted_idle", *out.predicted_idle);
    out.meta("rho", rho_for(out.schedule, *out.predicted_idle));
  }
}

}  // namespace detail

/// A1 on a segment: agent i sweeps back and forth over its own piece of
/// length l * v_i / sum v.
inline GeneratorOutput gen_partition_a1(const Rational& length, std::span<const Rational> speeds) {
  detail::require_positive(speeds);
  if (length.sign() <= 0) throw Error(ErrorCode::NonpositiveInput, "length " + length.str());
  const Rational total = sum_exact(speeds);
  const Rational half = length / total;  // one sweep takes the same time for every agent
  GeneratorOutput out;
  out.schedule.fence = {FenceKind::Segment, length};
  out.schedule.time_model = TimeModel::periodic(detail::rint(2) * half);
  Rational left;
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    const Rational right = i + 1 == speeds.size() ? length : left + length * speeds[i] / total;
    out.schedule.agents.push_back(detail::make_agent(static_cast<int>(i + 1), speeds[i], out.schedule.fence,
                                                     {{Rational(), left}, {half, right}, {half * detail::rint(2), left}}));
    left = right;
  }
  out.predicted_idle = detail::rint(2) * length / total;
  detail::standard_metadata(out);
  return out;
}

/// A2 on the unit circle: the r fastest agents run at v_r, spaced 1/r apart,
/// where r is the smallest index maximizing i * v_i.
inline GeneratorOutput gen_runners_a2(std::span<const Rational> speeds) {
  detail::require_positive(speeds);
  for (std::size_t i = 0; i + 1 < speeds.size(); ++i) {
    if (speeds[i] < speeds[i + 1]) throw Error(ErrorCode::UnsortedSpeeds, "speeds must be non-increasing");
  }
  const auto [best, r] = detail::best_index_product(speeds);
  const Rational& vr = speeds[r - 1];
  GeneratorOutput out;
  out.schedule.fence = {FenceKind::Circle, 1};
  out.schedule.direction = Direction::Unidirectional;
  const Rational period = Rational(1) / vr;
  out.schedule.time_model = TimeModel::periodic(period);
  for (std::size_t i = 0; i < r; ++i) {
    const Rational start = detail::rint(static_cast<std::int64_t>(i)) / detail::rint(static_cast<std::int64_t>(r));
    out.schedule.agents.push_back(detail::make_agent(static_cast<int>(i + 1), speeds[i], out.schedule.fence,
                                                     {{Rational(), start}, {period, start + Rational(1)}}));
  }
  out.predicted_idle = Rational(1) / best;
  detail::standard_metadata(out);
  out.meta("r", std::to_string(r));
  out.meta("discarded", std::to_string(speeds.size() - r));
  return out;
}

/// Closed-form idle of the train algorithm on the unit circle.
inline Rational train_idle(const Rational& a, const Rational& b, std::int64_t k) {
  return detail::rint(2) * a / (a * a - b * b + detail::rint(2 * (k - 2)) * a * b);
}

/// Schedules above this many breakpoints are refused rather than built.
inline constexpr std::size_t kMaxBreakpoints = 2'000'000;

/// A3 on the unit circle: agents 2..k move clockwise at speed b spaced x
/// apart; agent 1 (speed a) bounces between the tail and the head of the
/// train across the remaining arc y.
inline GeneratorOutput gen_train_a3(const Rational& a, const Rational& b, std::int64_t k) {
  if (b.sign() <= 0) throw Error(ErrorCode::NonpositiveInput, "speed b " + b.str());
  if (a <= b) throw Error(ErrorCode::SpeedOrder, "need a > b, got a=" + a.str() + " b=" + b.str());
  if (k < 3) throw Error(ErrorCode::BadK, "need k >= 3, got " + std::to_string(k));
  const Rational idle = train_idle(a, b, k);
  const Rational x = b * idle;
  const Rational y = Rational(1) - detail::rint(k - 2) * x;
  const Rational forward = y / (a - b);
  const Rational back = y / (a + b);
  const Rational cycle = x / b;  // == forward + back
  const Rational lap = Rational(1) / b;
  const std::vector<Rational> periods{lap, cycle};
  const Rational period = common_period(periods);
  const Rational cycles = period / cycle;
  const Rational laps = period / lap;
  const Rational estimate = cycles * detail::rint(2) + laps * detail::rint(k - 1) + period * a;
  if (estimate > Rational(static_cast<std::int64_t>(kMaxBreakpoints))) {
    throw Error(ErrorCode::BadParams, "train schedule too large to build: period " + period.str() + ", about " +
                                          floor(estimate).str() + " breakpoints");
  }
  GeneratorOutput out;
  out.schedule.fence = {FenceKind::Circle, 1};
  out.schedule.time_model = TimeModel::periodic(period);
  std::vector<Breakpoint> bouncer{{Rational(), Rational()}};
  const std::int64_t n = floor(cycles).numerator().get_si();
  for (std::int64_t c = 0; c < n; ++c) {
    const Breakpoint& last = bouncer.back();
    const Breakpoint turn{last.time + forward, last.position + a * forward};
    bouncer.push_back(turn);
    bouncer.push_back({turn.time + back, turn.position - a * back});
  }
  out.schedule.agents.push_back(detail::make_agent(1, a, out.schedule.fence, bouncer));
  for (std::int64_t j = 0; j + 1 < k; ++j) {
    const Rational start = y + detail::rint(j) * x;
    out.schedule.agents.push_back(detail::make_agent(static_cast<int>(j + 2), b, out.schedule.fence,
                                                     {{Rational(), start}, {period, start + b * period}}));
  }
  out.predicted_idle = idle;
  detail::standard_metadata(out);
  out.meta("x", x);
  out.meta("y", y);
  out.meta("period", period);
  return out;
}

namespace detail {

/// Unwrapped one-period trajectories of the six harmonic agents (period 8).
inline std::vector<std::vector<Breakpoint>> harmonic6_paths() {
  const Rational h(1, 2);
  return {
      from_legs(0, {{8, 1}}),
      from_legs(0, {{8, h}}),
      from_legs(Rational(2, 3), {{Rational(5, 2), Rational(1, 3)}, {1, 0}, {3, Rational(1, 3)}, {1, 0},
                                 {h, Rational(1, 3)}}),
      from_legs(Rational(1, 4), {{8, Rational(1, 4)}}),
      from_legs(0, {{2, 0}, {Rational(5, 2), Rational(1, 5)}, {1, 0}, {Rational(5, 2), Rational(1, 5)}}),
      from_legs(Rational(5, 12), {{h, Rational(1, 6)}, {1, 0}, {3, Rational(1, 6)}, {1, 0},
                                  {Rational(5, 2), Rational(1, 6)}}),
  };
}

}  // namespace detail

/// Six agents of speeds 1/i on the unit circle with idle time 1.
inline GeneratorOutput gen_harmonic6() {
  GeneratorOutput out;
  out.schedule.fence = {FenceKind::Circle, 1};
  out.schedule.direction = Direction::Unidirectional;
  out.schedule.time_model = TimeModel::periodic(8);
  const auto paths = detail::harmonic6_paths();
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto id = static_cast<std::int64_t>(i + 1);
    out.schedule.agents.push_back(
        detail::make_agent(static_cast<int>(id), Rational(1, id), out.schedule.fence, paths[i]));
  }
  out.predicted_idle = Rational(1);
  detail::standard_metadata(out);
  return out;
}

/// Group assignment of the 32-agent schedule: (group size, critical points (t, x)).
struct CriticalAssignment {
  int group_size;
  Rational time;
  Rational position;
};

inline std::vector<CriticalAssignment> harmonic32_assignment() {
  const Rational h(1, 2);
  return {{2, 1, 0}, {2, 3, 0}, {2, 4, 0}, {2, 5, 0},
          {4, 6, 0}, {4, 7, 0}, {4, Rational(3, 2), h}, {4, Rational(15, 2), h}};
}

/// 32 agents of speeds 1/i on the unit circle with idle time below 1.
/// `skip` drops the group assigned to that critical point.
inline GeneratorOutput gen_harmonic32(std::optional<std::pair<Rational, Rational>> skip = std::nullopt) {
  GeneratorOutput out;
  Schedule& s = out.schedule;
  s.fence = {FenceKind::Circle, 1};
  s.direction = Direction::Unidirectional;
  const Rational period(32);
  s.time_model = TimeModel::periodic(period);
  const auto paths = detail::harmonic6_paths();
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto id = static_cast<std::int64_t>(i + 1);
    s.agents.push_back(
        detail::make_agent(static_cast<int>(id), Rational(1, id), s.fence, detail::repeat(paths[i], 8, 4)));
  }
  // f(t) = (t - phi) / (8g) mod 1
  auto runner = [&](int id, const Rational& phi, std::int64_t g) {
    const Rational v(1, 8 * g);
    const Rational start = -phi * v;
    s.agents.push_back(
        detail::make_agent(id, Rational(1, id), s.fence, {{Rational(), start}, {period, start + period * v}}));
  };
  runner(7, Rational(1, 3), 1);
  runner(8, Rational(7, 3), 1);
  int id = 9;
  std::string groups;
  for (const auto& [g, ts, xs] : harmonic32_assignment()) {
    const Rational span = detail::rint(8 * g);
    const Rational phi = mod(ts + Rational(1, 2) - span * xs, span);
    const bool dropped = skip && skip->first == ts && skip->second == xs;
    if (!groups.empty()) groups += ';';
    groups += "(" + ts.str() + "," + xs.str() + ")->a" + std::to_string(id) + "..a" + std::to_string(id + g - 1);
    for (int m = 0; m < g; ++m, ++id) {
      if (!dropped) runner(id, phi + detail::rint(8 * m), g);
    }
  }
  detail::standard_metadata(out);
  out.meta("predicted_idle", "<1");
  out.meta("critical_points", "(0,0);(1,0);(2,0);(3,0);(4,0);(5,0);(6,0);(7,0);(3/2,1/2);(7/2,1/2);(11/2,1/2);(15/2,1/2)");
  out.meta("groups", "(0,0),(7/2,1/2)->a7;(2,0),(11/2,1/2)->a8;" + groups);
  return out;
}

/// Agents a_first..a_last used in one window of the finite-horizon greedy.
struct GreedyWindow {
  std::uint64_t first = 0;
  std::uint64_t last = 0;
};

namespace detail {

/// Whether 1 + sum_{i=lo}^{hi} 1/i >= 2/tau, exactly.
inline bool greedy_covers(std::uint64_t lo, std::uint64_t hi, const Rational& tau) {
  auto [p, q] = harmonic_sum_unreduced(lo, hi);
  return (q + p) * tau.numerator() >= 2 * q * tau.denominator();
}

inline long double harmonic_estimate(long double n) {
  if (n < 1) return 0;
  return std::log(n) + 0.57721566490153286061L + 1 / (2 * n) - 1 / (12 * n * n);
}

/// Smallest hi >= lo with 1 + sum_{lo}^{hi} 1/i >= 2/tau.
inline std::uint64_t greedy_last(std::uint64_t lo, const Rational& tau) {
  const long double need = 2 / tau.to_double() - 1 + harmonic_estimate(static_cast<long double>(lo - 1));
  long double guess = std::exp(need - 0.57721566490153286061L);
  auto hi = static_cast<std::uint64_t>(std::max<long double>(guess, static_cast<long double>(lo)));
  while (hi > lo && greedy_covers(lo, hi - 1, tau)) --hi;
  while (!greedy_covers(lo, hi, tau)) ++hi;
  return hi;
}

}  // namespace detail

/// Finite-horizon greedy on the unit circle. Time [0, m*tau] is split into
/// 2m windows of length tau/2. a_1 loops at unit speed; in each window fresh
/// agents, stationed at their start points since time 0, extend the arc a_1
/// covers until the whole circle is covered, then halt.
///
/// Start offsets are rounded down to a dyadic grid 1/D fine enough that the
/// accumulated rounding never eats the window's overshoot, so coverage is kept.
inline GeneratorOutput gen_greedy_finite(const Rational& tau, const Rational& t,
                                         std::vector<GreedyWindow>* windows_out = nullptr) {
  if (tau.sign() <= 0 || tau > Rational(1)) throw Error(ErrorCode::BadTau, "tau must be in (0,1], got " + tau.str());
  if (t < tau) throw Error(ErrorCode::BadHorizon, "need t >= tau, got t=" + t.str());
  const Rational m = ceil(t / tau);
  const Rational horizon = m * tau;
  const Rational half = tau / Rational(2);
  const std::int64_t windows = 2 * m.numerator().get_si();

  GeneratorOutput out;
  Schedule& s = out.schedule;
  s.fence = {FenceKind::Circle, 1};
  s.direction = Direction::Unidirectional;
  s.time_model = TimeModel::horizon(horizon);
  s.agents.push_back(detail::make_agent(1, 1, s.fence, {{Rational(), Rational()}, {horizon, horizon}}));

  std::vector<GreedyWindow> used;
  std::uint64_t next = 2;
  std::string grids;
  for (std::int64_t j = 1; j <= windows; ++j) {
    const std::uint64_t lo = next;
    const std::uint64_t hi = detail::greedy_last(lo, tau);
    used.push_back({lo, hi});
    next = hi + 1;

    // overshoot = tau/2 * (1 + S) - 1; choose D with n / D <= overshoot
    auto [p, q] = harmonic_sum_unreduced(lo, hi);
    const mpz_class over_num = tau.numerator() * (q + p) - 2 * tau.denominator() * q;
    mpz_class grid = 0;
    if (over_num > 0) {
      const mpz_class n = static_cast<unsigned long>(hi - lo + 1);
      mpz_class need = n * 2 * tau.denominator() * q;
      mpz_cdiv_q(need.get_mpz_t(), need.get_mpz_t(), over_num.get_mpz_t());
      grid = 1;
      while (grid < need) grid *= 2;
    }
    if (!grids.empty()) grids += ',';
    grids += grid == 0 ? std::string("exact") : grid.get_str();
    const Rational d = grid == 0 ? Rational() : Rational::from_parts(grid, 1);

    const Rational start_time = detail::rint(j - 1) * half;
    const Rational end_time = start_time + half;
    const Rational& base = start_time;  // a_1's unwrapped position at the window start
    Rational offset = half;
    for (std::uint64_t i = lo; i <= hi; ++i) {
      const Rational speed(1, static_cast<std::int64_t>(i));
      const Rational reach = half * speed;
      Rational stop_time = end_time;
      Rational stop = offset + reach;
      if (stop > Rational(1)) {
        stop_time = start_time + (Rational(1) - offset) / speed;
        stop = Rational(1);
      }
      const Rational from = mod(base + offset, 1);
      const Rational to = from + (stop - offset);
      std::vector<Breakpoint> bp{{Rational(), from}};
      if (start_time.sign() > 0) bp.push_back({start_time, from});
      bp.push_back({stop_time, to});
      if (stop_time < horizon) bp.push_back({horizon, to});
      s.agents.push_back(detail::make_agent(static_cast<int>(i), speed, s.fence, bp));
      offset = grid == 0 ? stop : floor(stop * d) / d;
    }
  }
  const std::uint64_t k = next - 1;

  // H_k <= 4t/tau^2 + 1 - 8t/(5 tau), exactly
  auto [hp, hq] = harmonic_sum_unreduced(1, k);
  const Rational rhs = Rational(4) * horizon / (tau * tau) + Rational(1) - Rational(8) * horizon / (Rational(5) * tau);
  const bool bound_ok = hp * rhs.denominator() <= rhs.numerator() * hq;
  const bool k_bound = std::log(static_cast<long double>(k)) <= 4 * horizon.to_double() / (tau.to_double() * tau.to_double());

  detail::standard_metadata(out);
  out.meta("horizon", horizon);
  out.meta("padding", horizon - t);
  out.meta("windows", std::to_string(windows));
  std::string ranges;
  for (const auto& w : used) {
    if (!ranges.empty()) ranges += ';';
    ranges += std::to_string(w.first) + ".." + std::to_string(w.last);
  }
  out.meta("window_agents", ranges);
  out.meta("grids", grids);
  out.meta("harmonic_bound_holds", bound_ok ? "true" : "false");
  out.meta("k_le_exp_bound", k_bound ? "true" : "false");
  if (windows_out) *windows_out = std::move(used);
  return out;
}

/// Speed needed to cover a boundary triangle (base b, height h) alone.
inline Rational covering_speed_s1(const Rational& b, const Rational& h) { return h / (Rational(1) - b / Rational(2)); }

/// Speed needed by an agent alternating between two triangles across a
/// boundary with vertical spacing y.
inline Rational covering_speed_s2(const Rational& b, const Rational& h, const Rational& y) {
  return h / (Rational(3) * b / Rational(2) + y - Rational(1));
}

namespace detail {

/// Unwrapped bounce on [0, len] from `start` in direction dir (+1/-1) over [0, period].
inline std::vector<Breakpoint> bounce(const Rational& len, const Rational& speed, const Rational& start, int dir,
                                      const Rational& period) {
  std::vector<Breakpoint> bp{{Rational(), start}};
  Rational t;
  Rational x = start;
  while (t < period) {
    Rational target = dir > 0 ? len : Rational();
    Rational dt = abs(target - x) / speed;
    if (t + dt > period) {
      dt = period - t;
      target = x + (dir > 0 ? speed : -speed) * dt;
    }
    t += dt;
    x = target;
    if (bp.back().time != t) bp.push_back({t, x});
    dir = -dir;
  }
  return bp;
}

/// Restricts a time-sorted polyline spanning [0, period] to that interval.
inline std::vector<Breakpoint> cut_period(const std::vector<Breakpoint>& pts, const Rational& period) {
  auto at = [&](const Rational& t) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (pts[i].time <= t && t <= pts[i + 1].time) {
        return pts[i].position +
               (pts[i + 1].position - pts[i].position) * (t - pts[i].time) / (pts[i + 1].time - pts[i].time);
      }
    }
    throw std::logic_error("polyline does not span the period");
  };
  std::vector<Breakpoint> out{{Rational(), at(Rational())}};
  for (const auto& p : pts) {
    if (p.time.sign() > 0 && p.time < period) out.push_back(p);
  }
  out.push_back({period, at(period)});
  return out;
}

}  // namespace detail

inline const Rational& block_length() {
  static const Rational len(25, 3);
  return len;
}

inline const Rational& block_period() {
  static const Rational period(10, 3);
  return period;
}

/// The three speed-5 agents of `blocks` consecutive blocks, all with the same
/// phase (start positions 0, 5, 20/3 inside each block).
inline GeneratorOutput gen_zigzag(std::int64_t blocks = 1) {
  if (blocks < 1) throw Error(ErrorCode::BadX, "need at least one block");
  const Rational& len = block_length();
  const Rational& period = block_period();
  GeneratorOutput out;
  out.schedule.fence = {FenceKind::Segment, len * detail::rint(blocks)};
  out.schedule.time_model = TimeModel::periodic(period);
  const std::pair<Rational, int> starts[] = {{0, 1}, {5, -1}, {Rational(20, 3), 1}};
  int id = 1;
  for (std::int64_t b = 0; b < blocks; ++b) {
    const Rational shift = len * detail::rint(b);
    for (const auto& [start, dir] : starts) {
      auto bp = detail::bounce(len, 5, start, dir, period);
      for (auto& p : bp) p.position += shift;
      out.schedule.agents.push_back(detail::make_agent(id++, 5, out.schedule.fence, bp));
    }
  }
  detail::standard_metadata(out);
  out.meta("blocks", std::to_string(blocks));
  return out;
}

/// An uncovered triangle with a vertical base on the fence end or block boundary.
struct BoundaryTriangle {
  Rational base_x;
  Rational base_lo, base_hi;  // times
  Rational apex_x, apex_t;
  Rational base() const { return base_hi - base_lo; }
  Rational height() const { return abs(apex_x - base_x); }
};

/// Reads the triangles out of gap regions; throws if a region is not a
/// triangle with a vertical base.
inline std::vector<BoundaryTriangle> boundary_triangles(std::span<const GapRegion> regions) {
  std::vector<BoundaryTriangle> out;
  for (const auto& r : regions) {
    const auto& v = r.vertices;
    if (v.size() != 3) throw std::logic_error("gap region is not a triangle");
    bool found = false;
    for (std::size_t i = 0; i < 3 && !found; ++i) {
      const auto& a = v[i];
      const auto& b = v[(i + 1) % 3];
      const auto& c = v[(i + 2) % 3];
      if (a.x != b.x) continue;
      out.push_back({a.x, std::min(a.t, b.t), std::max(a.t, b.t), c.x, c.t});
      found = true;
    }
    if (!found) throw std::logic_error("gap triangle without a vertical base");
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.base_lo < b.base_lo || (a.base_lo == b.base_lo && a.base_x < b.base_x);
  });
  return out;
}

/// Block construction on a segment of length 25x/3: x blocks of three speed-5
/// zig-zag agents plus x+1 unit-speed agents that cover the triangles the
/// zig-zag agents leave at block ends. The unit agents' paths are read off
/// gap analysis of the zig-zag sub-schedule at candidate idle 1.
inline GeneratorOutput gen_blocks(std::int64_t x) {
  if (x < 2) throw Error(ErrorCode::BadX, "need x >= 2, got " + std::to_string(x));
  const Rational& period = block_period();
  GeneratorOutput out = gen_zigzag(x);
  out.metadata.clear();
  Schedule& s = out.schedule;
  const Rational& len = s.fence.length;

  const auto regions = analyze_gaps(s, 1);
  const auto triangles = boundary_triangles(regions);
  auto at_boundary = [&](const Rational& c) {
    std::vector<BoundaryTriangle> v;
    for (const auto& t : triangles) {
      if (t.base_x == c) v.push_back(t);
    }
    return v;
  };

  std::vector<Agent> units;
  auto add_unit = [&](std::vector<Breakpoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    units.push_back(detail::make_agent(0, 1, s.fence, detail::cut_period(pts, period)));
  };
  // Outer agents: out to the apex and back, then wait at the end.
  for (const Rational& end : {Rational(), len}) {
    const auto tri = at_boundary(end);
    if (tri.size() != 1) throw std::logic_error("expected one triangle per period at a fence end");
    const auto& tr = tri.front();
    const Rational h = tr.height();
    std::vector<Breakpoint> pts;
    for (std::int64_t k = -2; k <= 2; ++k) {
      const Rational shift = detail::rint(k) * period;
      pts.push_back({tr.apex_t - h + shift, end});
      pts.push_back({tr.apex_t + shift, tr.apex_x});
      pts.push_back({tr.apex_t + h + shift, end});
    }
    add_unit(std::move(pts));
  }
  // Shared agents: straight lines through the apexes on both sides of a boundary.
  for (std::int64_t b = 1; b < x; ++b) {
    const Rational c = block_length() * detail::rint(b);
    const auto tri = at_boundary(c);
    if (tri.size() != 2) throw std::logic_error("expected two triangles per period at a block boundary");
    std::vector<Breakpoint> pts;
    for (std::int64_t k = -2; k <= 2; ++k) {
      for (const auto& tr : tri) pts.push_back({tr.apex_t + detail::rint(k) * period, tr.apex_x});
    }
    add_unit(std::move(pts));
  }
  int id = static_cast<int>(s.agents.size()) + 1;
  for (auto& u : units) {
    u.id = id++;
    s.agents.push_back(std::move(u));
  }

  const auto& tr = triangles.front();
  out.predicted_idle = Rational(1);
  detail::standard_metadata(out);
  out.meta("x", std::to_string(x));
  out.meta("length", len);
  out.meta("triangle_base", tr.base());
  out.meta("triangle_height", tr.height());
  return out;
}

enum class Algo { A1, A2, A3 };

struct FormulaParams {
  Rational length = 1;
  std::vector<Rational> speeds;  // A1, A2
  Rational a, b;                 // A3
  std::int64_t k = 0;            // A3
};

/// Closed-form idle time of A1, A2 or A3.
inline Rational predicted_idle_formula(Algo algo, const FormulaParams& p) {
  try {
    switch (algo) {
      case Algo::A1:
        detail::require_positive(p.speeds);
        if (p.length.sign() <= 0) break;
        return Rational(2) * p.length / sum_exact(p.speeds);
      case Algo::A2:
        detail::require_positive(p.speeds);
        for (std::size_t i = 0; i + 1 < p.speeds.size(); ++i) {
          if (p.speeds[i] < p.speeds[i + 1]) throw Error(ErrorCode::BadParams, "speeds must be non-increasing");
        }
        return Rational(1) / detail::best_index_product(p.speeds).first;
      case Algo::A3:
        if (p.b.sign() <= 0 || p.a <= p.b || p.k < 3) break;
        return train_idle(p.a, p.b, p.k);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BadParams) throw;
    throw Error(ErrorCode::BadParams, e.what());
  }
  throw Error(ErrorCode::BadParams, "invalid parameters");
}

}  // namespace patrol
