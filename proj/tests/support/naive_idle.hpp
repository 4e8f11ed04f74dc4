#pragma once

// Brute-force idle time used as an independent reference: every pair of
// pieces is intersected (with period-shifted copies), the gap is evaluated
// by scanning every piece, and one-sided limits are extrapolated from two
// nearby samples.

#include <algorithm>
#include <optional>
#include <vector>

#include "patrol/patrol.hpp"

namespace patrol::randomized {

struct NaivePiece {
  Breakpoint a, b;
};

inline std::vector<NaivePiece> naive_pieces(const Schedule& s) {
  std::vector<NaivePiece> out;
  for (const auto& agent : s.agents) {
    const auto& bp = agent.trajectory.breakpoints;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      if (bp[i].time != bp[i + 1].time) out.push_back({bp[i], bp[i + 1]});
    }
  }
  return out;
}

/// Times in [0, end] at which some piece is at position x; closed intervals.
inline std::vector<std::pair<Rational, Rational>> naive_visits(const Schedule& s, const std::vector<NaivePiece>& ps,
                                                               const Rational& x) {
  std::vector<std::pair<Rational, Rational>> v;
  std::vector<Rational> targets{x};
  if (s.fence.is_circle() && x.sign() == 0) targets.push_back(s.fence.length);
  if (s.fence.is_circle() && x == s.fence.length) targets.push_back(Rational());
  for (const auto& p : ps) {
    for (const auto& y : targets) {
      const Rational lo = std::min(p.a.position, p.b.position);
      const Rational hi = std::max(p.a.position, p.b.position);
      if (y < lo || y > hi) continue;
      if (p.a.position == p.b.position) {
        v.push_back({p.a.time, p.b.time});
      } else {
        const Rational t = p.a.time + (y - p.a.position) * (p.b.time - p.a.time) / (p.b.position - p.a.position);
        v.push_back({t, t});
      }
    }
  }
  std::sort(v.begin(), v.end());
  return v;
}

/// Longest gap at x; nullopt when a periodic point is never visited.
inline std::optional<Rational> naive_gap(const Schedule& s, const std::vector<NaivePiece>& ps, const Rational& x) {
  const auto v = naive_visits(s, ps, x);
  const Rational& end = s.time_model.end();
  if (v.empty()) {
    if (s.time_model.is_periodic()) return std::nullopt;
    return end;
  }
  Rational best;
  Rational reach = v.front().second;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].first > reach) best = std::max(best, v[i].first - reach);
    reach = std::max(reach, v[i].second);
  }
  if (s.time_model.is_periodic()) {
    best = std::max(best, end - reach + v.front().first);
  } else {
    best = std::max({best, v.front().first, end - reach});
  }
  return best;
}

inline std::vector<Rational> naive_candidates(const Schedule& s, const std::vector<NaivePiece>& ps) {
  std::vector<Rational> c{Rational(), s.fence.length};
  for (const auto& p : ps) {
    c.push_back(p.a.position);
    c.push_back(p.b.position);
  }
  const Rational& end = s.time_model.end();
  std::vector<Rational> shifts{Rational()};
  if (s.time_model.is_periodic()) {
    shifts.push_back(end);
    shifts.push_back(-end);
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const auto& p = ps[i];
      const auto& q = ps[j];
      if (p.a.position == p.b.position || q.a.position == q.b.position) continue;
      // t = k x + d
      const Rational kp = (p.b.time - p.a.time) / (p.b.position - p.a.position);
      const Rational kq = (q.b.time - q.a.time) / (q.b.position - q.a.position);
      if (kp == kq) continue;
      const Rational dp = p.a.time - kp * p.a.position;
      const Rational dq = q.a.time - kq * q.a.position;
      for (const auto& sh : shifts) {
        const Rational x = (dq + sh - dp) / (kp - kq);
        if (x.sign() >= 0 && x <= s.fence.length) c.push_back(x);
      }
    }
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

/// Exact idle time by brute force; nullopt when unbounded.
inline std::optional<Rational> naive_idle(const Schedule& s) {
  const auto ps = naive_pieces(s);
  const auto cand = naive_candidates(s, ps);
  const Rational eps = Rational(1, 1LL << 50);
  const Rational& len = s.fence.length;
  Rational best;
  auto take = [&](const std::optional<Rational>& g) {
    if (!g) return false;
    best = std::max(best, *g);
    return true;
  };
  for (const auto& c : cand) {
    if (!take(naive_gap(s, ps, c))) return std::nullopt;
    for (int dir : {-1, 1}) {
      const Rational e1 = c + Rational(dir) * eps;
      const Rational e2 = c + Rational(dir) * eps * Rational(2);
      if (e2.sign() < 0 || e2 > len) continue;
      const auto g1 = naive_gap(s, ps, e1);
      const auto g2 = naive_gap(s, ps, e2);
      if (!g1 || !g2) return std::nullopt;
      best = std::max(best, Rational(2) * *g1 - *g2);
    }
  }
  return best;
}

}  // namespace patrol::randomized
