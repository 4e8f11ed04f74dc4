// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "patrol/patrol.hpp"
#include "support/random_schedule.hpp"

using namespace patrol;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) note << "failed: ";
      note << what << "; ";
      pass = false;
    }
  }
};

// Schedules produced by criteria 1-7 and their exact idle times.
struct Generated {
  std::string label;
  Fence fence;
  std::vector<Rational> speeds;
  std::optional<Rational> idle;
};
std::vector<Generated> generated;

std::optional<Rational> idle_and_record(const std::string& label, const Schedule& s) {
  const auto idle = exact_idle(s).idle;
  generated.push_back({label, s.fence, speeds_of(s), idle});
  return idle;
}

void criterion1(Outcome& o) {
  randomized::RandomSource r(101);
  for (int i = 0; i < 50; ++i) {
    const auto v = r.speeds(static_cast<std::size_t>(r.integer(1, 8)));
    const auto idle = idle_and_record("a1", gen_partition_a1(1, v).schedule);
    const Rational expect = Rational(2) / sum_exact(v);
    o.check(idle == expect, "case " + std::to_string(i) + " idle " + (idle ? idle->str() : "unbounded") +
                                " != " + expect.str());
  }
  o.note << "50 speed vectors, idle = 2/sum(v)";
}

void criterion2(Outcome& o) {
  randomized::RandomSource r(202);
  for (int i = 0; i < 50; ++i) {
    auto v = r.speeds(static_cast<std::size_t>(r.integer(1, 8)));
    std::sort(v.begin(), v.end(), std::greater<>());
    Rational best;
    for (std::size_t j = 0; j < v.size(); ++j) best = std::max(best, Rational(static_cast<std::int64_t>(j + 1)) * v[j]);
    const auto idle = idle_and_record("a2", gen_runners_a2(v).schedule);
    const Rational expect = Rational(1) / best;
    o.check(idle == expect, "case " + std::to_string(i) + " idle " + (idle ? idle->str() : "unbounded") +
                                " != " + expect.str());
  }
  o.note << "50 sorted speed vectors, idle = 1/max(i*v_i)";
}

void criterion3(Outcome& o) {
  randomized::RandomSource r(303);
  for (int i = 0; i < 25; ++i) {
    const randomized::TrainParams p = randomized::random_train(r);
    const auto idle = idle_and_record("train", gen_train_a3(p.a, p.b, p.k).schedule);
    const Rational expect =
        Rational(2) * p.a / (p.a * p.a - p.b * p.b + Rational(2 * (p.k - 2)) * p.a * p.b);
    std::ostringstream what;
    what << "a=" << p.a << " b=" << p.b << " k=" << p.k << " idle " << (idle ? idle->str() : "unbounded")
         << " != " << expect;
    o.check(idle == expect, what.str());
  }
  const Rational a(1), b(1, 1000);
  bool refused = false;
  try {
    gen_train_a3(a, b, 1000);
  } catch (const Error& e) {
    refused = e.code() == ErrorCode::BadParams;
  }
  const Rational big = predicted_idle_formula(Algo::A3, {1, {}, a, b, 1000});
  o.check(big > Rational(2, 3) && big < Rational(2, 3) + Rational(1, 100), "k=1000 idle " + big.str());
  o.note << "25 random trains exact; k=1000 idle " << big << " in (2/3, 2/3+1/100) from the closed form"
         << (refused ? " (schedule too large to generate, generator refused)" : "");
}

void criterion4(Outcome& o) {
  const IdleReport r = exact_idle(gen_harmonic6().schedule);
  generated.push_back({"harmonic6", gen_harmonic6().schedule.fence, speeds_of(gen_harmonic6().schedule), r.idle});
  o.check(r.idle == Rational(1), "idle " + r.idle_str());
  auto has = [&](const Rational& x) {
    return std::any_of(r.witnesses.begin(), r.witnesses.end(), [&](const Witness& w) { return w.position == x; });
  };
  o.check(has(0), "no witness at 0");
  o.check(has(Rational(1, 2)), "no witness at 1/2");
  o.note << "idle " << r.idle_str() << ", " << r.witnesses.size() << " witnesses incl. 0 and 1/2";
}

void criterion5(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const Schedule s = gen_harmonic32().schedule;
  const IdleReport r = exact_idle(s);
  generated.push_back({"harmonic32", s.fence, speeds_of(s), r.idle});
  o.check(r.idle.has_value() && *r.idle < Rational(1), "idle " + r.idle_str() + " not < 1");
  o.check(r.idle == Rational(61, 62), "idle " + r.idle_str() + " != golden 61/62");
  o.check(!r.witnesses.empty(), "no witness");
  for (std::size_t grid : {std::size_t{1} << 10, std::size_t{1} << 12}) {
    const auto sampled = sampled_idle(s, grid);
    o.check(sampled && r.idle && *sampled <= *r.idle, "grid " + std::to_string(grid) + " exceeds the sweep");
  }
  for (const auto& w : r.witnesses) {
    const auto g = gap_at(s, w.position);
    o.check(g && r.idle && g->length == *r.idle, "gap at witness " + w.position.str() + " differs");
  }
  const auto on_witness_grid = sampled_idle(s, 992);
  o.check(on_witness_grid == r.idle, "grid 992 sampled " + (on_witness_grid ? on_witness_grid->str() : "none"));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(secs < 60, "took " + std::to_string(secs) + " s");
  o.note << "idle " << r.idle_str() << " < 1 at witness "
         << (r.witnesses.empty() ? std::string("-") : r.witnesses.front().position.str()) << ", grids 2^10/2^12 <= idle, "
         << static_cast<int>(secs * 1000) << " ms";
}

void criterion6(Outcome& o) {
  std::vector<GreedyWindow> windows;
  const GeneratorOutput g = gen_greedy_finite(Rational(2, 3), 2, &windows);
  o.check(windows.size() >= 2, "fewer than two windows");
  if (windows.size() >= 2) {
    o.check(windows[0].first == 2 && windows[0].last == 11, "window 1 is not a_1..a_11");
    o.check(windows[1].first == 12 && windows[1].last == 85, "window 2 is not a_12..a_85");
  }
  const auto idle = idle_and_record("greedy", g.schedule);
  o.check(idle && *idle <= Rational(2, 3), "idle " + (idle ? idle->str() : std::string("unbounded")));
  const std::string* bound = g.find("harmonic_bound_holds");
  o.check(bound && *bound == "true", "harmonic bound on k fails");
  o.note << "windows a_1..a_11, a_12..a_85; k=" << (g.find("k") ? *g.find("k") : "?") << ", idle "
         << (idle ? idle->str() : "unbounded") << " <= 2/3, harmonic bound on k holds exactly";
}

void criterion7(Outcome& o) {
  for (std::int64_t x : {2, 3, 4, 5, 39}) {
    const Schedule s = gen_blocks(x).schedule;
    const auto idle = idle_and_record("blocks", s);
    const ComparisonReport c = compare(s);
    const std::string tag = "x=" + std::to_string(x) + " ";
    o.check(s.agents.size() == static_cast<std::size_t>(4 * x + 1), tag + "k");
    o.check(sum_exact(speeds_of(s)) == Rational(16 * x + 1), tag + "sum v");
    o.check(s.fence.length == Rational(25 * x, 3), tag + "length");
    o.check(idle == Rational(1), tag + "idle");
    o.check(c.rho_vs_a1 == Rational(48 * x + 3, 50 * x), tag + "rho");
    if (x == 2) o.check(c.rho_vs_a1 == Rational(99, 100), "x=2 rho != 99/100");
    if (x == 39) o.check(c.rho_vs_a1 == Rational(25, 26), "x=39 rho != 25/26");
  }
  o.note << "x=2..5 and 39: k, sum v, length, idle 1, rho (99/100 at x=2, 25/26 at x=39)";
}

void criterion8(Outcome& o) {
  const Schedule z = gen_zigzag().schedule;
  const auto regions = analyze_gaps(z, 1);
  const auto tri = boundary_triangles(regions);
  o.check(tri.size() == 2, std::to_string(tri.size()) + " triangles per period");
  for (const auto& t : tri) {
    o.check(t.base() == Rational(1, 3), "base " + t.base().str());
    o.check(t.height() == Rational(5, 6), "height " + t.height().str());
  }
  if (tri.size() == 2) {
    const Rational& period = z.time_model.end();
    o.check(tri[1].base_lo - tri[0].base_hi == Rational(4, 3), "spacing " + (tri[1].base_lo - tri[0].base_hi).str());
    o.check(tri[0].base_lo + period - tri[1].base_hi == Rational(4, 3), "wrapped spacing");
    o.check(regions[0].area() == regions[1].area(), "areas differ");
  }
  o.check(z.time_model.end() == Rational(10, 3), "period " + z.time_model.end().str());
  bool periodic = true;
  for (const auto& a : z.agents) {
    periodic = periodic && eval_trajectory(a.trajectory, z.fence, z.time_model, 0) ==
                               eval_trajectory(a.trajectory, z.fence, z.time_model, Rational(10, 3));
  }
  o.check(periodic, "positions at 0 and 10/3 differ");
  o.note << "2 congruent triangles, base 1/3, height 5/6, spacing 4/3, period 10/3";
}

void criterion9(Outcome& o) {
  const Rational b(1, 3), h(5, 6), y(4, 3);
  const Rational s1 = covering_speed_s1(b, h);
  const Rational s2 = covering_speed_s2(b, h, y);
  o.check(s1 == Rational(1), "s1 = " + s1.str());
  o.check(s2 == Rational(1), "s2 = " + s2.str());
  o.note << "s1 = " << s1 << ", s2 = " << s2;
}

void criterion10(Outcome& o) {
  for (const auto& g : generated) {
    const Rational bound = volume_lower_bound(g.fence, g.speeds);
    o.check(g.idle && *g.idle >= bound, g.label + " idle below l/sum(v)");
  }
  o.note << generated.size() << " generated schedules satisfy idle >= l/sum(v)";
}

void criterion11(Outcome& o) {
  randomized::RandomSource r(1111);
  for (int i = 0; i < 100; ++i) {
    const Schedule s = randomized::random_schedule(r, 5);
    const IdleReport rep = exact_idle(s);
    const auto sampled = sampled_idle(s, 257);
    const std::string tag = "schedule " + std::to_string(i) + " ";
    if (rep.unbounded()) {
      o.check(rep.witnesses.empty() || !gap_at(s, rep.witnesses.front().position), tag + "unbounded witness has a gap");
      continue;
    }
    o.check(sampled && *sampled <= *rep.idle, tag + "sampled exceeds exact");
    o.check(!rep.witnesses.empty(), tag + "no witness");
    if (rep.witnesses.empty()) continue;
    const auto g = gap_at(s, rep.witnesses.front().position);
    o.check(g && g->length == *rep.idle, tag + "gap at witness != exact");
  }
  o.note << "100 random schedules: sampled(257) <= exact, gap at witness == exact";
}

void criterion12(Outcome& o) {
  randomized::RandomSource r(1212);
  for (int i = 0; i < 20; ++i) {
    const Schedule s = randomized::random_schedule(r, 5);
    const auto base = exact_idle(s).idle;
    for (const Rational& c : {Rational(2), Rational(1, 3)}) {
      const auto timed = exact_idle(randomized::scale_time(s, c)).idle;
      const auto spaced = exact_idle(randomized::scale_position(s, c)).idle;
      const std::string tag = "schedule " + std::to_string(i) + " c=" + c.str() + " ";
      o.check(base.has_value() == timed.has_value() && (!base || *timed == *base * c), tag + "time scaling");
      o.check(base.has_value() == spaced.has_value() && (!base || *spaced == *base), tag + "position scaling");
    }
  }
  o.note << "20 random schedules, c in {2, 1/3}: time scales idle by c, position leaves it unchanged";
}

}  // namespace

int main() {
  const std::vector<std::function<void(Outcome&)>> criteria{criterion1, criterion2, criterion3,  criterion4,
                                                            criterion5, criterion6, criterion7,  criterion8,
                                                            criterion9, criterion10, criterion11, criterion12};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i](o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.note.str() << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
