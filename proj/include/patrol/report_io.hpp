#pragma once

// JSON renderings of verification results, with canonical rational strings
// and fixed key order.

#include <span>
#include <string>

#include "patrol/gaps.hpp"
#include "patrol/verify.hpp"

namespace patrol {

inline std::string to_json(const IdleReport& r) {
  std::string out = "{\"idle\": \"" + r.idle_str() + "\", \"critical_position_count\": " +
                    std::to_string(r.critical_position_count) + ", \"witnesses\": [";
  for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
    const Witness& w = r.witnesses[i];
    if (i != 0) out += ", ";
    out += "{\"position\": \"" + w.position.str() + "\"";
    if (!r.unbounded()) {
      out += ", \"gap_start\": \"" + w.gap_start.str() + "\", \"gap_end\": \"" + w.gap_end.str() + "\"";
    }
    out += "}";
  }
  out += "]}\n";
  return out;
}

inline std::string to_json(std::span<const GapRegion> regions, const Rational& candidate_idle) {
  std::string out = "{\n  \"candidate_idle\": \"" + candidate_idle.str() + "\",\n  \"region_count\": " +
                    std::to_string(regions.size()) + ",\n  \"total_area\": \"" + total_area(regions).str() +
                    "\",\n  \"regions\": [\n";
  for (std::size_t i = 0; i < regions.size(); ++i) {
    out += "    {\"area\": \"" + regions[i].area().str() + "\", \"vertices\": [";
    const auto& v = regions[i].vertices;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j != 0) out += ", ";
      out += "[\"" + v[j].x.str() + "\", \"" + v[j].t.str() + "\"]";
    }
    out += "]}";
    out += i + 1 < regions.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

}  // namespace patrol
