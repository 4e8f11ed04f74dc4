#pragma once

// Schedule file format (UTF-8 JSON, all numbers as canonical rational strings):
//
//   {"fence":{"kind":"segment"|"circle","length":"p/q"},
//    "time_model":{"periodic":"p/q"}|{"horizon":"p/q"},
//    "direction":"none"|"unidirectional",
//    "agents":[{"id":N,"max_speed":"p/q","breakpoints":[["t","x"],...]},...]}
//
// serialize() writes one agent per line with a fixed field order so output is
// byte-stable and usable for golden files.

#include <json.hpp>

#include <cstddef>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "patrol/error.hpp"
#include "patrol/model.hpp"
#include "patrol/rational.hpp"

namespace patrol {

inline std::string serialize(const Schedule& s) {
  std::string out;
  auto q = [&out](const Rational& r) {
    out += '"';
    out += r.str();
    out += '"';
  };
  out += "{\n  \"fence\": {\"kind\": \"";
  out += s.fence.is_circle() ? "circle" : "segment";
  out += "\", \"length\": ";
  q(s.fence.length);
  out += "},\n  \"time_model\": {\"";
  out += s.time_model.is_periodic() ? "periodic" : "horizon";
  out += "\": ";
  q(s.time_model.end());
  out += "},\n  \"direction\": \"";
  out += s.direction == Direction::Unidirectional ? "unidirectional" : "none";
  out += "\",\n  \"agents\": [\n";
  for (std::size_t a = 0; a < s.agents.size(); ++a) {
    const Agent& agent = s.agents[a];
    out += "    {\"id\": " + std::to_string(agent.id) + ", \"max_speed\": ";
    q(agent.max_speed);
    out += ", \"breakpoints\": [";
    const auto& bp = agent.trajectory.breakpoints;
    for (std::size_t i = 0; i < bp.size(); ++i) {
      if (i != 0) out += ", ";
      out += '[';
      q(bp[i].time);
      out += ", ";
      q(bp[i].position);
      out += ']';
    }
    out += "]}";
    out += a + 1 < s.agents.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, where + ": " + what);
}

inline Rational schema_rational(const nlohmann::json& j, const std::string& where) {
  if (!j.is_string()) schema_error(where, "expected a rational string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    schema_error(where, e.what());
  }
}

inline Rational schema_positive(const nlohmann::json& j, const std::string& where) {
  Rational r = schema_rational(j, where);
  if (r.sign() <= 0) schema_error(where, "must be positive, got " + r.str());
  return r;
}

inline void schema_keys(const nlohmann::json& j, const std::string& where, std::set<std::string> required) {
  if (!j.is_object()) schema_error(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!required.count(key)) schema_error(where, "unknown field '" + key + "'");
  }
  for (const auto& key : required) {
    if (!j.contains(key)) schema_error(where, "missing field '" + key + "'");
  }
}

inline std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n' ? 1 : 0;
  return line;
}

}  // namespace detail

/// Parses and structurally checks a schedule file. Kinematic checks (speed,
/// continuity, position closure) are left to validate_schedule().
inline Schedule deserialize(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation,
                "line " + std::to_string(detail::line_of(text, e.byte)) + ": malformed JSON: " + e.what());
  }
  using detail::schema_error;
  detail::schema_keys(root, "$", {"fence", "time_model", "direction", "agents"});

  Schedule s;
  const auto& fence = root["fence"];
  detail::schema_keys(fence, "fence", {"kind", "length"});
  const auto& kind = fence["kind"];
  if (kind == "segment") {
    s.fence.kind = FenceKind::Segment;
  } else if (kind == "circle") {
    s.fence.kind = FenceKind::Circle;
  } else {
    schema_error("fence.kind", "expected \"segment\" or \"circle\"");
  }
  s.fence.length = detail::schema_positive(fence["length"], "fence.length");

  const auto& tm = root["time_model"];
  if (!tm.is_object() || tm.size() != 1) schema_error("time_model", "expected exactly one of periodic/horizon");
  if (tm.contains("periodic")) {
    s.time_model = TimeModel::periodic(detail::schema_positive(tm["periodic"], "time_model.periodic"));
  } else if (tm.contains("horizon")) {
    s.time_model = TimeModel::horizon(detail::schema_positive(tm["horizon"], "time_model.horizon"));
  } else {
    schema_error("time_model", "expected exactly one of periodic/horizon");
  }

  const auto& dir = root["direction"];
  if (dir == "none") {
    s.direction = Direction::None;
  } else if (dir == "unidirectional") {
    s.direction = Direction::Unidirectional;
    if (!s.fence.is_circle()) schema_error("direction", "unidirectional requires a circle fence");
  } else {
    schema_error("direction", "expected \"none\" or \"unidirectional\"");
  }

  const auto& agents = root["agents"];
  if (!agents.is_array() || agents.empty()) schema_error("agents", "expected a nonempty array");
  std::set<int> ids;
  for (std::size_t a = 0; a < agents.size(); ++a) {
    const std::string where = "agents[" + std::to_string(a) + "]";
    const auto& ja = agents[a];
    detail::schema_keys(ja, where, {"id", "max_speed", "breakpoints"});
    Agent agent;
    if (!ja["id"].is_number_integer()) schema_error(where + ".id", "expected an integer");
    agent.id = ja["id"].get<int>();
    if (!ids.insert(agent.id).second) schema_error(where + ".id", "duplicate id " + std::to_string(agent.id));
    agent.max_speed = detail::schema_positive(ja["max_speed"], where + ".max_speed");
    const auto& jb = ja["breakpoints"];
    if (!jb.is_array() || jb.size() < 2) schema_error(where + ".breakpoints", "expected at least two breakpoints");
    for (std::size_t i = 0; i < jb.size(); ++i) {
      const std::string bw = where + ".breakpoints[" + std::to_string(i) + "]";
      if (!jb[i].is_array() || jb[i].size() != 2) schema_error(bw, "expected [time, position]");
      agent.trajectory.breakpoints.push_back(
          {detail::schema_rational(jb[i][0], bw + "[0]"), detail::schema_rational(jb[i][1], bw + "[1]")});
    }
    const auto& bp = agent.trajectory.breakpoints;
    if (bp.front().time.sign() != 0) schema_error(where + ".breakpoints[0]", "first time must be 0");
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      const std::string bw = where + ".breakpoints[" + std::to_string(i + 1) + "]";
      if (bp[i + 1].time < bp[i].time) {
        schema_error(bw, "non-monotone times (" + bp[i].time.str() + " then " + bp[i + 1].time.str() + ")");
      }
      if (i + 2 < bp.size() && bp[i].time == bp[i + 1].time && bp[i + 1].time == bp[i + 2].time) {
        schema_error(bw, "more than two breakpoints share time " + bp[i].time.str());
      }
    }
    if (bp.back().time != s.time_model.end()) {
      const char* what = s.time_model.is_periodic() ? "period closure" : "horizon closure";
      schema_error(where + ".breakpoints", std::string(what) + ": last time " + bp.back().time.str() +
                                               " != " + s.time_model.end().str());
    }
    s.agents.push_back(std::move(agent));
  }
  return s;
}

}  // namespace patrol
