// patrol: generate, verify, analyze, compare and plot fence-patrolling schedules.
//
// Exit codes: 0 ok, 1 I/O failure, 2 invalid input, 3 expectation failed.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "patrol/patrol.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kIoError = 1;
constexpr int kInvalid = 2;
constexpr int kExpectFailed = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + path);
}

std::vector<patrol::Rational> parse_list(const std::string& text) {
  std::vector<patrol::Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(patrol::parse_rational(item));
  return out;
}

std::int64_t parse_count(const std::string& text, patrol::ErrorCode code) {
  const patrol::Rational r = patrol::parse_rational(text);
  if (!r.is_integer() || r.is_big()) throw patrol::Error(code, "expected an integer, got " + text);
  return r.numerator().get_si();
}

/// Loads a schedule; kinematic problems are reported and rejected.
patrol::Schedule load_valid(const std::string& path) {
  patrol::Schedule s = patrol::deserialize(read_file(path));
  const patrol::ValidationReport report = patrol::validate_schedule(s);
  if (!report.ok()) {
    for (const auto& f : report.findings) std::cout << f.str() << "\n";
    std::cout << report.summary() << "\n";
    throw patrol::Error(patrol::ErrorCode::InvalidSchedule, report.findings.front().str());
  }
  return s;
}

struct GenerateArgs {
  std::string algo;
  std::string out;
  std::string length = "1";
  std::string speeds;
  std::string a, b, k;
  std::string tau, t;
  std::string x = "1";
};

int cmd_generate(const GenerateArgs& g) {
  using namespace patrol;
  auto need = [](const std::string& v, const char* flag) {
    if (v.empty()) throw Error(ErrorCode::BadParams, std::string("missing --") + flag);
    return v;
  };
  GeneratorOutput out;
  if (g.algo == "a1") {
    out = gen_partition_a1(parse_rational(g.length), parse_list(need(g.speeds, "speeds")));
  } else if (g.algo == "a2") {
    out = gen_runners_a2(parse_list(need(g.speeds, "speeds")));
  } else if (g.algo == "train") {
    out = gen_train_a3(parse_rational(need(g.a, "a")), parse_rational(need(g.b, "b")),
                       parse_count(need(g.k, "k"), ErrorCode::BadK));
  } else if (g.algo == "harmonic6") {
    out = gen_harmonic6();
  } else if (g.algo == "harmonic32") {
    out = gen_harmonic32();
  } else if (g.algo == "greedy") {
    out = gen_greedy_finite(parse_rational(need(g.tau, "tau")), parse_rational(need(g.t, "t")));
  } else if (g.algo == "blocks") {
    out = gen_blocks(parse_count(g.x, ErrorCode::BadX));
  } else if (g.algo == "zigzag") {
    out = gen_zigzag(parse_count(g.x, ErrorCode::BadX));
  } else {
    throw Error(ErrorCode::BadParams, "unknown algorithm '" + g.algo + "'");
  }
  write_file(g.out, serialize(out.schedule));
  for (const auto& [key, value] : out.metadata) std::cout << key << "=" << value << "\n";
  return kOk;
}

int cmd_verify(const std::string& in, const std::string& expect, const std::string& json_out) {
  using namespace patrol;
  std::optional<Rational> expected;
  if (!expect.empty()) expected = parse_rational(expect);
  const Schedule s = load_valid(in);
  const IdleReport r = exact_idle(s);
  std::cout << "idle=" << r.idle_str() << "\n";
  const std::size_t shown = std::min<std::size_t>(r.witnesses.size(), 12);
  for (std::size_t i = 0; i < shown; ++i) {
    const Witness& w = r.witnesses[i];
    std::cout << "witness position=" << w.position;
    if (!r.unbounded()) std::cout << " gap=[" << w.gap_start << "," << w.gap_end << "]";
    std::cout << "\n";
  }
  std::cout << "witness_count=" << r.witnesses.size() << "\n";
  std::cout << "critical_positions=" << r.critical_position_count << "\n";
  std::cout << validate_schedule(s).summary() << "\n";
  std::cout << "idle<1: " << (r.idle && *r.idle < Rational(1) ? "true" : "false") << "\n";
  if (!json_out.empty()) write_file(json_out, to_json(r));
  if (expected && (!r.idle || *r.idle != *expected)) {
    std::cerr << "expected idle " << *expected << ", got " << r.idle_str() << "\n";
    return kExpectFailed;
  }
  return kOk;
}

int cmd_gaps(const std::string& in, const std::string& idle, const std::string& phase, const std::string& out) {
  using namespace patrol;
  const Rational candidate = parse_rational(idle);
  const Rational t0 = parse_rational(phase);
  const Schedule s = load_valid(in);
  const auto regions = analyze_gaps(s, candidate, t0);
  std::cout << "regions=" << regions.size() << "\n";
  std::cout << "total_area=" << total_area(regions) << "\n";
  const std::string json = to_json(regions, candidate);
  if (out.empty()) {
    std::cout << json;
  } else {
    write_file(out, json);
  }
  return kOk;
}

int cmd_compare(const std::string& in) {
  using namespace patrol;
  const Schedule s = load_valid(in);
  const ComparisonReport r = compare(s);
  std::cout << "idle=" << (r.idle ? r.idle->str() : "unbounded") << "\n";
  std::cout << "lower_bound=" << r.lower_bound << "\n";
  if (r.rho_vs_a1) std::cout << "rho_vs_A1=" << *r.rho_vs_a1 << "\n";
  if (r.rho_vs_a2) std::cout << "rho_vs_A2=" << *r.rho_vs_a2 << "\n";
  return kOk;
}

int cmd_plot(const std::string& in, int periods, const std::string& idle, double width, const std::string& out) {
  using namespace patrol;
  if (periods < 1) throw Error(ErrorCode::BadParams, "--periods must be at least 1");
  SvgOptions opt;
  opt.periods = periods;
  if (!idle.empty()) opt.idle = parse_rational(idle);
  if (width > 0) opt.width_px = width;
  const Schedule s = load_valid(in);
  write_file(out, render_svg(s, opt));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fence-patrolling schedules: generate, verify, analyze, compare, plot"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Build a schedule and write it as JSON");
  generate->add_option("--algo", gen.algo, "a1|a2|train|harmonic6|harmonic32|greedy|blocks|zigzag")->required();
  generate->add_option("-o,--out", gen.out, "Output schedule file")->required();
  generate->add_option("--length", gen.length, "Fence length (a1)");
  generate->add_option("--speeds", gen.speeds, "Comma-separated speeds (a1, a2)");
  generate->add_option("--a", gen.a, "Bouncer speed (train)");
  generate->add_option("--b", gen.b, "Train speed (train)");
  generate->add_option("--k", gen.k, "Agent count (train)");
  generate->add_option("--tau", gen.tau, "Target idle (greedy)");
  generate->add_option("--t", gen.t, "Horizon (greedy)");
  generate->add_option("--x", gen.x, "Block count (blocks, zigzag)");

  std::string in;
  std::string expect;
  std::string json_out;
  auto* verify = app.add_subcommand("verify", "Compute the exact idle time");
  verify->add_option("file", in, "Schedule file")->required();
  verify->add_option("--expect", expect, "Exit 3 unless the idle time equals this");
  verify->add_option("--json", json_out, "Also write the idle report as JSON");

  std::string idle;
  std::string phase = "0";
  std::string out;
  auto* gaps = app.add_subcommand("gaps", "Uncovered regions at a candidate idle time");
  gaps->add_option("file", in, "Schedule file")->required();
  gaps->add_option("--idle", idle, "Candidate idle time")->required();
  gaps->add_option("--t0", phase, "Start of the analyzed period");
  gaps->add_option("--out", out, "Write regions JSON here instead of standard output");

  auto* cmp = app.add_subcommand("compare", "Idle time, volume bound and ratios");
  cmp->add_option("file", in, "Schedule file")->required();

  int periods = 1;
  double width = 0;
  std::string plot_idle;
  auto* plot = app.add_subcommand("plot", "Render the position-time diagram as SVG");
  plot->add_option("file", in, "Schedule file")->required();
  plot->add_option("--periods", periods, "Periods to draw");
  plot->add_option("--idle", plot_idle, "Draw coverage and gaps at this candidate idle time");
  plot->add_option("--width", width, "Image width in pixels");
  plot->add_option("--out", out, "Output SVG file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (verify->parsed()) return cmd_verify(in, expect, json_out);
    if (gaps->parsed()) return cmd_gaps(in, idle, phase, out);
    if (cmp->parsed()) return cmd_compare(in);
    if (plot->parsed()) return cmd_plot(in, periods, plot_idle, width, out);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const patrol::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
