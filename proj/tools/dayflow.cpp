// dayflow: almost-invariant means and approximate fixed points from the
// command line. See README.md for the commands and file formats.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dayflow/actions.hpp"
#include "dayflow/errors.hpp"
#include "dayflow/groups.hpp"
#include "dayflow/io.hpp"
#include "dayflow/selftest.hpp"
#include "dayflow/solver.hpp"
#include "dayflow/testfn.hpp"

namespace fs = std::filesystem;
using dayflow::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;
constexpr int kExitSolver = 4;

// Output files are buffered and only written once the command has
// succeeded, so a failing run leaves nothing behind.
class Outputs {
 public:
  void add(fs::path path, std::string content) { files_.emplace_back(std::move(path), std::move(content)); }

  std::vector<std::string> paths() const {
    std::vector<std::string> out;
    for (const auto& [p, c] : files_) out.push_back(p.string());
    return out;
  }

  void commit() const {
    std::vector<fs::path> written;
    try {
      for (const auto& [path, content] : files_) {
        const fs::path tmp = path.string() + ".tmp";
        {
          std::ofstream out(tmp, std::ios::binary);
          if (!out) throw dayflow::InvalidArgument("cannot write '" + path.string() + "'");
          out << content;
        }
        fs::rename(tmp, path);
        written.push_back(path);
      }
    } catch (...) {
      for (const auto& p : written) fs::remove(p);
      for (const auto& [path, content] : files_) fs::remove(path.string() + ".tmp");
      throw;
    }
  }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

struct Common {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

struct KindFlags {
  std::string kind = "tv";
  std::string metric = "word";
  double sup_cap = 1.0;
  double lip_cap = 1.0;
};

void add_kind_flags(CLI::App* cmd, KindFlags& k) {
  cmd->add_option("--kind", k.kind, "Defect kind")->check(CLI::IsMember({"tv", "blip", "weak"}));
  cmd->add_option("--metric", k.metric, "Metric for --kind blip")
      ->check(CLI::IsMember({"word", "discrete"}));
  cmd->add_option("--sup-cap", k.sup_cap, "Sup-norm cap for --kind blip");
  cmd->add_option("--lip-cap", k.lip_cap, "Lipschitz cap for --kind blip");
}

// The weak family used by the CLI: indicators of the single points of
// ball(radius + 1).
dayflow::DefectKind make_kind(const KindFlags& k, const dayflow::GroupSpec& group,
                              std::size_t radius) {
  if (k.kind == "tv") return dayflow::TvDefect{};
  if (k.kind == "blip") {
    dayflow::LipschitzBallSpec ball;
    if (k.metric == "discrete") ball.metric = dayflow::DiscreteMetric{};
    ball.sup_cap = k.sup_cap;
    ball.lipschitz_cap = k.lip_cap;
    return dayflow::BlipDefectKind{ball};
  }
  dayflow::WeakDefectKind weak;
  for (const auto& x : dayflow::ball(group, radius + 1)) {
    const dayflow::Element one[] = {x};
    weak.family.push_back(dayflow::TestFunction::indicator(group, one));
  }
  return weak;
}

json kind_json(const KindFlags& k) {
  json j = {{"kind", k.kind}};
  if (k.kind == "blip") {
    j["metric"] = k.metric;
    j["sup_cap"] = k.sup_cap;
    j["lip_cap"] = k.lip_cap;
  }
  return j;
}

json manifest(const std::string& command, const std::vector<std::string>& inputs, json config,
              const std::vector<std::string>& outputs, double millis) {
  return {{"command", command},
          {"inputs", inputs},
          {"config", std::move(config)},
          {"versions", {{"dayflow", DAYFLOW_VERSION}}},
          {"outputs", outputs},
          {"wall_time_ms", millis}};
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::size_t> parse_radii(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string part;
  auto number = [](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw dayflow::InvalidArgument("bad radius '" + s + "'");
    return static_cast<std::size_t>(v);
  };
  try {
    while (std::getline(in, part, ',')) {
      if (const auto dots = part.find(".."); dots != std::string::npos) {
        const std::size_t lo = number(part.substr(0, dots));
        const std::size_t hi = number(part.substr(dots + 2));
        if (hi < lo) throw dayflow::InvalidArgument("empty radius range '" + part + "'");
        for (std::size_t r = lo; r <= hi; ++r) out.push_back(r);
      } else {
        out.push_back(number(part));
      }
    }
  } catch (const std::logic_error&) {
    throw dayflow::InvalidArgument("cannot parse radii '" + text + "'");
  }
  if (out.empty()) throw dayflow::InvalidArgument("no radii given");
  return out;
}

dayflow::Vector parse_point(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string part;
  try {
    while (std::getline(in, part, ',')) {
      std::size_t pos = 0;
      values.push_back(std::stod(part, &pos));
      if (pos != part.size()) throw std::invalid_argument(part);
    }
  } catch (const std::logic_error&) {
    throw dayflow::InvalidArgument("cannot parse point '" + text + "'");
  }
  dayflow::Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

void emit(const std::string& out_path, const std::string& body, const json& man, Outputs& outputs) {
  if (out_path.empty()) {
    std::cout << body;
    return;
  }
  outputs.add(out_path, body);
  outputs.add(out_path + ".manifest.json", man.dump(2) + "\n");
  outputs.commit();
}

int cmd_defect(const std::string& group_path, std::size_t radius, const KindFlags& k,
               const std::string& out_path, const Common& common) {
  const auto start = std::chrono::steady_clock::now();
  const auto group = dayflow::io::group_from_json(dayflow::io::read_json_file(group_path));
  const auto kind = make_kind(k, group, radius);
  const auto rows = dayflow::defect_profile(group, radius, kind, common.jobs);

  std::ostringstream csv;
  csv << "r,group,kind,folner_defect,lp_defect,lp_status\n";
  json row_ms = json::array();
  for (const auto& row : rows) {
    csv << row.radius << ',' << group.name() << ',' << k.kind << ','
        << dayflow::io::format_real(row.folner_defect) << ','
        << dayflow::io::format_real(row.lp_defect) << ',' << dayflow::to_string(row.status) << '\n';
    row_ms.push_back({{"r", row.radius}, {"millis", row.millis}});
  }
  Outputs outputs;
  json config = {{"radius", radius}, {"jobs", common.jobs}, {"seed", common.seed},
                 {"defect", kind_json(k)}, {"row_millis", row_ms}};
  const std::vector<std::string> listed =
      out_path.empty() ? std::vector<std::string>{} : std::vector<std::string>{out_path, out_path + ".manifest.json"};
  emit(out_path, csv.str(), manifest("defect", {group_path}, config, listed, elapsed_ms(start)), outputs);
  return kExitOk;
}

int cmd_solve(const std::string& group_path, std::size_t radius, const KindFlags& k,
              const std::string& out_path) {
  const auto start = std::chrono::steady_clock::now();
  const auto group = dayflow::io::group_from_json(dayflow::io::read_json_file(group_path));
  dayflow::SolveConfig cfg;
  cfg.radius = radius;
  cfg.kind = make_kind(k, group, radius);
  const auto report = dayflow::solve_invariant_mean(group, cfg);
  const auto body = dayflow::io::report_to_json(report, group, cfg.kind).dump(2) + "\n";
  Outputs outputs;
  const std::vector<std::string> listed =
      out_path.empty() ? std::vector<std::string>{} : std::vector<std::string>{out_path, out_path + ".manifest.json"};
  json config = {{"radius", radius}, {"defect", kind_json(k)}, {"solve_millis", report.millis}};
  emit(out_path, body, manifest("solve", {group_path}, config, listed, elapsed_ms(start)), outputs);
  return kExitOk;
}

int cmd_afp(const std::string& group_path, const std::string& action_path, const std::string& x0_text,
            const std::string& radii_text, const std::string& mean_kind, const std::string& out_path,
            const Common& common) {
  const auto start = std::chrono::steady_clock::now();
  const auto group = dayflow::io::group_from_json(dayflow::io::read_json_file(group_path));
  const auto action =
      dayflow::io::action_from_json(group, dayflow::io::read_json_file(action_path), common.seed);
  const auto x0 = parse_point(x0_text);
  if (static_cast<std::size_t>(x0.size()) != action.dimension())
    throw dayflow::InvalidArgument("--x0 has dimension " + std::to_string(x0.size()) +
                                   " but the action has dimension " +
                                   std::to_string(action.dimension()));
  const auto radii = parse_radii(radii_text);

  std::vector<dayflow::IndexedMean> means;
  for (std::size_t r : radii) {
    if (mean_kind == "folner") {
      means.push_back({static_cast<std::int64_t>(r), dayflow::folner_uniform(group, r)});
    } else {
      dayflow::SolveConfig cfg;
      cfg.radius = r;
      means.push_back({static_cast<std::int64_t>(r), dayflow::solve_invariant_mean(group, cfg).mean});
    }
  }
  const auto trace = dayflow::afp_pipeline(action, x0, means);

  using dayflow::io::format_real;
  std::ostringstream csv;
  csv << "r,tv_defect";
  for (const auto& g : trace.generators) csv << ",residual_" << g;
  csv << ",residual_identity_error,orbit_diameter,orbit_bound,residual_bound_ok,orbit_outside_domain\n";
  bool flagged = false;
  for (const auto& row : trace.rows) {
    if (row.residual_identity_error > 1e-10)
      throw dayflow::InternalError("residual identity violated at r=" + std::to_string(row.index));
    csv << row.index << ',' << format_real(row.tv_defect);
    for (const auto& g : trace.generators) csv << ',' << format_real(row.residual.at(g));
    csv << ',' << format_real(row.residual_identity_error) << ',' << format_real(row.orbit_diameter)
        << ',' << format_real(row.orbit_bound) << ',' << (row.residual_bound_holds ? 1 : 0) << ','
        << (row.orbit_outside_domain ? 1 : 0) << '\n';
    flagged = flagged || row.orbit_outside_domain;
  }
  if (flagged)
    std::cerr << "warning: orbit points leave the declared domain; the orbit may be unbounded\n";

  Outputs outputs;
  const std::vector<std::string> listed =
      out_path.empty() ? std::vector<std::string>{} : std::vector<std::string>{out_path, out_path + ".manifest.json"};
  json config = {{"x0", x0_text}, {"radii", radii}, {"mean", mean_kind}, {"seed", common.seed}};
  emit(out_path, csv.str(), manifest("afp", {group_path, action_path}, config, listed, elapsed_ms(start)),
       outputs);
  return kExitOk;
}

int cmd_witness(const std::string& group_path, std::size_t radius, const std::string& out_path) {
  const auto start = std::chrono::steady_clock::now();
  const auto group = dayflow::io::group_from_json(dayflow::io::read_json_file(group_path));
  dayflow::SolveConfig cfg;
  cfg.radius = radius;
  const auto report = dayflow::solve_invariant_mean(group, cfg);
  const bool positive = report.max_defect > 1e-9;
  const json body = {
      {"group", group.name()},
      {"radius", radius},
      {"lp_defect", report.max_defect},
      {"lp_status", dayflow::to_string(report.status)},
      {"interpretation", positive ? "defect>0 at this radius; not a proof of non-amenability"
                                  : "defect~0 at this radius; an invariant mean exists on this ball"}};
  Outputs outputs;
  const std::vector<std::string> listed =
      out_path.empty() ? std::vector<std::string>{} : std::vector<std::string>{out_path, out_path + ".manifest.json"};
  emit(out_path, body.dump(2) + "\n",
       manifest("witness", {group_path}, {{"radius", radius}}, listed, elapsed_ms(start)), outputs);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dayflow: almost-invariant means and approximate fixed points"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--seed", common.seed, "Seed for all sampling checks")->capture_default_str();
  app.add_option("--jobs", common.jobs, "Worker threads for profiles")->check(CLI::PositiveNumber);

  std::string group_path, action_path, out_path, x0_text, radii_text = "1..10", mean_kind = "folner";
  std::size_t radius = 0;
  KindFlags kind_flags;

  auto* defect = app.add_subcommand("defect", "Defect profile for r = 0..radius (CSV)");
  defect->add_option("group", group_path, "Group specification JSON")->required();
  defect->add_option("--radius", radius, "Largest radius")->required();
  defect->add_option("--out", out_path, "CSV output path (stdout when omitted)");
  add_kind_flags(defect, kind_flags);

  auto* solve = app.add_subcommand("solve", "Solve for an almost-invariant mean (JSON)");
  solve->add_option("group", group_path, "Group specification JSON")->required();
  solve->add_option("--radius", radius, "Support radius")->required();
  solve->add_option("--out", out_path, "JSON output path (stdout when omitted)");
  add_kind_flags(solve, kind_flags);

  auto* afp = app.add_subcommand("afp", "Approximate fixed point trace (CSV)");
  afp->add_option("group", group_path, "Group specification JSON")->required();
  afp->add_option("action", action_path, "Action specification JSON")->required();
  afp->add_option("--x0", x0_text, "Base point, comma separated")->required();
  afp->add_option("--radii", radii_text, "Radii such as 1..60 or 1,2,5")->capture_default_str();
  afp->add_option("--mean", mean_kind, "Means to transport")
      ->check(CLI::IsMember({"folner", "lp"}))
      ->capture_default_str();
  afp->add_option("--out", out_path, "CSV output path (stdout when omitted)");

  auto* witness = app.add_subcommand("witness", "Report the LP defect floor at one radius (JSON)");
  witness->add_option("group", group_path, "Group specification JSON")->required();
  witness->add_option("--radius", radius, "Support radius")->required();
  witness->add_option("--out", out_path, "JSON output path (stdout when omitted)");

  auto* selftest = app.add_subcommand("selftest", "Run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*defect) return cmd_defect(group_path, radius, kind_flags, out_path, common);
    if (*solve) return cmd_solve(group_path, radius, kind_flags, out_path);
    if (*afp) return cmd_afp(group_path, action_path, x0_text, radii_text, mean_kind, out_path, common);
    if (*witness) return cmd_witness(group_path, radius, out_path);
    if (*selftest) return dayflow::run_selftest(common.seed, std::cout) ? kExitOk : kExitFailure;
  } catch (const dayflow::ResourceLimit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const dayflow::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const dayflow::InternalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const dayflow::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitFailure;
}
