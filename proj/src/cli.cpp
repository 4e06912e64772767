#include "rwdrift/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "rwdrift/convolution.hpp"
#include "rwdrift/error.hpp"
#include "rwdrift/free_product.hpp"
#include "rwdrift/hitting.hpp"
#include "rwdrift/optimizer.hpp"
#include "rwdrift/simulator.hpp"
#include "rwdrift/traffic.hpp"

namespace rwdrift::cli {

using nlohmann::json;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfigError, "cannot parse number '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw Error(ErrorCode::kConfigError, "cannot parse number '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::kConfigError, "empty number list");
  return out;
}

json RunConfig::to_json() const {
  json j{{"command", command}, {"d", d},         {"p", p},
         {"q_sym", q_sym},     {"n", n},         {"samples", samples},
         {"seed", seed},       {"tol", tol},     {"format", format},
         {"threads", threads}, {"functional", functional},
         {"objective", objective}, {"preset", preset}, {"from", from},
         {"to", to},           {"grid", grid},   {"chords", chords},
         {"starts", starts},   {"increment", increment}};
  j["spec"] = spec.is_null() ? json(nullptr) : spec;
  if (!out.empty()) j["out"] = out;
  return j;
}

void RunConfig::merge_json(const json& raw) {
  const json& j = raw.contains("config") && raw["config"].is_object() ? raw["config"] : raw;
  if (!j.is_object()) throw Error(ErrorCode::kConfigError, "config must be a JSON object");
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key) && !j[key].is_null()) j.at(key).get_to(field);
    };
    get("command", command);
    get("d", d);
    get("p", p);
    get("q_sym", q_sym);
    get("n", n);
    get("samples", samples);
    get("seed", seed);
    get("tol", tol);
    get("format", format);
    get("out", out);
    get("threads", threads);
    get("functional", functional);
    get("objective", objective);
    get("preset", preset);
    get("from", from);
    get("to", to);
    get("grid", grid);
    get("chords", chords);
    get("starts", starts);
    get("increment", increment);
    if (j.contains("spec") && !j["spec"].is_null()) {
      if (j["spec"].is_string()) {
        std::ifstream in(j["spec"].get<std::string>());
        if (!in) throw Error(ErrorCode::kConfigError, "cannot open spec file");
        spec = json::parse(in);
      } else {
        spec = j["spec"];
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("bad config: ") + e.what());
  }
}

namespace {

constexpr int kUnset = -1;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::kNonPositiveMass:
    case ErrorCode::kMassNotOne:
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kDomainViolation:
    case ErrorCode::kIncompatibleFunctional:
    case ErrorCode::kConfigError:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

void resolve_defaults(RunConfig& c) {
  const std::string& cmd = c.command;
  if (c.n == 0) {
    if (cmd == "simulate") c.n = c.functional == "entropy" ? 10 : 20'000;
    if (cmd == "convolve") c.n = 10;
    if (cmd == "free-product") c.n = 2'000;
  }
  if (c.samples == 0) {
    if (cmd == "simulate") c.samples = 10'000;
  }
  if (c.tol == 0.0) {
    if (cmd == "free-exact") c.tol = 1e-14;
    if (cmd == "free-product") c.tol = 1e-10;
    if (cmd == "optimize") c.tol = 1e-6;
    if (cmd == "concavity") c.tol = 1e-9;
  }
  if (c.grid == kUnset) c.grid = cmd == "concavity" ? 0 : 81;
  if (cmd == "verify" && c.preset.empty()) c.preset = "all";
  if (c.format != "json" && c.format != "csv") {
    throw Error(ErrorCode::kConfigError, "format must be json or csv");
  }
  if (c.threads == 0) throw Error(ErrorCode::kConfigError, "threads must be >= 1");
}

StepDistribution free_law(const RunConfig& c) {
  if (!c.q_sym.empty()) {
    const auto half = symmetric_p_from_q(c.q_sym);
    if (c.d != 0 && static_cast<std::size_t>(c.d) != half.size()) {
      throw Error(ErrorCode::kConfigError, "--q-sym needs d entries");
    }
    return StepDistribution::symmetric(half);
  }
  if (!c.p.empty()) {
    if (c.d != 0 && c.p.size() != 2 * static_cast<std::size_t>(c.d)) {
      throw Error(ErrorCode::kConfigError, "--p needs 2d entries");
    }
    return StepDistribution::validate(c.p);
  }
  if (c.d >= 1) return StepDistribution::uniform(c.d);
  throw Error(ErrorCode::kConfigError, "give --d, --p or --q-sym");
}

Walk make_walk(const RunConfig& c) {
  if (!c.spec.is_null()) return Walk::free_product(FreeProductSpec::from_json(c.spec));
  return Walk::free_group(free_law(c));
}

json traffic_json(const TrafficSolution& s) {
  return {{"z", s.z},
          {"q", s.q},
          {"Y", s.y},
          {"A", s.a},
          {"B", s.b},
          {"residual", s.residual},
          {"iterations", s.iterations},
          {"newton_steps", s.newton_steps}};
}

json report_json(const DriftEntropyReport& r) {
  return {{"drift", r.drift},
          {"entropy", r.entropy},
          {"volume_entropy", r.volume_entropy},
          {"fundamental_slack", r.fundamental_slack}};
}

struct Output {
  json result;
  std::string csv;  // filled when the command supports csv and it was asked for
  bool breach = false;
};

std::string csv_line(std::initializer_list<std::pair<const char*, double>> cols) {
  std::ostringstream h, v;
  v << std::setprecision(17);
  bool first = true;
  for (const auto& [name, value] : cols) {
    if (!first) {
      h << ',';
      v << ',';
    }
    first = false;
    h << name;
    v << value;
  }
  return h.str() + "\n" + v.str() + "\n";
}

Output cmd_free_exact(const RunConfig& c) {
  const StepDistribution p = free_law(c);
  TrafficOptions topts;
  topts.tol = c.tol;
  Output o;
  const DriftEntropyReport r = free_report(p, topts);
  o.result = report_json(r);
  o.result["d"] = p.d();
  o.result["p"] = p.probs();
  if (p.d() >= 2 || std::abs(p[0] - p[1]) > 1e-9) {
    o.result["traffic"] = traffic_json(solve_traffic(p, topts));
  } else {
    o.result["traffic"] = nullptr;
  }
  if (c.format == "csv") {
    o.csv = csv_line({{"d", p.d()},
                      {"drift", r.drift},
                      {"entropy", r.entropy},
                      {"volume_entropy", r.volume_entropy},
                      {"fundamental_slack", r.fundamental_slack}});
  }
  return o;
}

Output cmd_simulate(const RunConfig& c) {
  const Walk walk = make_walk(c);
  SimulationOptions s;
  s.n = c.n;
  s.samples = c.samples;
  s.seed = c.seed;
  s.threads = c.threads;
  s.increment = c.increment;
  Output o;
  EstimateWithCI e;
  if (c.functional == "entropy") {
    e = estimate_entropy_pointwise(walk, static_cast<int>(c.n), s,
                                   ConvolutionOptions::default_options());
  } else {
    e = estimate_drift(walk, parse_functional(c.functional), s);
  }
  o.result = e.to_json();
  o.result["functional"] = c.functional;
  if (c.format == "csv") {
    o.csv = csv_line({{"value", e.value},
                      {"stderr", e.stderr_},
                      {"n", static_cast<double>(e.n_steps)},
                      {"samples", static_cast<double>(e.samples)},
                      {"ci_low", e.ci_low},
                      {"ci_high", e.ci_high}});
  }
  return o;
}

Output cmd_convolve(const RunConfig& c) {
  const Walk walk = make_walk(c);
  const auto copts = ConvolutionOptions::default_options();
  const auto rows = horizon_table(walk, static_cast<int>(c.n), copts);
  Output o;
  json arr = json::array();
  std::vector<double> ret;
  for (const auto& r : rows) {
    arr.push_back({{"n", r.n},
                   {"entropy", r.entropy},
                   {"mean_length", r.mean_length},
                   {"return_probability", r.return_probability},
                   {"entropy_increment", r.entropy_increment}});
    ret.push_back(r.return_probability);
  }
  o.result["rows"] = arr;
  const ReturnSeries s = series_from_returns(ret);
  o.result["spectral_radius_estimates"] = s.estimates;
  o.result["spectral_radius_extrapolated"] = extrapolated_spectral_radius(s);
  if (c.format == "csv") {
    std::ostringstream os;
    write_horizon_csv(os, rows);
    o.csv = os.str();
  }
  return o;
}

Output cmd_free_product(const RunConfig& c) {
  if (c.spec.is_null()) throw Error(ErrorCode::kConfigError, "free-product needs --spec");
  const FreeProductSpec spec = FreeProductSpec::from_json(c.spec);
  Output o;
  const BlockDriftResult r = block_drift(spec, c.tol);
  o.result = r.to_json();
  if (c.samples > 0) {
    SimulationOptions s;
    s.n = c.n;
    s.samples = c.samples;
    s.seed = c.seed;
    s.threads = c.threads;
    s.increment = c.increment;
    o.result["monte_carlo_block_drift"] =
        estimate_drift(Walk::free_product(spec), LengthFunctional::kBlock, s).to_json();
  }
  return o;
}

Output cmd_optimize(const RunConfig& c) {
  OptimizerOptions opts;
  opts.tol = c.tol;
  opts.starts = c.starts;
  opts.seed = c.seed;
  const Objective obj = parse_objective(c.objective);
  Output o;
  o.result = maximize_symmetric(obj, c.d, opts).to_json();
  o.result["objective"] = c.objective;
  return o;
}

Output cmd_sweep(const RunConfig& c) {
  if (c.from.empty() || c.to.empty()) throw Error(ErrorCode::kConfigError, "sweep needs --from and --to");
  auto endpoint = [&](const std::vector<double>& v) {
    if (c.d == 1 && v.size() == 1) {
      const std::vector<double> p{v[0], 1.0 - v[0]};
      return StepDistribution::validate(p);
    }
    if (c.d != 0 && v.size() != 2 * static_cast<std::size_t>(c.d)) {
      throw Error(ErrorCode::kConfigError, "sweep endpoints need 2d entries (or p_1 when d = 1)");
    }
    return StepDistribution::validate(v);
  };
  const auto rows = sweep_line(endpoint(c.from), endpoint(c.to), c.grid);
  Output o;
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"t", r.t},
                   {"drift", r.drift},
                   {"entropy", r.entropy},
                   {"d1_drift", r.d1_drift},
                   {"d2_drift", r.d2_drift},
                   {"kink_flag", r.kink}});
  }
  o.result["rows"] = arr;
  o.result["kinks"] = kink_count(rows);
  if (c.format == "csv") {
    std::ostringstream os;
    write_sweep_csv(os, rows);
    o.csv = os.str();
  }
  return o;
}

Output cmd_concavity(const RunConfig& c) {
  ConcavityOptions opts;
  opts.chords = c.chords;
  opts.grid = c.grid;
  opts.tol = c.tol;
  opts.seed = c.seed;
  opts.objective = parse_objective(c.objective);
  Output o;
  o.result = concavity_probe(c.d, opts).to_json();
  return o;
}

// --- verify ---------------------------------------------------------------

struct Check {
  std::string name;
  bool pass = false;
  json detail;
};

FreeProductSpec z3_z2(double a1) {
  const std::vector<double> l3{0.5, 0.5}, l2{1.0};
  return FreeProductSpec({FactorSpec::cyclic(3, l3), FactorSpec::cyclic(2, l2)}, {a1, 1.0 - a1});
}

std::vector<Check> verify_counterexample(const RunConfig& c) {
  std::vector<Check> out;
  const auto half = block_drift(z3_z2(0.5), 1e-10);
  const auto third = block_drift(z3_z2(2.0 / 3.0), 1e-10);
  out.push_back({"z3-z2 analytic ordering", half.lower > third.upper,
                 {{"l_block_half", half.to_json()}, {"l_block_two_thirds", third.to_json()}}});

  SimulationOptions s;
  s.n = c.n > 0 ? c.n : 2'000;
  s.samples = c.samples > 0 ? c.samples : 4'000;
  s.seed = c.seed;
  s.threads = c.threads;
  const auto mh = estimate_drift(Walk::free_product(z3_z2(0.5)), LengthFunctional::kBlock, s);
  const auto mt = estimate_drift(Walk::free_product(z3_z2(2.0 / 3.0)), LengthFunctional::kBlock, s);
  const double pooled = std::hypot(mh.stderr_, mt.stderr_);
  out.push_back({"z3-z2 Monte Carlo ordering", mh.value - mt.value > 3.0 * pooled,
                 {{"half", mh.to_json()}, {"two_thirds", mt.to_json()}, {"pooled_stderr", pooled}}});
  // Agreement uses the increment estimator, which drops the O(1/n) offset.
  s.increment = true;
  const auto ih = estimate_drift(Walk::free_product(z3_z2(0.5)), LengthFunctional::kBlock, s);
  const auto it = estimate_drift(Walk::free_product(z3_z2(2.0 / 3.0)), LengthFunctional::kBlock, s);
  out.push_back({"z3-z2 Monte Carlo vs formula",
                 std::abs(ih.value - half.value) <= 3.0 * ih.stderr_ &&
                     std::abs(it.value - third.value) <= 3.0 * it.stderr_,
                 {{"half", ih.to_json()}, {"two_thirds", it.to_json()}}});
  return out;
}

std::vector<Check> verify_all(const RunConfig& c) {
  std::vector<Check> out;
  for (int d = 2; d <= 5; ++d) {
    const auto r = free_report(StepDistribution::uniform(d));
    const double l = 1.0 - 1.0 / d, h = l * std::log(2.0 * d - 1.0);
    out.push_back({"uniform exactness d=" + std::to_string(d),
                   std::abs(r.drift - l) <= 1e-10 && std::abs(r.entropy - h) <= 1e-10,
                   report_json(r)});
  }

  const StepDistribution p = StepDistribution::validate(std::vector<double>{0.4, 0.2, 0.3, 0.1});
  const TrafficSolution sol = solve_traffic(p);
  const double l = drift_exact(sol, p);
  {
    SimulationOptions s;
    s.n = 20'000;
    s.samples = 500;
    s.seed = c.seed;
    s.threads = c.threads;
    const auto e = estimate_drift(Walk::free_group(p), LengthFunctional::kWord, s);
    out.push_back({"drift vs Monte Carlo", std::abs(e.value - l) <= 3.0 * e.stderr_,
                   {{"exact", l}, {"mc", e.to_json()}}});
  }
  {
    const auto br = hitting_bracket_adaptive(Walk::free_group(p),
                                             {to_normal_form(ReducedWord{1})}, NormalFormWord{}, 1e-9);
    const double z = sol.z[0];
    out.push_back({"z_1 inside hitting bracket", br.lower <= z && z <= br.upper,
                   {{"z", z}, {"lower", br.lower}, {"upper", br.upper}, {"radius", br.radius}}});
  }
  {
    const auto rows = horizon_table(Walk::free_group(p), 10, ConvolutionOptions::default_options());
    bool ok = true;
    for (std::size_t n = 2; n < rows.size(); ++n) {
      ok = ok && rows[n].mean_length / n <= rows[n - 1].mean_length / (n - 1) + 1e-12;
    }
    out.push_back({"L_n/n nonincreasing", ok, {{"L_10", rows.back().mean_length}}});
  }
  {
    std::mt19937_64 rng(c.seed);
    std::exponential_distribution<double> ex(1.0);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 50; ++i) {
      const int d = 2 + i % 3;
      std::vector<double> raw(2 * d);
      double s = 0.0;
      for (double& v : raw) s += (v = ex(rng) + 1e-3);
      for (double& v : raw) v /= s;
      worst = std::min(worst, free_report(StepDistribution::validate(raw)).fundamental_slack);
    }
    out.push_back({"fundamental inequality", worst >= -1e-10, {{"min_slack", worst}}});
  }
  {
    const auto rows = sweep_line(StepDistribution::validate(std::vector<double>{0.3, 0.7}),
                                 StepDistribution::validate(std::vector<double>{0.7, 0.3}), 81);
    out.push_back({"d=1 kink", kink_count(rows) == 1, {{"kinks", kink_count(rows)}}});
  }
  for (auto& ch : verify_counterexample(c)) out.push_back(std::move(ch));
  return out;
}

Output cmd_verify(const RunConfig& c) {
  std::vector<Check> checks;
  if (c.preset == "z3-z2-counterexample") {
    checks = verify_counterexample(c);
  } else if (c.preset == "all") {
    checks = verify_all(c);
  } else {
    throw Error(ErrorCode::kConfigError, "unknown preset '" + c.preset + "'");
  }
  Output o;
  json arr = json::array();
  bool ok = true;
  for (const auto& ch : checks) {
    arr.push_back({{"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
    ok = ok && ch.pass;
  }
  o.result["checks"] = arr;
  o.result["pass"] = ok;
  o.breach = !ok;
  return o;
}

Output dispatch(const RunConfig& c) {
  static const std::map<std::string, std::function<Output(const RunConfig&)>> table{
      {"free-exact", cmd_free_exact}, {"simulate", cmd_simulate},
      {"convolve", cmd_convolve},     {"free-product", cmd_free_product},
      {"optimize", cmd_optimize},     {"sweep", cmd_sweep},
      {"concavity", cmd_concavity},   {"verify", cmd_verify}};
  auto it = table.find(c.command);
  if (it == table.end()) throw Error(ErrorCode::kConfigError, "unknown command '" + c.command + "'");
  return it->second(c);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Drift and entropy of random walks on free groups and free products"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // Raw flag values; copied into the config only when given.
  int d = 0;
  std::string p_text, q_text, spec_path, from_text, to_text, config_path;
  std::int64_t n = 0;
  std::size_t samples = 0, chords = 0;
  std::uint64_t seed = 1;
  double tol = 0.0;
  std::string format = "json", out_path, functional, objective, preset;
  unsigned threads = 1;
  int grid = kUnset, starts = 8;
  bool increment = false;

  const std::vector<std::pair<const char*, const char*>> commands{
      {"free-exact", "Traffic solution, drift and entropy on F_d"},
      {"simulate", "Monte Carlo drift or pointwise entropy"},
      {"convolve", "Exact n-step law: H_n, L_n, return probabilities"},
      {"free-product", "Block-length drift of a free product"},
      {"optimize", "Maximise drift or entropy over symmetric laws"},
      {"sweep", "Evaluate along a segment and flag kinks"},
      {"concavity", "Midpoint-concavity probe on symmetric laws"},
      {"verify", "Cross-oracle verification suite"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sc = app.add_subcommand(name, help);
    sc->add_option("--d", d, "Rank of the free group");
    sc->add_option("--p", p_text, "Step law, comma separated in order +1,-1,+2,-2,...");
    sc->add_option("--q-sym", q_text, "Symmetric law given by q_1..q_d (sum 1/2)");
    sc->add_option("--spec", spec_path, "Free-product spec (JSON file)");
    sc->add_option("--n", n, "Horizon");
    sc->add_option("--samples", samples, "Monte Carlo samples");
    sc->add_option("--seed", seed, "Master seed");
    sc->add_option("--tol", tol, "Tolerance");
    sc->add_option("--out", out_path, "Write output to this file");
    sc->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sc->add_option("--threads", threads, "Worker threads (results do not depend on it)");
    sc->add_option("--config", config_path, "JSON config; overrides flags");
    sc->add_option("--functional", functional, "word, block, green or entropy");
    sc->add_option("--objective", objective, "drift or entropy");
    sc->add_option("--preset", preset, "Verification preset");
    sc->add_option("--from", from_text, "Sweep start");
    sc->add_option("--to", to_text, "Sweep end");
    sc->add_option("--grid", grid, "Sweep points, or extra chord points for concavity");
    sc->add_option("--chords", chords, "Concavity chords");
    sc->add_option("--starts", starts, "Optimizer starts");
    sc->add_flag("--increment", increment, "Drift from len(X_n) - len(X_{n/2}) instead of len(X_n)");
    subs.push_back(sc);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  RunConfig cfg;
  CLI::App* used = nullptr;
  for (auto* sc : subs) {
    if (sc->parsed()) used = sc;
  }
  cfg.command = used->get_name();
  cfg.grid = kUnset;
  try {
    auto given = [&](const char* flag) { return used->count(flag) > 0; };
    if (given("--d")) cfg.d = d;
    if (given("--p")) cfg.p = parse_list(p_text);
    if (given("--q-sym")) cfg.q_sym = parse_list(q_text);
    if (given("--spec")) {
      std::ifstream in(spec_path);
      if (!in) throw Error(ErrorCode::kConfigError, "cannot open " + spec_path);
      try {
        cfg.spec = json::parse(in);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kConfigError, std::string("bad spec JSON: ") + e.what());
      }
    }
    if (given("--n")) cfg.n = n;
    if (given("--samples")) cfg.samples = samples;
    if (given("--seed")) cfg.seed = seed;
    if (given("--tol")) cfg.tol = tol;
    if (given("--out")) cfg.out = out_path;
    cfg.format = format;
    if (given("--threads")) cfg.threads = threads;
    if (given("--functional")) cfg.functional = functional;
    if (given("--objective")) cfg.objective = objective;
    if (given("--preset")) cfg.preset = preset;
    if (given("--from")) cfg.from = parse_list(from_text);
    if (given("--to")) cfg.to = parse_list(to_text);
    if (given("--grid")) cfg.grid = grid;
    if (given("--chords")) cfg.chords = chords;
    if (given("--starts")) cfg.starts = starts;
    if (given("--increment")) cfg.increment = increment;
    if (given("--config")) {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorCode::kConfigError, "cannot open " + config_path);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kConfigError, std::string("bad config JSON: ") + e.what());
      }
      const std::string cmd = cfg.command;
      cfg.merge_json(j);
      if (cfg.command != cmd) {
        throw Error(ErrorCode::kConfigError, "config is for '" + cfg.command + "', not '" + cmd + "'");
      }
    }
    resolve_defaults(cfg);

    const Output o = dispatch(cfg);
    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw Error(ErrorCode::kConfigError, "cannot write " + cfg.out);
      sink = &file;
    }
    if (cfg.format == "csv") {
      if (o.csv.empty()) throw Error(ErrorCode::kConfigError, cfg.command + " has no csv output");
      *sink << "# rwdrift " << kVersion << "\n# config " << cfg.to_json().dump() << "\n" << o.csv;
    } else {
      json doc{{"version", kVersion}, {"config", cfg.to_json()}, {"result", o.result}};
      *sink << doc.dump(2) << "\n";
    }
    return o.breach ? kExitVerification : kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"rwdrift"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rwdrift::cli
