#include "dampreg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dampreg/verify.hpp"

namespace dampreg {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": malformed JSON");
  }
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where.empty() ? "/" : where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      fail(where.empty() ? "/" : where, "unknown key \"" + key + "\"");
  }
}

const json& need(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) fail(where + "/" + key, "required field is missing");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(where, "expected a finite number");
  return x;
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "/" + std::to_string(i)));
  return out;
}

template <class T>
void read_opt(const json& obj, const std::string& where, const char* key, T& dst) {
  if (!obj.contains(key)) return;
  const std::string w = where + "/" + key;
  if constexpr (std::is_same_v<T, int>) {
    if (!obj.at(key).is_number_integer()) fail(w, "expected an integer");
    dst = obj.at(key).get<int>();
  } else if constexpr (std::is_same_v<T, std::size_t>) {
    if (!obj.at(key).is_number_unsigned()) fail(w, "expected a positive integer");
    dst = obj.at(key).get<std::size_t>();
  } else {
    dst = number(obj.at(key), w);
  }
}

SystemParams parse_params(const json& j, const std::string& where) {
  only_keys(j, where, {"m", "k", "lambda", "n_power", "c", "gamma", "omega"});
  SystemParams p;
  read_opt(j, where, "m", p.m);
  read_opt(j, where, "k", p.k);
  read_opt(j, where, "lambda", p.lambda);
  read_opt(j, where, "n_power", p.n_power);
  read_opt(j, where, "c", p.c);
  read_opt(j, where, "gamma", p.gamma);
  read_opt(j, where, "omega", p.omega);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("/") + e.what());
  }
  return p;
}

bool is_regularized(SystemId s) {
  return s == SystemId::RegularizedLC || s == SystemId::RegularizedGenLC || s == SystemId::RegularizedKS;
}

bool output_applies(const std::string& name, SystemId s) {
  const bool ho = s == SystemId::DampedHO2D || s == SystemId::ShiftedHO2D;
  if (name == "script_e") return !ho;
  if (name == "ang_mom") return !is_regularized(s);
  if (name == "h_oscillator") return is_regularized(s) || ho;
  if (name == "bilinear") return s == SystemId::RegularizedKS;
  if (name == "radius") return true;
  return false;
}

const std::vector<std::string> kOutputs = {"script_e", "ang_mom", "h_oscillator", "bilinear", "radius"};

IntegratorConfig parse_integrator(const json& j, const std::string& where) {
  only_keys(j, where,
            {"method", "rel_tol", "abs_tol", "h_init", "h_min", "h_max", "t_end", "max_steps",
             "collision_r", "end"});
  IntegratorConfig c;
  if (j.contains("method")) {
    const std::string m = text(j.at("method"), where + "/method");
    if (m == "RK4")
      c.method = Method::RK4;
    else if (m == "AdaptiveRK45")
      c.method = Method::AdaptiveRK45;
    else
      fail(where + "/method", "unknown method \"" + m + "\" (RK4 or AdaptiveRK45)");
  }
  read_opt(j, where, "rel_tol", c.rel_tol);
  read_opt(j, where, "abs_tol", c.abs_tol);
  read_opt(j, where, "h_init", c.h_init);
  read_opt(j, where, "h_min", c.h_min);
  read_opt(j, where, "h_max", c.h_max);
  c.t_end = number(need(j, where, "t_end"), where + "/t_end");
  read_opt(j, where, "max_steps", c.max_steps);
  read_opt(j, where, "collision_r", c.collision_r);
  if (j.contains("end")) {
    const std::string e = text(j.at("end"), where + "/end");
    if (e == "IndependentVariable")
      c.end = EndCondition::IndependentVariable;
    else if (e == "PhysicalTime")
      c.end = EndCondition::PhysicalTime;
    else
      fail(where + "/end", "unknown end condition \"" + e + "\"");
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("/") + e.what());
  }
  return c;
}

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Output values of one sample, matching trajectory_columns() after the state.
std::vector<double> output_values(const ScenarioConfig& cfg, const Sample& s, const RhsContext& ctx) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> out;
  const ConservedSet& c = s.conserved;
  for (const auto& name : cfg.outputs) {
    if (name == "script_e") out.push_back(c.script_e.value_or(nan));
    if (name == "ang_mom") out.insert(out.end(), c.ang_mom.begin(), c.ang_mom.end());
    if (name == "h_oscillator") out.push_back(c.h_oscillator.value_or(nan));
    if (name == "bilinear") out.push_back(c.bilinear.value_or(nan));
    if (name == "radius") out.push_back(physical_radius(cfg.system, s.state, ctx));
  }
  return out;
}

}  // namespace

std::vector<double> ScenarioConfig::initial_state() const {
  std::vector<double> s = position;
  s.insert(s.end(), velocity.begin(), velocity.end());
  if (system_info(system).cointegrates_time) s.push_back(physical_time);
  return s;
}

RhsContext ScenarioConfig::context() const {
  RhsContext ctx;
  ctx.params = params;
  const std::span<const double> u(position), up(velocity);
  if (script_e) {
    ctx.script_e = *script_e;
  } else if (system == SystemId::RegularizedLC) {
    ctx.script_e = script_e_regularized(OscillatorFamily::LeviCivita, u, up, params);
  } else if (system == SystemId::RegularizedGenLC) {
    ctx.script_e = script_e_regularized(OscillatorFamily::GeneralizedLeviCivita, u, up, params);
  } else if (system == SystemId::RegularizedKS) {
    ctx.script_e = script_e_regularized(OscillatorFamily::KustaanheimoStiefel, u, up, params);
  }
  if (kepler_energy) {
    ctx.kepler_energy = *kepler_energy;
  } else if (system == SystemId::ShiftedHO2D) {
    ctx.kepler_energy = shifted_oscillator_energy(from_span<2>(u), from_span<2>(up), params);
  }
  return ctx;
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  const json root = parse_json(json_text);
  only_keys(root, "",
            {"schema_version", "system", "params", "initial_conditions", "constants", "integrator",
             "outputs"});
  const json& ver = need(root, "", "schema_version");
  if (!ver.is_number_integer() || ver.get<long long>() != kSchemaVersion)
    fail("/schema_version", "must be " + std::to_string(kSchemaVersion));

  ScenarioConfig cfg;
  const std::string name = text(need(root, "", "system"), "/system");
  const auto sys = parse_system_id(name);
  if (!sys) fail("/system", "unknown system \"" + name + "\"");
  cfg.system = *sys;
  const auto& info = system_info(cfg.system);

  if (root.contains("params")) cfg.params = parse_params(root.at("params"), "/params");

  const json& ic = need(root, "", "initial_conditions");
  only_keys(ic, "/initial_conditions", {"position", "velocity", "time", "physical_time"});
  cfg.position = numbers(need(ic, "/initial_conditions", "position"), "/initial_conditions/position");
  cfg.velocity = numbers(need(ic, "/initial_conditions", "velocity"), "/initial_conditions/velocity");
  for (const auto& [field, v] : {std::pair{"position", &cfg.position}, std::pair{"velocity", &cfg.velocity}})
    if (v->size() != info.coord_dim)
      fail(std::string("/initial_conditions/") + field,
           std::string(info.name) + " needs " + std::to_string(info.coord_dim) + " components, got " +
               std::to_string(v->size()));
  read_opt(ic, "/initial_conditions", "time", cfg.time);
  if (ic.contains("physical_time")) {
    if (!info.cointegrates_time)
      fail("/initial_conditions/physical_time", std::string(info.name) + " has no co-integrated time");
    read_opt(ic, "/initial_conditions", "physical_time", cfg.physical_time);
  }

  if (root.contains("constants")) {
    const json& c = root.at("constants");
    only_keys(c, "/constants", {"script_e", "kepler_energy"});
    if (c.contains("script_e")) cfg.script_e = number(c.at("script_e"), "/constants/script_e");
    if (c.contains("kepler_energy"))
      cfg.kepler_energy = number(c.at("kepler_energy"), "/constants/kepler_energy");
  }
  if (cfg.system == SystemId::BohlinKepler2D && !cfg.kepler_energy)
    fail("/constants/kepler_energy", "required for BohlinKepler2D (strength k = E/4)");

  cfg.integrator = parse_integrator(need(root, "", "integrator"), "/integrator");
  if (cfg.integrator.end == EndCondition::PhysicalTime && !info.cointegrates_time)
    fail("/integrator/end", std::string(info.name) + " has no co-integrated physical time");

  if (root.contains("outputs")) {
    const json& o = root.at("outputs");
    if (!o.is_array()) fail("/outputs", "expected an array of names");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < o.size(); ++i) {
      const std::string w = "/outputs/" + std::to_string(i);
      const std::string q = text(o[i], w);
      if (std::find(kOutputs.begin(), kOutputs.end(), q) == kOutputs.end())
        fail(w, "unknown output \"" + q + "\"");
      if (!output_applies(q, cfg.system))
        fail(w, "output \"" + q + "\" does not apply to " + std::string(info.name));
      if (seen.insert(q).second) cfg.outputs.push_back(q);
    }
  } else {
    for (const auto& q : kOutputs)
      if (output_applies(q, cfg.system)) cfg.outputs.push_back(q);
  }
  return cfg;
}

std::vector<std::string> trajectory_columns(const ScenarioConfig& cfg) {
  const auto& info = system_info(cfg.system);
  const std::size_t d = info.coord_dim;
  const bool reg = info.cointegrates_time;
  std::vector<std::string> cols{reg ? "tau" : "t"};
  for (std::size_t i = 1; i <= d; ++i) cols.push_back((reg ? "u" : "q") + std::to_string(i));
  for (std::size_t i = 1; i <= d; ++i) cols.push_back((reg ? "du" : "v") + std::to_string(i));
  if (reg) cols.push_back("t");
  for (const auto& q : cfg.outputs) {
    if (q == "ang_mom" && d == 3) {
      for (const char* a : {"ang_mom_x", "ang_mom_y", "ang_mom_z"}) cols.push_back(a);
    } else {
      cols.push_back(q);
    }
  }
  return cols;
}

int exit_code(Status s) { return s == Status::Completed ? 0 : 2; }

int cmd_simulate(const std::string& config_path, const std::string& out_dir, std::ostream& out,
                 std::ostream& err, bool quiet) {
  ScenarioConfig cfg;
  RhsContext ctx;
  std::vector<double> s0;
  try {
    cfg = parse_scenario(read_file(config_path));
    ctx = cfg.context();
    s0 = cfg.initial_state();
  } catch (const std::exception& e) {
    err << "error: " << config_path << ": " << e.what() << "\n";
    return 1;
  }

  Trajectory traj;
  try {
    traj = integrate(cfg.system, s0, ctx, cfg.integrator, cfg.time);
  } catch (const std::invalid_argument& e) {
    err << "error: " << config_path << ": " << e.what() << "\n";
    return 1;
  }

  const auto cols = trajectory_columns(cfg);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto dir = std::filesystem::path(out_dir);
  std::ofstream csv(dir / "trajectory.csv", std::ios::binary);
  std::ofstream summary(dir / "summary.json", std::ios::binary);
  if (!csv || !summary) {
    err << "error: cannot write to " << out_dir << "\n";
    return 1;
  }

  for (std::size_t i = 0; i < cols.size(); ++i) csv << (i ? "," : "") << cols[i];
  csv << "\n";
  std::vector<std::vector<double>> outputs;
  for (const Sample& s : traj.samples) {
    csv << fmt17(s.time);
    for (double x : s.state) csv << "," << fmt17(x);
    outputs.push_back(output_values(cfg, s, ctx));
    for (double x : outputs.back()) csv << "," << fmt17(x);
    csv << "\n";
  }

  // Drift of each output column relative to its first value.
  ojson drifts = ojson::object();
  const std::size_t first_out = cols.size() - (outputs.empty() ? 0 : outputs.front().size());
  for (std::size_t c = 0; !outputs.empty() && c < outputs.front().size(); ++c) {
    const std::string& name = cols[first_out + c];
    if (name == "radius") continue;
    const double v0 = outputs.front()[c];
    double max_abs = 0.0;
    for (const auto& row : outputs)
      if (std::isfinite(row[c])) max_abs = std::max(max_abs, std::abs(row[c] - v0));
    ojson d;
    d["max_abs"] = max_abs;
    d["max_rel"] = (std::isfinite(v0) && v0 != 0.0) ? ojson(max_abs / std::abs(v0)) : ojson(nullptr);
    drifts[name] = d;
  }

  ojson sj;
  sj["system"] = std::string(to_string(cfg.system));
  sj["status"] = std::string(to_string(traj.status));
  if (!traj.message.empty()) sj["message"] = traj.message;
  sj["columns"] = cols;
  sj["samples"] = traj.samples.size();
  sj["rejected_steps"] = traj.rejected_steps;
  sj["final_time"] = traj.samples.back().time;
  sj["final_state"] = traj.samples.back().state;
  sj["drifts"] = drifts;
  summary << sj.dump(2) << "\n";

  if (!quiet)
    out << to_string(cfg.system) << ": " << to_string(traj.status) << " after "
        << traj.samples.size() << " samples, " << cols.front() << " = "
        << fmt17(traj.samples.back().time) << "\n";
  return exit_code(traj.status);
}

int cmd_verify(const std::string& filter, const std::string& out_path, std::uint64_t seed,
               unsigned threads, std::ostream& out, std::ostream& err, bool quiet) {
  const auto specs = filter_suite(standard_suite(seed), filter);
  if (specs.empty()) {
    err << "error: no checks matched \"" << filter << "\"\n";
    return 1;
  }
  const auto results = run_suite(specs, threads);
  const std::string report = report_json(results);
  if (out_path.empty() || out_path == "-") {
    out << report;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << out_path << "\n";
      return 1;
    }
    f << report;
  }
  std::size_t passed = 0;
  for (const auto& r : results) {
    passed += r.pass ? 1 : 0;
    if (!quiet || !r.pass) {
      std::ostream& dst = (out_path.empty() || out_path == "-") ? err : out;
      char line[256];
      std::snprintf(line, sizeof line, "%-4s %-52s measured %-11.3e tol %.1e", r.pass ? "ok" : "FAIL",
                    r.name.c_str(), r.measured, r.tolerance);
      dst << line << (r.error.empty() ? "" : "  (" + r.error + ")") << "\n";
    }
  }
  if (!quiet) {
    std::ostream& dst = (out_path.empty() || out_path == "-") ? err : out;
    dst << passed << "/" << results.size() << " checks passed\n";
  }
  return passed == results.size() ? 0 : 1;
}

// --- transform -------------------------------------------------------------------

namespace {

template <std::size_t N>
Vec<N> vec_arg(const json& in, const char* key) {
  const std::string w = std::string("/input/") + key;
  const auto v = numbers(need(in, "/input", key), w);
  if (v.size() != N) fail(w, "expected " + std::to_string(N) + " components, got " + std::to_string(v.size()));
  return from_span<N>(v);
}

template <std::size_t N>
ojson arr(const Vec<N>& v) {
  return ojson(std::vector<double>(v.c.begin(), v.c.end()));
}

int int_arg(const json& in, const char* key) {
  const json& v = need(in, "/input", key);
  if (!v.is_number_integer()) fail(std::string("/input/") + key, "expected an integer");
  return v.get<int>();
}

template <std::size_t D>
ojson phase_transform(const json& in, const SystemParams& p, bool forward) {
  only_keys(in, "/input", {"q", "v", "t"});
  const PhaseState<D> s{vec_arg<D>(in, "q"), vec_arg<D>(in, "v"),
                        in.contains("t") ? number(in.at("t"), "/input/t") : 0.0};
  const PhaseState<D> r = forward ? damp_to_autonomous(s, p) : autonomous_to_damp(s, p);
  ojson o;
  o["q"] = arr(r.q);
  o["v"] = arr(r.v);
  o["t"] = r.t;
  return o;
}

ojson evaluate_transform(const std::string& name, const json& in, const SystemParams& p) {
  if (name == "lc_forward") {
    only_keys(in, "/input", {"u"});
    return arr(lc_forward(vec_arg<2>(in, "u"), p.gamma));
  }
  if (name == "lc_inverse") {
    only_keys(in, "/input", {"z"});
    return arr(lc_inverse(vec_arg<2>(in, "z"), p.gamma));
  }
  if (name == "lc_velocity_map") {
    only_keys(in, "/input", {"u", "zdot"});
    return arr(lc_velocity_map(vec_arg<2>(in, "u"), vec_arg<2>(in, "zdot"), p));
  }
  if (name == "lc_physical_velocity") {
    only_keys(in, "/input", {"u", "u_prime"});
    return arr(lc_physical_velocity(vec_arg<2>(in, "u"), vec_arg<2>(in, "u_prime"), p));
  }
  if (name == "gen_lc_forward") {
    only_keys(in, "/input", {"u", "n"});
    return arr(gen_lc_forward(vec_arg<2>(in, "u"), int_arg(in, "n")));
  }
  if (name == "gen_lc_inverse") {
    only_keys(in, "/input", {"z", "n"});
    return arr(gen_lc_inverse(vec_arg<2>(in, "z"), int_arg(in, "n")));
  }
  if (name == "ks_forward") {
    only_keys(in, "/input", {"u"});
    return arr(ks_forward(vec_arg<4>(in, "u")));
  }
  if (name == "ks_inverse") {
    only_keys(in, "/input", {"x"});
    return arr(ks_inverse(vec_arg<3>(in, "x")));
  }
  if (name == "ks_velocity_map") {
    only_keys(in, "/input", {"u", "xdot"});
    return arr(ks_velocity_map(vec_arg<4>(in, "u"), vec_arg<3>(in, "xdot")));
  }
  if (name == "ks_physical_velocity") {
    only_keys(in, "/input", {"u", "u_prime"});
    return arr(ks_physical_velocity(vec_arg<4>(in, "u"), vec_arg<4>(in, "u_prime")));
  }
  if (name == "bilinear") {
    only_keys(in, "/input", {"u", "u_prime"});
    return bilinear_constraint(vec_arg<4>(in, "u"), vec_arg<4>(in, "u_prime"));
  }
  if (name == "bohlin_forward") {
    only_keys(in, "/input", {"w"});
    return arr(bohlin_forward(vec_arg<2>(in, "w")));
  }
  if (name == "bohlin_velocity_map") {
    only_keys(in, "/input", {"w", "w_prime"});
    return arr(bohlin_velocity_map(vec_arg<2>(in, "w"), vec_arg<2>(in, "w_prime")));
  }
  if (name == "damp_to_autonomous" || name == "autonomous_to_damp") {
    const bool fwd = name == "damp_to_autonomous";
    const std::size_t d = need(in, "/input", "q").size();
    if (d == 2) return phase_transform<2>(in, p, fwd);
    if (d == 3) return phase_transform<3>(in, p, fwd);
    fail("/input/q", "expected 2 or 3 components");
  }
  if (name == "time_rate") {
    only_keys(in, "/input", {"regularization", "r"});
    const std::string reg = text(need(in, "/input", "regularization"), "/input/regularization");
    const double r = number(need(in, "/input", "r"), "/input/r");
    static const std::map<std::string, Regularization> regs = {
        {"LeviCivita", Regularization::LeviCivita},
        {"PowerLaw", Regularization::PowerLaw},
        {"KustaanheimoStiefel", Regularization::KustaanheimoStiefel},
        {"BohlinSundman", Regularization::BohlinSundman}};
    const auto it = regs.find(reg);
    if (it == regs.end()) fail("/input/regularization", "unknown regularization \"" + reg + "\"");
    return time_rate(it->second, r, p);
  }
  fail("/transform", "unknown transform \"" + name + "\"");
}

}  // namespace

std::string run_transform(const std::string& json_text) {
  const json root = parse_json(json_text);
  only_keys(root, "", {"schema_version", "transform", "input", "params"});
  const json& ver = need(root, "", "schema_version");
  if (!ver.is_number_integer() || ver.get<long long>() != kSchemaVersion)
    fail("/schema_version", "must be " + std::to_string(kSchemaVersion));
  const std::string name = text(need(root, "", "transform"), "/transform");
  const SystemParams p = root.contains("params") ? parse_params(root.at("params"), "/params") : SystemParams{};
  ojson result;
  try {
    result = evaluate_transform(name, need(root, "", "input"), p);
  } catch (const SingularInputError& e) {
    throw ConfigError(std::string("/input: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("/input: ") + e.what());
  }
  ojson doc;
  doc["transform"] = name;
  doc["result"] = result;
  return doc.dump() + "\n";
}

int cmd_transform(const std::string& spec_path, std::ostream& out, std::ostream& err) {
  try {
    out << run_transform(read_file(spec_path));
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << spec_path << ": " << e.what() << "\n";
    return 1;
  }
}

// --- entry point -------------------------------------------------------------------

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regularization of damped central-force motion: simulate, verify, transform"};
  app.name("dampreg");
  app.require_subcommand(1);

  std::string seed_text = "0xC0FFEE";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool quiet = false;
  app.add_option("--seed", seed_text, "Seed for randomized checks (DAMPREG_SEED or TOOL_SEED override)");
  app.add_option("--threads", threads, "Maximum number of checks run in parallel")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "Only print failures and errors");

  std::string config_path, out_dir;
  auto* sim = app.add_subcommand("simulate", "Integrate one scenario and write trajectory.csv and summary.json");
  sim->add_option("config", config_path, "Scenario JSON file")->required();
  sim->add_option("-o,--out", out_dir, "Output directory")->required();

  std::string filter, report_path;
  auto* ver = app.add_subcommand("verify", "Run the verification suite and write a JSON report");
  ver->add_option("--filter", filter, "Run only checks whose name contains this text");
  ver->add_option("-o,--out", report_path, "Report path (stdout when omitted)");

  std::string spec_path;
  auto* tr = app.add_subcommand("transform", "Apply one coordinate map to a state and print the result");
  tr->add_option("spec", spec_path, "Transform JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  for (const char* var : {"DAMPREG_SEED", "TOOL_SEED"}) {
    if (const char* env = std::getenv(var); env && *env) {
      seed_text = env;
      break;
    }
  }
  std::uint64_t seed = 0;
  try {
    std::size_t used = 0;
    seed = std::stoull(seed_text, &used, 0);
    if (used != seed_text.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    err << "error: invalid seed \"" << seed_text << "\"\n";
    return 1;
  }

  if (sim->parsed()) return cmd_simulate(config_path, out_dir, out, err, quiet);
  if (ver->parsed()) return cmd_verify(filter, report_path, seed, threads, out, err, quiet);
  return cmd_transform(spec_path, out, err);
}

}  // namespace dampreg
