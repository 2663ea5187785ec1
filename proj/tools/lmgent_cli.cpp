// lmgent: sweeps, limit-temperature maps, spectra and parity transitions of the
// anisotropic fully connected spin model.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "lmgent/errors.hpp"
#include "lmgent/exact_thermo.hpp"
#include "lmgent/sweep.hpp"

using namespace lmgent;

namespace {

constexpr int kOk = 0;
constexpr int kBadArgs = 2;
constexpr int kNumerical = 3;

struct Options {
  int n = 100;
  double b = 0.0;
  double vx = 1.0;
  double vy = 0.0;
  double vz = 0.0;
  std::optional<double> chi;
  double T = 0.0;
  std::string method = "exact";
  std::string sweep = "field";
  double from = 0.0;
  double to = 2.0;
  int points = 41;
  bool geometric = false;
  std::string out;
  std::string format = "csv";
  std::vector<std::string> outputs;
  int count = 10;
};

// Config values first, then every flag given on the command line.
void load_config(const std::string& path, Options& o) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  auto get = [&](const char* key, auto& dst) {
    if (j.contains(key)) dst = j.at(key).get<std::decay_t<decltype(dst)>>();
  };
  try {
    get("n", o.n);
    get("b", o.b);
    get("vx", o.vx);
    get("vy", o.vy);
    get("vz", o.vz);
    if (j.contains("chi")) o.chi = j.at("chi").get<double>();
    get("T", o.T);
    get("method", o.method);
    get("sweep", o.sweep);
    get("from", o.from);
    get("to", o.to);
    get("points", o.points);
    get("geometric", o.geometric);
    get("out", o.out);
    get("format", o.format);
    get("outputs", o.outputs);
    get("count", o.count);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad config value: ") + e.what());
  }
}

ModelParams model(const Options& o) {
  if (o.chi) return params_from_chi(o.n, o.b, o.vx, *o.chi, o.vz);
  return ModelParams{o.n, o.b, o.vx, o.vy, o.vz};
}

void write(const Table& t, const Options& o) {
  if (o.format != "csv" && o.format != "json") throw DomainError("format must be csv or json");
  auto emit = [&](std::ostream& os) {
    if (o.format == "csv")
      emit_csv(t, os);
    else
      emit_json(t, os);
  };
  if (o.out.empty() || o.out == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw std::runtime_error("cannot open output file " + o.out);
  emit(f);
}

Method method_of(const Options& o) {
  auto m = parse_method(o.method);
  if (!m) throw DomainError("unknown method " + o.method);
  return *m;
}

Grid grid_of(const Options& o) { return Grid{o.from, o.to, o.points, o.geometric}; }

std::string meta_for(const ModelParams& p, const char* what) {
  nlohmann::ordered_json m;
  m["params"] = {{"n", p.n}, {"b", p.b}, {"vx", p.vx}, {"vy", p.vy}, {"vz", p.vz}};
  m["method"] = "exact";
  m["content"] = what;
  m["versions"] = {{"lmgent", std::string(kVersion)}};
  m["units"] = "energies in the units of vx";
  return m.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal pairwise entanglement in the anisotropic fully connected spin model"};
  app.require_subcommand(1);
  Options cli;
  std::string config;

  auto add_model = [&](CLI::App* sc) {
    sc->add_option("--config", config, "JSON config mirroring the flags; flags override");
    sc->add_option("--n", cli.n, "number of spins");
    sc->add_option("--b", cli.b, "magnetic field");
    sc->add_option("--vx", cli.vx, "coupling vx");
    auto* vy = sc->add_option("--vy", cli.vy, "coupling vy");
    sc->add_option("--vz", cli.vz, "coupling vz");
    sc->add_option("--chi", cli.chi, "anisotropy (vy - vz)/(vx - vz), sets vy")->excludes(vy);
    sc->add_option("--out", cli.out, "output file (default stdout)");
    sc->add_option("--format", cli.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_grid = [&](CLI::App* sc) {
    sc->add_option("--from", cli.from, "grid start");
    sc->add_option("--to", cli.to, "grid end");
    sc->add_option("--points", cli.points, "grid points");
    sc->add_flag("--geometric", cli.geometric, "geometric spacing");
  };

  auto* sweep = app.add_subcommand("sweep", "concurrence and observables along a field or temperature grid");
  add_model(sweep);
  add_grid(sweep);
  sweep->add_option("--T", cli.T, "temperature for field sweeps");
  sweep->add_option("--method", cli.method, "exact, oracle, mfrpa_full, mfrpa_asymptotic or cspa");
  sweep->add_option("--sweep", cli.sweep, "field or temperature");
  sweep->add_option("--outputs", cli.outputs, "columns to emit")->delimiter(',');

  auto* phase = app.add_subcommand("phase-map", "limit temperatures on a field grid");
  add_model(phase);
  add_grid(phase);
  phase->add_option("--method", cli.method, "exact or mfrpa_asymptotic");

  auto* spectrum = app.add_subcommand("spectrum", "lowest excitation energies at field b");
  add_model(spectrum);
  spectrum->add_option("--count", cli.count, "number of levels");

  auto* transitions = app.add_subcommand("transitions", "ground-state parity crossings in (from, to)");
  add_model(transitions);
  add_grid(transitions);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadArgs;
  }

  // merge: config values, then explicitly given flags
  Options o;
  CLI::App* sc = app.get_subcommands().front();
  try {
    if (!config.empty()) load_config(config, o);
    auto given = [&](const char* name) { return sc->count(name) > 0; };
    if (given("--n")) o.n = cli.n;
    if (given("--b")) o.b = cli.b;
    if (given("--vx")) o.vx = cli.vx;
    if (given("--vy")) {
      o.vy = cli.vy;
      o.chi.reset();
    }
    if (given("--vz")) o.vz = cli.vz;
    if (given("--chi")) o.chi = cli.chi;
    if (given("--out")) o.out = cli.out;
    if (given("--format")) o.format = cli.format;
    if (sc != spectrum) {
      if (given("--from")) o.from = cli.from;
      if (given("--to")) o.to = cli.to;
      if (given("--points")) o.points = cli.points;
      if (given("--geometric")) o.geometric = cli.geometric;
    }
    if (sc == sweep || sc == phase)
      if (given("--method")) o.method = cli.method;
    if (sc == sweep) {
      if (given("--T")) o.T = cli.T;
      if (given("--sweep")) o.sweep = cli.sweep;
      if (given("--outputs")) o.outputs = cli.outputs;
    }
    if (sc == spectrum && given("--count")) o.count = cli.count;
    if (sc == phase && !given("--method") && config.empty()) o.method = "exact";

    const ModelParams p = model(o);
    if (sc == sweep) {
      SweepSpec spec;
      spec.method = method_of(o);
      spec.params = p;
      spec.T = o.T;
      auto axis = parse_axis(o.sweep);
      if (!axis) throw DomainError("--sweep must be field or temperature");
      spec.axis = *axis;
      spec.grid = grid_of(o);
      if (!o.outputs.empty()) spec.outputs = o.outputs;
      write(run_sweep(spec), o);
    } else if (sc == phase) {
      write(run_phase_map(p, grid_of(o), method_of(o)), o);
    } else if (sc == spectrum) {
      if (o.count < 1) throw DomainError("--count must be >= 1");
      const auto levels = spectrum_low(canonicalize(p), o.count);
      Table t;
      t.axis_name = "index";
      t.columns = {"S", "parity", "k", "excitation"};
      for (std::size_t i = 0; i < levels.size(); ++i)
        t.rows.push_back({static_cast<double>(i),
                          {levels[i].s.value(), static_cast<double>(levels[i].parity),
                           static_cast<double>(levels[i].k), levels[i].excitation},
                          {}});
      t.metadata_json = meta_for(p, "lowest levels");
      write(t, o);
    } else {
      const ModelParams q = canonicalize(p);
      const auto bs = parity_transitions(q, o.from, o.to, sc->count("--points") ? o.points : 0);
      Table t;
      t.axis_name = "index";
      t.columns = {"b"};
      for (std::size_t i = 0; i < bs.size(); ++i) t.rows.push_back({static_cast<double>(i), {bs[i]}, {}});
      t.metadata_json = meta_for(q, "ground-state parity transitions");
      write(t, o);
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
