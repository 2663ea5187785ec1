#include "lmgent/sweep.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <boost/version.hpp>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "lmgent/cspa.hpp"
#include "lmgent/errors.hpp"
#include "lmgent/exact_thermo.hpp"
#include "lmgent/mean_field.hpp"
#include "lmgent/oracle.hpp"
#include "lmgent/rpa_entanglement.hpp"

namespace lmgent {

namespace {

using Values = std::map<std::string, double>;

struct RowOut {
  Values values;
  std::vector<std::string> flags;
};

void add_flag(RowOut& row, std::string f) {
  if (std::find(row.flags.begin(), row.flags.end(), f) == row.flags.end())
    row.flags.push_back(std::move(f));
}

// Runs body, turning library errors into row flags.
template <class F>
void guarded(RowOut& row, F&& body) {
  try {
    body();
  } catch (const BreakdownError&) {
    add_flag(row, "breakdown");
  } catch (const DivergenceError&) {
    add_flag(row, "divergence");
  } catch (const NumericalError&) {
    add_flag(row, "numerical_error");
  } catch (const SymmetryViolation&) {
    add_flag(row, "symmetry_violation");
  } catch (const DomainError&) {
    add_flag(row, "domain_error");
  }
}

bool wants(const std::vector<std::string>& outs, std::initializer_list<const char*> names) {
  for (const char* n : names)
    if (std::find(outs.begin(), outs.end(), n) != outs.end()) return true;
  return false;
}

void put_report(Values& v, const ConcurrenceReport& r, int n) {
  v["C"] = r.c;
  v["nC"] = n * r.c;
  v["C_plus"] = r.c_plus;
  v["C_minus"] = r.c_minus;
}

void put_obs(Values& v, const PairObservables& o) {
  v["alpha_x"] = o.ax;
  v["alpha_y"] = o.ay;
  v["alpha_z"] = o.az;
  v["sz"] = o.sz;
}

void put_mean_field(RowOut& row, const ModelParams& p, double T) {
  guarded(row, [&] {
    const MeanFieldSolution mf = solve_mean_field(p, T);
    row.values["lambda"] = mf.lambda;
    row.values["omega"] = mf.omega;
    add_flag(row, mf.phase == Phase::symmetry_breaking ? "phase=symmetry_breaking" : "phase=normal");
  });
}

RowOut compute_row(const SweepSpec& spec, const ModelParams& p, double T,
                   const ExactSpectrum* shared) {
  RowOut row;
  const auto& outs = spec.outputs;
  const int n = p.n;
  put_mean_field(row, p, T);
  switch (spec.method) {
    case Method::exact: {
      guarded(row, [&] {
        std::optional<ExactSpectrum> own;
        if (!shared) own = diagonalize(p);
        const ExactSpectrum& sp = shared ? *shared : *own;
        const ThermalMoments mom = thermal_moments(sp, T);
        const PairObservables obs = observables_from_moments(n, mom.s2x, mom.s2y, mom.s2z, mom.sz);
        put_obs(row.values, obs);
        put_report(row.values, concurrence(obs, n), n);
        row.values["lnZ"] = mom.log_z;
        if (wants(outs, {"T_L_plus", "T_L_minus"})) {
          const LimitTemperatures tl = limit_temperatures(sp);
          if (auto t = tl.tl_plus()) row.values["T_L_plus"] = *t;
          if (auto t = tl.tl_minus()) row.values["T_L_minus"] = *t;
        }
      });
      break;
    }
    case Method::oracle: {
      guarded(row, [&] {
        const oracle::OracleResult r = oracle::oracle_concurrence(p, T);
        put_obs(row.values, r.pair.obs);
        put_report(row.values, r.report, n);
        row.values["lnZ"] = r.log_z;
      });
      break;
    }
    case Method::mfrpa_full: {
      guarded(row, [&] {
        const FullConcurrence fc = full_concurrence(p, T);
        if (fc.complex_termination) add_flag(row, "complex_termination");
        double c = 0.0;
        if (fc.c_plus) {
          row.values["C_plus"] = *fc.c_plus;
          c = std::max(c, *fc.c_plus);
        }
        if (fc.c_minus) {
          row.values["C_minus"] = *fc.c_minus;
          c = std::max(c, *fc.c_minus);
        }
        row.values["C"] = c;
        row.values["nC"] = n * c;
      });
      if (wants(outs, {"alpha_x", "alpha_y", "alpha_z", "sz"}))
        guarded(row, [&] { put_obs(row.values, mfrpa_observables(p, T).obs); });
      if (wants(outs, {"lnZ"})) guarded(row, [&] { row.values["lnZ"] = log_partition_mfrpa(p, T); });
      if (wants(outs, {"T_L_plus", "T_L_minus"}))
        guarded(row, [&] {
          const LimitTemperatureRpa tl = limit_temperature_rpa(p);
          if (tl.plus) row.values["T_L_plus"] = *tl.plus;
          if (tl.minus) row.values["T_L_minus"] = *tl.minus;
        });
      break;
    }
    case Method::mfrpa_asymptotic: {
      guarded(row, [&] {
        const AsymptoticConcurrence ac = asymptotic_concurrence(p, T);
        row.values["lambda"] = ac.lambda;
        row.values["omega"] = ac.omega;
        if (ac.c_plus) row.values["C_plus"] = *ac.c_plus;
        if (ac.c_minus) row.values["C_minus"] = *ac.c_minus;
        row.values["C"] = ac.c();
        row.values["nC"] = n * ac.c();
      });
      if (wants(outs, {"T_L_plus", "T_L_minus"}))
        guarded(row, [&] {
          const LimitTemperatureRpa tl = limit_temperature_rpa(p);
          if (tl.plus) row.values["T_L_plus"] = *tl.plus;
          if (tl.minus) row.values["T_L_minus"] = *tl.minus;
        });
      break;
    }
    case Method::cspa: {
      guarded(row, [&] {
        const CspaResult r = cspa(p, T);
        if (!r.converged) add_flag(row, "quadrature_unconverged");
        put_obs(row.values, r.obs);
        put_report(row.values, concurrence(r.obs, n), n);
        row.values["lnZ"] = r.log_z;
      });
      break;
    }
  }
  return row;
}

template <class F>
void parallel_rows(std::size_t count, F&& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, count));
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) body(i);
  };
  if (workers <= 1) {
    run();
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
}

nlohmann::ordered_json params_json(const ModelParams& p) {
  nlohmann::ordered_json j;
  j["n"] = p.n;
  j["b"] = p.b;
  j["vx"] = p.vx;
  j["vy"] = p.vy;
  j["vz"] = p.vz;
  if (auto chi = p.chi()) j["chi"] = *chi;
  return j;
}

nlohmann::ordered_json versions_json() {
  nlohmann::ordered_json j;
  j["lmgent"] = std::string(kVersion);
  j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  j["boost"] = std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) +
               "." + std::to_string(BOOST_VERSION % 100);
  return j;
}

nlohmann::ordered_json grid_json(const Grid& g) {
  nlohmann::ordered_json j;
  j["from"] = g.from;
  j["to"] = g.to;
  j["points"] = g.points;
  j["spacing"] = g.geometric ? "geometric" : "linear";
  return j;
}

constexpr const char* kUnits =
    "energies, fields and temperatures in the units of vx (hbar = k_B = 1); nC = n * C";

}  // namespace

std::optional<Method> parse_method(std::string_view s) {
  if (s == "exact") return Method::exact;
  if (s == "oracle") return Method::oracle;
  if (s == "mfrpa_full") return Method::mfrpa_full;
  if (s == "mfrpa_asymptotic") return Method::mfrpa_asymptotic;
  if (s == "cspa") return Method::cspa;
  return std::nullopt;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::oracle: return "oracle";
    case Method::mfrpa_full: return "mfrpa_full";
    case Method::mfrpa_asymptotic: return "mfrpa_asymptotic";
    case Method::cspa: return "cspa";
  }
  return "?";
}

std::optional<Axis> parse_axis(std::string_view s) {
  if (s == "field") return Axis::field;
  if (s == "temperature") return Axis::temperature;
  return std::nullopt;
}

std::string_view to_string(Axis a) { return a == Axis::field ? "field" : "temperature"; }

std::vector<double> Grid::values() const {
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) {
    const double s = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    v[i] = geometric ? from * std::pow(to / from, s) : from + (to - from) * s;
  }
  if (points > 1) v.back() = to;
  return v;
}

const std::vector<std::string>& known_outputs() {
  static const std::vector<std::string> k = {"C",     "nC",      "C_plus",  "C_minus", "alpha_x",
                                             "alpha_y", "alpha_z", "sz",      "lnZ",     "omega",
                                             "lambda", "T_L_plus", "T_L_minus"};
  return k;
}

const std::vector<std::string>& default_outputs() {
  static const std::vector<std::string> d = {"C", "nC", "C_plus", "C_minus"};
  return d;
}

void validate(const SweepSpec& spec) {
  if (spec.grid.points < 2) throw DomainError("a sweep needs at least 2 points");
  if (!std::isfinite(spec.grid.from) || !std::isfinite(spec.grid.to))
    throw DomainError("grid bounds must be finite");
  if (spec.grid.geometric && (spec.grid.from <= 0.0 || spec.grid.to <= 0.0))
    throw DomainError("a geometric grid needs positive bounds");
  if (spec.axis == Axis::temperature && std::min(spec.grid.from, spec.grid.to) < 0.0)
    throw DomainError("temperatures must be >= 0");
  if (spec.axis == Axis::field && spec.T < 0.0) throw DomainError("temperature must be >= 0");
  for (const auto& o : spec.outputs)
    if (std::find(known_outputs().begin(), known_outputs().end(), o) == known_outputs().end())
      throw DomainError("unknown output column: " + o);
  canonicalize(spec.params);
  if (spec.params.n < 2) throw DomainError("pair quantities need n >= 2");
  if (spec.method == Method::oracle && spec.params.n > oracle::kMaxSpins)
    throw DomainError("the dense oracle is limited to n <= 12");
}

Table run_sweep(const SweepSpec& spec) {
  validate(spec);
  const std::vector<double> xs = spec.grid.values();
  Table t;
  t.axis_name = spec.axis == Axis::field ? "b" : "T";
  t.columns = spec.outputs;

  std::optional<ExactSpectrum> shared;
  if (spec.axis == Axis::temperature && spec.method == Method::exact)
    shared = diagonalize(canonicalize(spec.params));

  std::vector<RowOut> raw(xs.size());
  parallel_rows(xs.size(), [&](std::size_t i) {
    const double x = xs[i];
    ModelParams p = spec.params;
    double T = spec.T;
    if (spec.axis == Axis::field)
      p.b = x;
    else
      T = x;
    raw[i] = compute_row(spec, p, T, shared ? &*shared : nullptr);
  });

  for (std::size_t i = 0; i < xs.size(); ++i) {
    ResultRow row;
    row.x = xs[i];
    for (const auto& c : t.columns) {
      auto it = raw[i].values.find(c);
      if (it != raw[i].values.end() && std::isfinite(it->second))
        row.values.push_back(it->second);
      else
        row.values.push_back(std::nullopt);
    }
    row.flags = raw[i].flags;
    t.rows.push_back(std::move(row));
  }

  nlohmann::ordered_json meta;
  meta["params"] = params_json(spec.params);
  meta["method"] = std::string(to_string(spec.method));
  meta["axis"] = std::string(to_string(spec.axis));
  if (spec.axis == Axis::field) meta["T"] = spec.T;
  meta["grid"] = grid_json(spec.grid);
  meta["outputs"] = spec.outputs;
  meta["versions"] = versions_json();
  meta["units"] = kUnits;
  t.metadata_json = meta.dump();
  return t;
}

Table run_phase_map(const ModelParams& params, const Grid& b_grid, Method method) {
  if (method != Method::exact && method != Method::mfrpa_asymptotic)
    throw DomainError("phase maps support the exact and mfrpa_asymptotic methods");
  if (b_grid.points < 2) throw DomainError("a phase map needs at least 2 fields");
  const ModelParams base = canonicalize(params);
  if (base.n < 2) throw DomainError("pair quantities need n >= 2");
  const std::vector<double> bs = b_grid.values();
  const PhaseConstants pc = critical_constants(base);
  Table t;
  t.axis_name = "b";
  t.columns = {"T_L_plus", "T_L_minus", "T_c"};
  std::vector<RowOut> raw(bs.size());
  parallel_rows(bs.size(), [&](std::size_t i) {
    const ModelParams p = base.with_field(bs[i]);
    RowOut& row = raw[i];
    row.values["T_c"] = pc.critical_temperature(bs[i]);
    guarded(row, [&] {
      if (method == Method::exact) {
        const LimitTemperatures tl = limit_temperatures(p);
        if (auto v = tl.tl_plus()) row.values["T_L_plus"] = *v;
        if (auto v = tl.tl_minus()) row.values["T_L_minus"] = *v;
        if (tl.plus.size() + tl.minus.size() > 2) add_flag(row, "reentrant");
      } else {
        const LimitTemperatureRpa tl = limit_temperature_rpa(p);
        if (tl.plus) row.values["T_L_plus"] = *tl.plus;
        if (tl.minus) row.values["T_L_minus"] = *tl.minus;
      }
    });
  });
  for (std::size_t i = 0; i < bs.size(); ++i) {
    ResultRow row;
    row.x = bs[i];
    for (const auto& c : t.columns) {
      auto it = raw[i].values.find(c);
      if (it != raw[i].values.end())
        row.values.push_back(it->second);
      else
        row.values.push_back(std::nullopt);
    }
    row.flags = raw[i].flags;
    t.rows.push_back(std::move(row));
  }
  nlohmann::ordered_json meta;
  meta["params"] = params_json(base);
  meta["method"] = std::string(to_string(method));
  meta["axis"] = "field";
  meta["grid"] = grid_json(b_grid);
  nlohmann::ordered_json ref;
  if (!pc.normal_only) ref["b_c"] = pc.b_c;
  if (auto f = factorizing_field(base)) {
    ref["b_s"] = f->b_s;
    ref["b_s_exact"] = f->b_s_exact;
  }
  meta["reference"] = ref;
  meta["versions"] = versions_json();
  meta["units"] = kUnits;
  t.metadata_json = meta.dump();
  return t;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void emit_csv(const Table& t, std::ostream& os) {
  os << t.axis_name;
  for (const auto& c : t.columns) os << ',' << c;
  os << ",flags\n";
  for (const auto& r : t.rows) {
    os << format_double(r.x);
    for (const auto& v : r.values) {
      os << ',';
      if (v) os << format_double(*v);
    }
    os << ',';
    for (std::size_t i = 0; i < r.flags.size(); ++i) os << (i ? ";" : "") << r.flags[i];
    os << '\n';
  }
}

void emit_json(const Table& t, std::ostream& os) {
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::parse(t.metadata_json.empty() ? "{}" : t.metadata_json);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json row;
    row[t.axis_name] = r.x;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      row[t.columns[i]] = r.values[i] ? nlohmann::ordered_json(*r.values[i]) : nlohmann::ordered_json(nullptr);
    row["flags"] = r.flags;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  os << j.dump(2) << '\n';
}

}  // namespace lmgent
