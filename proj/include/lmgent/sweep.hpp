#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lmgent/params.hpp"

namespace lmgent {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Method { exact, oracle, mfrpa_full, mfrpa_asymptotic, cspa };
std::optional<Method> parse_method(std::string_view s);
std::string_view to_string(Method m);

enum class Axis { field, temperature };
std::optional<Axis> parse_axis(std::string_view s);
std::string_view to_string(Axis a);

struct Grid {
  double from = 0.0;
  double to = 1.0;
  int points = 2;
  bool geometric = false;
  [[nodiscard]] std::vector<double> values() const;
};

/// Every output column a sweep can produce.
const std::vector<std::string>& known_outputs();
const std::vector<std::string>& default_outputs();

struct SweepSpec {
  Method method = Method::exact;
  ModelParams params;
  double T = 0.0;  ///< fixed temperature for field sweeps
  Axis axis = Axis::field;
  Grid grid;
  std::vector<std::string> outputs = default_outputs();
};

/// Throws DomainError on an invalid spec (bad grid, unknown output, oracle with n > 12, ...).
void validate(const SweepSpec& spec);

struct ResultRow {
  double x = 0.0;
  std::vector<std::optional<double>> values;  ///< aligned with Table::columns
  std::vector<std::string> flags;
};

struct Table {
  std::string axis_name;
  std::vector<std::string> columns;
  std::vector<ResultRow> rows;
  std::string metadata_json;  ///< JSON object text
};

/// Rows in grid order; per-row failures become flags.
Table run_sweep(const SweepSpec& spec);

/// Limit temperatures T_L^+- on a field grid for method exact or mfrpa_asymptotic,
/// with T_c(b) as a reference column.
Table run_phase_map(const ModelParams& p, const Grid& b_grid, Method method);

/// Shortest round-trip decimal form.
std::string format_double(double x);

void emit_csv(const Table& t, std::ostream& os);
void emit_json(const Table& t, std::ostream& os);

}  // namespace lmgent
