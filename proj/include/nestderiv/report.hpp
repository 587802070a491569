#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "nestderiv/catalog.hpp"
#include "nestderiv/rays.hpp"
#include "nestderiv/signed_log.hpp"

namespace nestderiv {

enum class OutputFormat { csv, json };

/// Exact g_n(x) against the ray approximation at one n.
struct ComparisonRecord {
  int n = 0;
  SignedLog exact;
  SignedLog asym;
  Real rel_err;  // |asym/exact - 1|, or |asym| when exact is zero
  std::vector<RayRoot> roots;
  std::vector<RayDiagnostics> diags;
};

/// Rows n = 1..nmax at x. The exact column uses rational arithmetic when omega has an
/// exact series at x, floating otherwise.
std::vector<ComparisonRecord> compare_records(const ProblemInstance& inst, const Rational& x, int nmax,
                                              std::optional<KappaMethod> kappa = std::nullopt,
                                              const RootSearchOptions& opts = {});

struct EmitOptions {
  /// Significant digits for CSV reals; JSON numbers are shortest round-trip doubles.
  int digits = 20;
  /// Render reals with every working-precision digit (strings in JSON).
  bool full_precision = false;
};

std::string comparison_csv(const std::vector<ComparisonRecord>& records, const EmitOptions& opts = {});
nlohmann::json comparison_json(const std::vector<ComparisonRecord>& records, const EmitOptions& opts = {});
/// Inverse of comparison_json at the serialized precision.
std::vector<ComparisonRecord> comparison_from_json(const nlohmann::json& j);

nlohmann::json signed_log_json(const SignedLog& v, const EmitOptions& opts = {});
SignedLog signed_log_from_json(const nlohmann::json& j);

/// A rectangular result table with typed cells.
class Table {
 public:
  using Cell = std::variant<std::monostate, long long, bool, std::string, Real, Rational, SignedLog>;

  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t size() const { return rows_.size(); }

  std::string to_csv(const EmitOptions& opts = {}) const;
  nlohmann::json to_json(const EmitOptions& opts = {}) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Writes `text` to `path`, or to `fallback` when path is empty or "-". Unwritable path -> UsageError.
void write_artifact(const std::string& text, const std::optional<std::filesystem::path>& path, std::ostream& fallback);

/// Serialized CSV or JSON for comparison records, as emitted by the compare command.
std::string emit_table(const std::vector<ComparisonRecord>& records, OutputFormat format, const EmitOptions& opts = {});

}  // namespace nestderiv
