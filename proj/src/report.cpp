#include "nestderiv/report.hpp"

#include <cfloat>
#include <fstream>
#include <sstream>

#include "nestderiv/exact.hpp"

namespace nestderiv {

namespace {

int full_digits() { return static_cast<int>(bmp::detail::digits2_2_10(precision_bits())) + 1; }

int digits_for(const EmitOptions& opts) { return opts.full_precision ? full_digits() : opts.digits; }

bool fits_double(const Real& v) {
  if (v == 0) return true;
  Real a = bmp::abs(v);
  return bmp::isfinite(v) && a < Real(DBL_MAX) && a > Real(DBL_MIN);
}

nlohmann::json real_json(const Real& v, const EmitOptions& opts) {
  if (opts.full_precision || !fits_double(v)) return format_real(v, digits_for(opts));
  double d = v.convert_to<double>();
  return d == 0 ? 0.0 : d;
}

Real real_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Real(j.get<std::string>());
  return Real(j.get<double>());
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <class Range, class Fn>
std::string join(const Range& items, Fn&& fn) {
  std::string out;
  bool first = true;
  for (const auto& item : items) {
    if (!first) out += ';';
    out += fn(item);
    first = false;
  }
  return out;
}

}  // namespace

nlohmann::json signed_log_json(const SignedLog& v, const EmitOptions& opts) {
  nlohmann::json j;
  j["sign"] = v.sign();
  j["log10_mag"] = v.is_zero() ? nlohmann::json(0.0) : real_json(v.log10_mag(), opts);
  if (v.is_zero()) {
    j["value"] = 0;
  } else if (v.fits_double()) {
    j["value"] = real_json(v.to_real(), opts);
  }
  return j;
}

SignedLog signed_log_from_json(const nlohmann::json& j) {
  int sign = j.at("sign").get<int>();
  if (sign == 0) return {};
  return SignedLog(sign, real_from_json(j.at("log10_mag")) * bmp::log(Real(10)));
}

std::vector<ComparisonRecord> compare_records(const ProblemInstance& inst, const Rational& x, int nmax,
                                              std::optional<KappaMethod> kappa, const RootSearchOptions& opts) {
  if (nmax < 1) throw UsageError("nmax must be >= 1");
  InstancePtr borrowed(std::shared_ptr<void>(), &inst);
  std::vector<SignedLog> exact;
  if (inst.has_rational_series()) {
    for (const auto& g : compute_g_sequence(borrowed, x, nmax).g) exact.push_back(SignedLog::from_rational(g));
  } else {
    for (const auto& g : compute_g_sequence(borrowed, to_real(x), nmax).g) exact.push_back(SignedLog::from_real(g));
  }
  const Real xr = to_real(x);
  std::vector<ComparisonRecord> out;
  for (int n = 1; n <= nmax; ++n) {
    auto asym = asymptotic_g(inst, xr, Real(n), kappa, opts);
    ComparisonRecord rec;
    rec.n = n;
    rec.exact = exact[n];
    rec.asym = asym.value;
    rec.rel_err = relative_error(asym.value, exact[n]);
    for (auto& ray : asym.rays) {
      rec.roots.push_back(ray.root);
      rec.diags.push_back(ray.diag);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::string comparison_csv(const std::vector<ComparisonRecord>& records, const EmitOptions& opts) {
  const int digits = digits_for(opts);
  std::ostringstream os;
  os << "n,exact,asym,rel_err,roots,F,G,J\n";
  auto real = [&](const Real& v) { return format_real(v, digits); };
  for (const auto& r : records) {
    os << r.n << ',' << format_signed_log(r.exact, digits) << ',' << format_signed_log(r.asym, digits) << ','
       << real(r.rel_err) << ',' << join(r.roots, [&](const RayRoot& root) { return real(root.s); }) << ','
       << join(r.diags, [&](const RayDiagnostics& d) { return real(d.F); }) << ','
       << join(r.diags, [&](const RayDiagnostics& d) { return real(d.G); }) << ','
       << join(r.diags, [&](const RayDiagnostics& d) { return real(d.J); }) << '\n';
  }
  return os.str();
}

nlohmann::json comparison_json(const std::vector<ComparisonRecord>& records, const EmitOptions& opts) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j;
    j["n"] = r.n;
    j["exact"] = signed_log_json(r.exact, opts);
    j["asym"] = signed_log_json(r.asym, opts);
    j["rel_err"] = real_json(r.rel_err, opts);
    j["roots"] = nlohmann::json::array();
    for (const auto& root : r.roots) {
      j["roots"].push_back({{"s", real_json(root.s, opts)},
                            {"lo", real_json(root.lo, opts)},
                            {"hi", real_json(root.hi, opts)},
                            {"residual", real_json(root.residual, opts)},
                            {"branch_label", root.branch_label}});
    }
    j["diags"] = nlohmann::json::array();
    for (const auto& d : r.diags) {
      j["diags"].push_back({{"F", real_json(d.F, opts)},
                            {"G", real_json(d.G, opts)},
                            {"J", real_json(d.J, opts)},
                            {"p", real_json(d.p, opts)},
                            {"q", real_json(d.q, opts)},
                            {"ratio_sign", d.ratio_sign}});
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<ComparisonRecord> comparison_from_json(const nlohmann::json& j) {
  std::vector<ComparisonRecord> out;
  for (const auto& item : j) {
    ComparisonRecord r;
    r.n = item.at("n").get<int>();
    r.exact = signed_log_from_json(item.at("exact"));
    r.asym = signed_log_from_json(item.at("asym"));
    r.rel_err = real_from_json(item.at("rel_err"));
    for (const auto& root : item.at("roots")) {
      r.roots.push_back({real_from_json(root.at("s")), real_from_json(root.at("lo")), real_from_json(root.at("hi")),
                         real_from_json(root.at("residual")), root.at("branch_label").get<std::string>()});
    }
    for (const auto& d : item.at("diags")) {
      r.diags.push_back({real_from_json(d.at("F")), real_from_json(d.at("G")), real_from_json(d.at("J")),
                         real_from_json(d.at("p")), real_from_json(d.at("q")), d.at("ratio_sign").get<int>()});
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string emit_table(const std::vector<ComparisonRecord>& records, OutputFormat format, const EmitOptions& opts) {
  if (format == OutputFormat::csv) return comparison_csv(records, opts);
  return comparison_json(records, opts).dump(2) + "\n";
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw std::logic_error("table row width mismatch");
  rows_.push_back(std::move(row));
}

std::string Table::to_csv(const EmitOptions& opts) const {
  const int digits = digits_for(opts);
  std::ostringstream os;
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_escape(columns_[i]);
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) {
            } else if constexpr (std::is_same_v<V, long long>) {
              os << v;
            } else if constexpr (std::is_same_v<V, bool>) {
              os << (v ? "true" : "false");
            } else if constexpr (std::is_same_v<V, std::string>) {
              os << csv_escape(v);
            } else if constexpr (std::is_same_v<V, Real>) {
              os << format_real(v, digits);
            } else if constexpr (std::is_same_v<V, Rational>) {
              os << format_rational(v);
            } else {
              os << format_signed_log(v, digits);
            }
          },
          row[i]);
    }
    os << '\n';
  }
  return os.str();
}

nlohmann::json Table::to_json(const EmitOptions& opts) const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[columns_[i]] = std::visit(
          [&](const auto& v) -> nlohmann::json {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) {
              return nullptr;
            } else if constexpr (std::is_same_v<V, long long> || std::is_same_v<V, bool> ||
                                 std::is_same_v<V, std::string>) {
              return v;
            } else if constexpr (std::is_same_v<V, Real>) {
              return real_json(v, opts);
            } else if constexpr (std::is_same_v<V, Rational>) {
              return format_rational(v);
            } else {
              return signed_log_json(v, opts);
            }
          },
          row[i]);
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

void write_artifact(const std::string& text, const std::optional<std::filesystem::path>& path, std::ostream& fallback) {
  if (!path || path->empty() || *path == "-") {
    fallback << text;
    fallback.flush();
    return;
  }
  std::ofstream out(*path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write '" + path->string() + "'");
  out << text;
  if (!out) throw UsageError("cannot write '" + path->string() + "'");
}

}  // namespace nestderiv
