#include "nestderiv/cli.hpp"

#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nestderiv/bernoulli.hpp"
#include "nestderiv/catalog.hpp"
#include "nestderiv/exact.hpp"
#include "nestderiv/series_io.hpp"

namespace nestderiv::cli {

namespace {

const std::map<std::string, Command> kCommandNames{
    {"exact", Command::exact},     {"rays", Command::rays},           {"asym", Command::asym},
    {"compare", Command::compare}, {"invert", Command::invert},       {"bernoulli", Command::bernoulli},
    {"xlarge-check", Command::xlarge_check}};

void add_output_options(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--format", cfg.format, "csv or json")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, OutputFormat>{{"csv", OutputFormat::csv}, {"json", OutputFormat::json}}));
  sub.add_option("--out", cfg.out, "output path (default stdout)");
  sub.add_flag("--precision-dump", cfg.precision_dump, "emit every working-precision digit");
  sub.add_option("--precision-bits", cfg.precision_bits, "MPFR significand bits (>= 64)")
      ->envname("NESTDERIV_PRECISION_BITS");
}

void add_instance_options(CLI::App& sub, RunConfig& cfg, bool allow_file) {
  auto* fn = sub.add_option("--fn", cfg.fn, "catalog instance");
  if (allow_file) {
    auto* file = sub.add_option("--omega-file", cfg.omega_file, "JSON Taylor series of omega");
    fn->excludes(file);
    file->excludes(fn);
  }
}

void add_ray_options(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--grid-points", cfg.grid_points, "root scan grid size")->check(CLI::Range(16, 1 << 22));
  sub.add_option("--window-lo", cfg.window_lo, "root search window lower end");
  sub.add_option("--window-hi", cfg.window_hi, "root search window upper end");
}

void add_kappa_option(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--kappa", cfg.kappa, "closed, limit or match")
      ->transform(CLI::CheckedTransformer(std::map<std::string, KappaMethod>{
          {"closed", KappaMethod::closed_form}, {"limit", KappaMethod::limit}, {"match", KappaMethod::numeric_match}}));
}

void build_app(CLI::App& app, RunConfig& cfg) {
  app.require_subcommand(1);

  auto* exact = app.add_subcommand("exact", "g_n and nested derivatives at x0");
  add_instance_options(*exact, cfg, true);
  exact->add_option("--x0", cfg.x0, "expansion point");
  exact->add_option("--nmax", cfg.nmax, "largest n")->check(CLI::NonNegativeNumber);
  exact->add_flag("--rational", cfg.rational, "force exact rational arithmetic");
  add_output_options(*exact, cfg);

  auto* rays = app.add_subcommand("rays", "launch points of the rays through (x, n)");
  add_instance_options(*rays, cfg, false);
  rays->add_option("--x", cfg.x, "point")->required();
  rays->add_option("--n", cfg.n, "order")->required()->expected(1);
  add_ray_options(*rays, cfg);
  add_output_options(*rays, cfg);

  auto* asym = app.add_subcommand("asym", "ray approximation of g_n(x)");
  add_instance_options(*asym, cfg, false);
  asym->add_option("--x", cfg.x, "point")->required();
  asym->add_option("--n", cfg.n, "order")->required()->expected(1);
  add_kappa_option(*asym, cfg);
  add_ray_options(*asym, cfg);
  add_output_options(*asym, cfg);

  auto* compare = app.add_subcommand("compare", "exact g_n(x) against the ray approximation");
  add_instance_options(*compare, cfg, false);
  compare->add_option("--x", cfg.x, "point")->required();
  compare->add_option("--nmax", cfg.nmax, "largest n")->check(CLI::PositiveNumber);
  add_kappa_option(*compare, cfg);
  add_ray_options(*compare, cfg);
  add_output_options(*compare, cfg);

  auto* invert = app.add_subcommand("invert", "Taylor coefficients of the inverse of h");
  add_instance_options(*invert, cfg, true);
  invert->add_option("--x0", cfg.x0, "expansion point");
  invert->add_option("--order", cfg.order, "series order")->check(CLI::PositiveNumber);
  invert->add_flag("--rational", cfg.rational, "force exact rational arithmetic");
  add_output_options(*invert, cfg);

  auto* bern = app.add_subcommand("bernoulli", "Bernoulli numbers and their nested-derivative identity");
  bern->add_option("--upto", cfg.upto, "largest index")->check(CLI::Range(0, 100000));
  bern->add_flag("--check-identity", cfg.check_identity, "verify the nested-derivative identity");
  bern->add_flag("--check-asymptotic", cfg.check_asymptotic, "compare with the asymptotic forms");
  add_output_options(*bern, cfg);

  auto* xl = app.add_subcommand("xlarge-check", "g_n(x) against its large-x leading term");
  add_instance_options(*xl, cfg, false);
  xl->add_option("--n", cfg.n, "orders")->delimiter(',');
  xl->add_option("--x-ladder", cfg.x_ladder, "x values")->delimiter(',');
  add_output_options(*xl, cfg);
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

Rational parse_number(const std::optional<std::string>& text, const char* flag) {
  if (!text) throw UsageError(std::string(flag) + " is required");
  return parse_rational(*text);
}

struct Selected {
  InstancePtr inst;
  std::optional<Rational> center;
};

Selected select_instance(const RunConfig& cfg, bool require_rays) {
  if (cfg.fn && cfg.omega_file) throw UsageError("--fn and --omega-file are mutually exclusive");
  if (cfg.omega_file) {
    auto literal = series_from_json(read_json_file(*cfg.omega_file));
    Rational center = std::visit(
        [](const auto& s) {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, RationalSeries>) {
            return s.center();
          } else {
            return to_rational(s.center());
          }
        },
        literal.series);
    return {custom_from_series(std::move(literal.series)), center};
  }
  if (!cfg.fn) throw UsageError("one of --fn or --omega-file is required");
  auto inst = catalog_get(*cfg.fn);
  if (require_rays && !inst->supports_rays()) throw UsageError(inst->name() + " does not support the ray method");
  return {inst, std::nullopt};
}

RootSearchOptions root_options(const RunConfig& cfg) {
  RootSearchOptions opts;
  opts.grid_points = cfg.grid_points;
  if (cfg.window_lo || cfg.window_hi) {
    if (!cfg.window_lo || !cfg.window_hi) throw UsageError("--window-lo and --window-hi must be given together");
    Real lo = to_real(parse_rational(*cfg.window_lo));
    Real hi = to_real(parse_rational(*cfg.window_hi));
    if (!(lo < hi)) throw UsageError("empty root search window");
    opts.window = std::make_pair(lo, hi);
  }
  return opts;
}

Real single_n(const RunConfig& cfg) {
  if (cfg.n.size() != 1) throw UsageError("--n takes exactly one value");
  return to_real(parse_rational(cfg.n.front()));
}

std::string kappa_name(KappaMethod m) {
  switch (m) {
    case KappaMethod::closed_form: return "closed";
    case KappaMethod::limit: return "limit";
    case KappaMethod::numeric_match: return "match";
  }
  return "";
}

std::string serialize(const Table& t, const RunConfig& cfg, const EmitOptions& opts) {
  if (cfg.format == OutputFormat::csv) return t.to_csv(opts);
  return t.to_json(opts).dump(2) + "\n";
}

ArithmeticMode choose_mode(const RunConfig& cfg, const ProblemInstance& inst, const Rational& x0) {
  ArithmeticMode preferred = preferred_mode(inst, x0);
  if (cfg.rational) {
    if (!inst.has_rational_series()) throw UsageError("--rational: " + inst.name() + " has no exact series");
    return ArithmeticMode::rational;
  }
  return preferred;
}

Table run_exact(const RunConfig& cfg) {
  auto sel = select_instance(cfg, false);
  Rational x0 = cfg.x0 ? parse_rational(*cfg.x0) : sel.center ? *sel.center : parse_number(cfg.x0, "--x0");
  Table t({"n", "g", "D"});
  if (choose_mode(cfg, *sel.inst, x0) == ArithmeticMode::rational) {
    auto seq = compute_g_sequence(sel.inst, x0, cfg.nmax);
    auto f0 = sel.inst->f_exact(x0);
    Rational fn(1);
    for (int n = 0; n <= cfg.nmax; ++n) {
      Table::Cell d;
      if (f0) d = fn * seq.g[n];
      t.add_row({static_cast<long long>(n), seq.g[n], d});
      if (f0) fn *= *f0;
    }
  } else {
    Real xr = to_real(x0);
    auto seq = compute_g_sequence(sel.inst, xr, cfg.nmax);
    Real f0 = sel.inst->f(xr);
    Real fn(1);
    for (int n = 0; n <= cfg.nmax; ++n) {
      t.add_row({static_cast<long long>(n), seq.g[n], Real(fn * seq.g[n])});
      fn *= f0;
    }
  }
  return t;
}

Table run_rays(const RunConfig& cfg) {
  auto sel = select_instance(cfg, true);
  Real x = to_real(parse_number(cfg.x, "--x"));
  auto roots = solve_ray_roots(*sel.inst, x, single_n(cfg), root_options(cfg));
  Table t({"branch", "s", "lo", "hi", "residual"});
  for (const auto& r : roots) t.add_row({r.branch_label, r.s, r.lo, r.hi, r.residual});
  return t;
}

Table run_asym(const RunConfig& cfg) {
  auto sel = select_instance(cfg, true);
  Real x = to_real(parse_number(cfg.x, "--x"));
  KappaMethod method = cfg.kappa.value_or(default_kappa_method(*sel.inst));
  auto value = asymptotic_g(*sel.inst, x, single_n(cfg), method, root_options(cfg));
  Table t({"branch", "s", "phi", "F", "G", "J", "p", "q", "kappa_method", "kappa", "asym"});
  for (const auto& ray : value.rays) {
    t.add_row({ray.root.branch_label, ray.root.s, ray.phi, ray.diag.F, ray.diag.G, ray.diag.J, ray.diag.p, ray.diag.q,
               kappa_name(method), value.kappa, value.value});
  }
  return t;
}

template <class T>
void invert_rows(Table& t, const ProblemInstance& inst, const T& x0, int order) {
  T factorial(1);
  for (const auto& c : crosscheck_reversion(inst, x0, order)) {
    factorial *= c.n;
    t.add_row({static_cast<long long>(c.n), c.nested, c.lagrange, c.rel_diff, T(factorial * c.nested)});
  }
}

Table run_invert(const RunConfig& cfg) {
  auto sel = select_instance(cfg, false);
  Rational x0 = cfg.x0 ? parse_rational(*cfg.x0) : sel.center ? *sel.center : parse_number(cfg.x0, "--x0");
  Table t({"n", "coefficient", "lagrange", "rel_diff", "derivative"});
  if (choose_mode(cfg, *sel.inst, x0) == ArithmeticMode::rational) {
    invert_rows(t, *sel.inst, x0, cfg.order);
  } else {
    invert_rows(t, *sel.inst, to_real(x0), cfg.order);
  }
  return t;
}

Table run_bernoulli(const RunConfig& cfg, bool& check_failed) {
  auto table = bernoulli_exact(cfg.upto);
  std::vector<std::string> cols{"index", "exact"};
  if (cfg.check_asymptotic) {
    for (const char* c : {"refined", "leading", "ratio_refined", "ratio_leading", "asymptotic_ok"}) cols.push_back(c);
  }
  if (cfg.check_identity) {
    for (const char* c : {"nested_lhs", "identity_rhs", "identity_ok"}) cols.push_back(c);
  }
  Table t(cols);
  std::optional<Real> prev_refined, prev_leading;
  for (int k = 0; k <= cfg.upto; ++k) {
    std::vector<Table::Cell> row{static_cast<long long>(k), table[k]};
    const bool even = k >= 2 && k % 2 == 0;
    if (cfg.check_asymptotic) {
      if (even) {
        SignedLog exact = SignedLog::from_rational(bmp::abs(table[k]));
        SignedLog refined = bernoulli_asymptotic(k / 2, BernoulliForm::refined);
        SignedLog leading = bernoulli_asymptotic(k / 2, BernoulliForm::leading);
        Real rr = (refined / exact).to_real();
        Real rl = (leading / exact).to_real();
        Real er = bmp::abs(rr - 1), el = bmp::abs(rl - 1);
        // Both forms must approach |B_k| monotonically.
        bool ok = (!prev_refined || er <= *prev_refined) && (!prev_leading || el <= *prev_leading);
        check_failed |= !ok;
        prev_refined = er;
        prev_leading = el;
        for (Table::Cell c : {Table::Cell(refined), Table::Cell(leading), Table::Cell(rr), Table::Cell(rl)}) row.push_back(c);
        row.push_back(ok);
      } else {
        for (int i = 0; i < 5; ++i) row.emplace_back();
      }
    }
    if (cfg.check_identity) {
      if (even) {
        auto id = nested_bernoulli_identity(k / 2 - 1);
        check_failed |= !id.equal;
        row.push_back(id.lhs);
        row.push_back(id.rhs);
        row.push_back(id.equal);
      } else {
        for (int i = 0; i < 3; ++i) row.emplace_back();
      }
    }
    t.add_row(std::move(row));
  }
  return t;
}

Table run_xlarge(const RunConfig& cfg) {
  auto sel = select_instance(cfg, false);
  std::vector<int> ns;
  for (const auto& s : cfg.n.empty() ? std::vector<std::string>{"2", "5"} : cfg.n) {
    Rational q = parse_rational(s);
    if (!is_integer(q) || q < 0 || q > 10000) throw UsageError("--n must be a non-negative integer: " + s);
    ns.push_back(static_cast<int>(numerator(q).convert_to<long>()));
  }
  int nmax = 0;
  for (int n : ns) nmax = std::max(nmax, n);
  Table t({"n", "x", "exact", "leading", "ratio"});
  for (const auto& xs : cfg.x_ladder) {
    Rational x = parse_rational(xs);
    std::vector<Real> g;
    if (sel.inst->has_rational_series()) {
      for (const auto& v : compute_g_sequence(sel.inst, x, nmax).g) g.push_back(to_real(v));
    } else {
      g = compute_g_sequence(sel.inst, to_real(x), nmax).g;
    }
    for (int n : ns) {
      Real lead = large_x_leading(*sel.inst, n, to_real(x));
      t.add_row({static_cast<long long>(n), to_real(x), g[n], lead, Real(g[n] / lead)});
    }
  }
  return t;
}

}  // namespace

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& help_out) {
  RunConfig cfg;
  CLI::App app{"Nested derivatives, inverse-function series and their ray asymptotics", "nestderiv"};
  build_app(app, cfg);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    help_out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    help_out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (const auto& [name, cmd] : kCommandNames) {
    if (app.got_subcommand(name)) cfg.command = cmd;
  }
  if (cfg.precision_bits && *cfg.precision_bits < 64) throw UsageError("--precision-bits must be >= 64");
  return cfg;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::optional<unsigned> bits = cfg.precision_bits;
    if (!bits && cfg.omega_file) bits = peek_precision_bits(read_json_file(*cfg.omega_file));
    set_precision_bits(bits.value_or(kDefaultPrecisionBits));

    EmitOptions emit;
    emit.full_precision = cfg.precision_dump;

    if (cfg.command == Command::compare) {
      auto sel = select_instance(cfg, true);
      auto records = compare_records(*sel.inst, parse_number(cfg.x, "--x"), cfg.nmax, cfg.kappa, root_options(cfg));
      write_artifact(emit_table(records, cfg.format, emit), cfg.out, out);
      return 0;
    }

    bool check_failed = false;
    std::optional<Table> table;
    switch (cfg.command) {
      case Command::exact: table = run_exact(cfg); break;
      case Command::rays: table = run_rays(cfg); break;
      case Command::asym: table = run_asym(cfg); break;
      case Command::invert: table = run_invert(cfg); break;
      case Command::bernoulli: table = run_bernoulli(cfg, check_failed); break;
      case Command::xlarge_check: table = run_xlarge(cfg); break;
      case Command::compare: break;
    }
    write_artifact(serialize(*table, cfg, emit), cfg.out, out);
    if (check_failed) {
      report_error(err, "check", "bernoulli check failed");
      return 1;
    }
    return 0;
  } catch (const UsageError& e) {
    report_error(err, "usage", e.what());
    return 2;
  } catch (const DomainError& e) {
    report_error(err, "domain", e.what());
    return 1;
  } catch (const MathError& e) {
    report_error(err, "math", e.what());
    return 1;
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return 1;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_args(argc, argv, out);
  } catch (const UsageError& e) {
    report_error(err, "usage", e.what());
    return 2;
  }
  if (!cfg) return 0;
  return run_command(*cfg, out, err);
}

}  // namespace nestderiv::cli
