#include "csturm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "csturm/error.hpp"
#include "csturm/fd_oracle.hpp"
#include "csturm/serialize.hpp"

namespace csturm::cli {

namespace {

std::string trim(std::string s) {
  auto sp = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), sp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), sp).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

// Constant expression, or ±inf.
cd parse_constant(const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return kInf;
  if (t == "-inf") return -kInf;
  try {
    Expr e = Expr::parse(t);
    if (e.depends_on_x()) throw UsageError("constant expected, got '" + t + "'");
    return e.eval(0.0);
  } catch (const ParseError& e) {
    throw UsageError("cannot read '" + t + "': " + e.what());
  }
}

double parse_real(const std::string& text) {
  cd z = parse_constant(text);
  if (z.imag() != 0.0) throw UsageError("real value expected, got '" + text + "'");
  return z.real();
}

// "re,im" or a constant expression such as "2+i".
cd parse_complex(const std::string& text) {
  auto parts = split(text, ',');
  if (parts.size() == 2) return {parse_real(parts[0]), parse_real(parts[1])};
  if (parts.size() == 1) return parse_constant(parts[0]);
  throw UsageError("complex value expected as re,im: '" + text + "'");
}

std::vector<double> parse_reals(const std::string& text, std::size_t n, const char* what) {
  auto parts = split(text, ',');
  if (parts.size() != n) throw UsageError(std::string(what) + " needs " + std::to_string(n) + " comma-separated values");
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(parse_real(p));
  return out;
}

Interval parse_interval(const std::string& text) {
  auto v = parse_reals(text, 2, "--interval");
  if (!(v[0] < v[1])) throw UsageError("--interval needs a < b");
  return Interval(v[0], v[1]);
}

// d, n, r:re,im/re,im (or r:a0/a1), max
std::optional<BoundaryFunctional> parse_bc(const std::string& text, Endpoint e) {
  const std::string t = trim(text);
  if (t == "d") return BoundaryFunctional::regular(e, 0.0, 1.0);
  if (t == "n") return BoundaryFunctional::regular(e, 1.0, 0.0);
  if (t == "max") return std::nullopt;
  if (t.rfind("r:", 0) == 0) {
    auto parts = split(t.substr(2), '/');
    if (parts.size() != 2) throw UsageError("general boundary vector is r:re,im/re,im");
    cd a0 = parse_complex(parts[0]), a1 = parse_complex(parts[1]);
    if (a0 == 0.0 && a1 == 0.0) throw UsageError("boundary vector must be nonzero");
    return BoundaryFunctional::regular(e, a0, a1);
  }
  throw UsageError("unknown boundary condition '" + t + "' (d, n, r:re,im/re,im, max)");
}

std::string csv_number(double v) { return std::isfinite(v) ? format_double(v) : (v > 0 ? "inf" : (v < 0 ? "-inf" : "nan")); }

class Output {
public:
  explicit Output(std::ostream& fallback) : fallback_(fallback) {}
  std::ostream& open(const std::string& path) {
    if (path.empty() || path == "-") return fallback_;
    files_.emplace_back(std::make_unique<std::ofstream>(path));
    if (!*files_.back()) throw UsageError("cannot open output file " + path);
    return *files_.back();
  }

private:
  std::ostream& fallback_;
  std::vector<std::unique_ptr<std::ofstream>> files_;
};

struct Common {
  std::string potential = "0";
  std::string interval = "0,1";
  std::string out;
  std::uint64_t seed = 0;
};

struct Bcs {
  std::string a = "d", b = "d";
  std::string cutoff_a, cutoff_b;
};

void add_common(CLI::App* sc, Common& c) {
  sc->add_option("--potential", c.potential, "potential V(x) in x, e.g. \"x^2 - i*x\"");
  sc->add_option("--interval", c.interval, "endpoints a,b (inf allowed)");
  sc->add_option("--out", c.out, "output path (default stdout)");
  sc->add_option("--seed", c.seed, "seed for random probes");
}

void add_bcs(CLI::App* sc, Bcs& b) {
  sc->add_option("--bc-a", b.a, "condition at a: d, n, r:re,im/re,im, max");
  sc->add_option("--bc-b", b.b, "condition at b: d, n, r:re,im/re,im, max");
  sc->add_option("--cutoff-a", b.cutoff_a, "truncation point for an end without condition");
  sc->add_option("--cutoff-b", b.cutoff_b, "truncation point for an end without condition");
}

Potential make_potential(const Common& c) {
  try {
    return probed(parse_potential(c.potential, parse_interval(c.interval)));
  } catch (const ParseError& e) {
    throw UsageError(std::string("malformed potential: ") + e.what());
  }
}

BoundarySpec make_spec(const Bcs& b) { return {parse_bc(b.a, Endpoint::a), parse_bc(b.b, Endpoint::b)}; }

Realization make_realization(const Potential& p, const Bcs& b) {
  RealizationOptions o;
  if (!b.cutoff_a.empty()) o.cutoff_a = parse_real(b.cutoff_a);
  if (!b.cutoff_b.empty()) o.cutoff_b = parse_real(b.cutoff_b);
  return Realization(p, make_spec(b), o);
}

void emit(std::ostream& os, const Json& j) { os << j.dump(2) << "\n"; }

// Finite window of the interval: infinite ends are replaced by anchor ± 10.
Span default_span(const Interval& iv) {
  const double c = default_anchor(iv);
  return {iv.a_finite() ? iv.a : c - 10.0, iv.b_finite() ? iv.b : c + 10.0};
}

// Converts a JSON config object into flags; explicit flags win.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  Json cfg;
  try {
    cfg = Json::parse(in);
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed config: ") + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config must be a JSON object");
  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  if (args.empty() || args[0].rfind("-", 0) == 0) {
    if (!cfg.contains("command")) throw UsageError("config needs \"command\" when no subcommand is given");
    args.insert(args.begin(), cfg["command"].get<std::string>());
  }
  auto text = [](const Json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    throw UsageError("unsupported config value " + v.dump());
  };
  for (const auto& [key, val] : cfg.items()) {
    if (key == "command") continue;
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (given.count(flag)) continue;
    if (val.is_boolean()) {
      if (val.get<bool>()) args.push_back("--" + flag);
      continue;
    }
    std::string s;
    if (val.is_array()) {
      for (std::size_t i = 0; i < val.size(); ++i) s += (i ? "," : "") + text(val[i]);
    } else if (val.is_object() && key == "interval") {
      s = text(val.at("a")) + "," + text(val.at("b"));
    } else {
      s = text(val);
    }
    args.push_back("--" + flag + "=" + s);
  }
  return args;
}

int classify_cmd(const Common& c, const std::string& lambda, bool second, std::ostream& os) {
  Potential p = make_potential(c);
  ClassificationReport r = classify(p, parse_complex(lambda));
  Json j{{"command", "classify"}, {"potential", to_json(p)}};
  const Json body = to_json(r);
  for (auto& [k, v] : body.items()) j[k] = v;
  if (second) {
    j["nu_a_checked"] = boundary_index(p, Endpoint::a, true);
    j["nu_b_checked"] = boundary_index(p, Endpoint::b, true);
  }
  emit(os, j);
  return 0;
}

struct SolveArgs {
  std::string lambda = "0", x0, f0 = "1", f1 = "0", rhs, span, report;
  int samples = 101;
};

int solve_cmd(const Common& c, const SolveArgs& a, Output& files) {
  Potential p = make_potential(c);
  const Interval& iv = p.interval();
  Span span = a.span.empty() ? default_span(iv) : [&] {
    auto v = parse_reals(a.span, 2, "--span");
    return Span{v[0], v[1]};
  }();
  if (!(span.lo < span.hi) || span.lo < iv.a || span.hi > iv.b) throw UsageError("--span must lie inside the interval");
  const double x0 = a.x0.empty() ? std::clamp(default_anchor(iv), span.lo, span.hi) : parse_real(a.x0);
  if (a.samples < 2) throw UsageError("--samples must be at least 2");
  Rhs g;
  std::vector<double> breaks;
  if (!a.rhs.empty()) {
    auto e = std::make_shared<Expr>(Expr::parse(a.rhs));
    g = [e](double x) { return e->eval(x); };
    breaks = e->breakpoints();
  }
  const cd lambda = parse_complex(a.lambda);
  auto f = solve_ivp(p, lambda, x0, parse_complex(a.f0), parse_complex(a.f1), g, span, {}, breaks);
  std::ostream& os = files.open(c.out);
  os << "x,re_f,im_f,re_df,im_df\n";
  for (int k = 0; k < a.samples; ++k) {
    double x = f.lo() + (f.hi() - f.lo()) * k / (a.samples - 1);
    State<2> y = f.eval(x);
    os << csv_number(x) << ',' << csv_number(y[0].real()) << ',' << csv_number(y[0].imag()) << ','
       << csv_number(y[1].real()) << ',' << csv_number(y[1].imag()) << '\n';
  }
  if (!a.report.empty()) {
    emit(files.open(a.report), Json{{"command", "solve"},
                                    {"potential", to_json(p)},
                                    {"lambda", complex_json(lambda)},
                                    {"x0", number(x0)},
                                    {"lo", number(f.lo())},
                                    {"hi", number(f.hi())},
                                    {"status", to_string(f.status())},
                                    {"truncated", f.truncated()}});
  }
  return 0;
}

struct GreensArgs {
  std::string kind = "two_sided", lambda = "0", u, v, x0, d, span, report;
  int grid = 21;
  bool realization = false;
};

std::array<cd, 2> parse_pair(const std::string& text) {
  auto parts = split(text, '/');
  if (parts.size() != 2) throw UsageError("initial data is f0/f1 with complex entries re,im");
  return {parse_complex(parts[0]), parse_complex(parts[1])};
}

int greens_cmd(const Common& c, const Bcs& b, const GreensArgs& a, Output& files) {
  Potential p = make_potential(c);
  const Interval& iv = p.interval();
  const cd lambda = parse_complex(a.lambda);
  std::optional<GreensKernel> k;
  if (a.realization) {
    if (a.kind != "two_sided") throw UsageError("--from-bcs builds the two_sided resolvent kernel only");
    k = resolvent_kernel(make_realization(p, b), lambda);
  } else {
    Span span = a.span.empty() ? default_span(iv) : [&] {
      auto v = parse_reals(a.span, 2, "--span");
      return Span{v[0], v[1]};
    }();
    const double x0 = a.x0.empty() ? std::clamp(default_anchor(iv), span.lo, span.hi) : parse_real(a.x0);
    auto ud = parse_pair(a.u.empty() ? "0/1" : a.u), vd = parse_pair(a.v.empty() ? "1/0" : a.v);
    auto u = solve_ivp(p, lambda, x0, ud[0], ud[1], {}, span);
    auto v = solve_ivp(p, lambda, x0, vd[0], vd[1], {}, span);
    std::optional<double> d;
    if (!a.d.empty()) d = parse_real(a.d);
    k = build_kernel(kernel_kind_from_string(a.kind), u, v, d);
  }
  if (a.grid < 2) throw UsageError("--grid must be at least 2");
  const double lo = k->lo(), hi = k->hi();
  std::ostream& os = files.open(c.out);
  os << "x,y,re_G,im_G\n";
  auto node = [&](int i) { return lo + (hi - lo) * (i + 0.5) / a.grid; };
  for (int i = 0; i < a.grid; ++i) {
    for (int j = 0; j < a.grid; ++j) {
      cd gv = (*k)(node(i), node(j));
      os << csv_number(node(i)) << ',' << csv_number(node(j)) << ',' << csv_number(gv.real()) << ','
         << csv_number(gv.imag()) << '\n';
    }
  }
  if (!a.report.empty()) {
    Json jumps = Json::array();
    for (int q = 1; q <= 5; ++q) {
      double x = lo + (hi - lo) * q / 6.0;
      auto jd = jump_diagnostics(*k, x);
      jumps.push_back({{"x", number(x)},
                       {"value_jump", complex_json(jd.value_jump)},
                       {"derivative_jump", complex_json(jd.derivative_jump)}});
    }
    emit(files.open(a.report), Json{{"command", "greens"},
                                    {"potential", to_json(p)},
                                    {"kind", to_string(k->kind())},
                                    {"lambda", complex_json(lambda)},
                                    {"normalization", complex_json(k->normalization())},
                                    {"lo", number(lo)},
                                    {"hi", number(hi)},
                                    {"jumps", jumps}});
  }
  return 0;
}

struct SpectrumArgs {
  std::string region = "0,10,-1,1";
  std::size_t max_roots = 64, max_evals = 40000, oracle_n = 0;
};

int spectrum_cmd(const Common& c, const Bcs& b, const SpectrumArgs& a, std::ostream& os) {
  Potential p = make_potential(c);
  Realization r = make_realization(p, b);
  auto g = parse_reals(a.region, 4, "--region");
  if (!(g[1] > g[0]) || !(g[3] > g[2])) throw UsageError("--region must be a non-degenerate rectangle re0,re1,im0,im1");
  FindOptions fo;
  fo.max_roots = a.max_roots;
  fo.max_evals = a.max_evals;
  FindResult fr = find_eigenvalues(r, {g[0], g[1], g[2], g[3]}, fo);
  Json j{{"command", "spectrum"},
         {"potential", to_json(p)},
         {"bc_a", b.a},
         {"bc_b", b.b},
         {"region", {number(g[0]), number(g[1]), number(g[2]), number(g[3])}}};
  const Json body = to_json(fr);
  for (auto& [k, v] : body.items()) j[k] = v;
  if (a.oracle_n > 0) {
    FDMatrix m = fd_oracle_build(r, a.oracle_n);
    Json near = Json::array();
    for (const auto& e : fr.roots) near.push_back(complex_json(fd_refine(m, e.lambda)));
    j["oracle"] = {{"n", a.oracle_n}, {"proxy_a", m.proxy_a}, {"proxy_b", m.proxy_b}, {"nearest", near}};
  }
  emit(os, j);
  return 0;
}

struct WeylArgs {
  std::string lambda = "0,1", trace;
  int max_trace = 80;
};

int weyl_cmd(const Common& c, const WeylArgs& a, Output& files) {
  Potential p = make_potential(c);
  TrichotomyOptions o;
  o.max_trace = a.max_trace;
  const cd lambda = parse_complex(a.lambda);
  TrichotomyReport r = trichotomy(p, lambda, o);
  if (!a.trace.empty()) {
    std::ostream& ts = files.open(a.trace);
    ts << "d,re_c,im_c,r\n";
    for (const auto& d : r.trace) {
      ts << csv_number(d.d) << ',' << csv_number(d.center.real()) << ',' << csv_number(d.center.imag()) << ','
         << csv_number(d.radius) << '\n';
    }
  }
  Json j{{"command", "weyl"}, {"potential", to_json(p)}, {"lambda", complex_json(lambda)}};
  const Json body = to_json(r);
  for (auto& [k, v] : body.items()) j[k] = v;
  emit(files.open(c.out), j);
  return 0;
}

int dissipativity_cmd(const Common& c, const Bcs& b, std::size_t probes, std::ostream& os) {
  Potential p = make_potential(c);
  auto r = dissipativity_certificate(p, make_spec(b), c.seed, probes);
  Json j{{"command", "dissipativity"}, {"potential", to_json(p)}, {"bc_a", b.a}, {"bc_b", b.b}};
  const Json body = to_json(r);
  for (auto& [k, v] : body.items()) j[k] = v;
  emit(os, j);
  return 0;
}

struct OracleArgs {
  std::size_t n = 200, count = 6, samples = 200;
  bool richardson = false;
};

int oracle_cmd(const Common& c, const Bcs& b, const OracleArgs& a, std::ostream& os) {
  Potential p = make_potential(c);
  Realization r = make_realization(p, b);
  FDMatrix m = fd_oracle_build(r, a.n);
  auto ev = fd_eigenvalues(m);
  Json evs = Json::array();
  for (std::size_t i = 0; i < std::min(a.count, ev.size()); ++i) evs.push_back(complex_json(ev[i]));
  auto nr = fd_numerical_range(m, a.samples, c.seed);
  double max_im = -kInf, min_im = kInf;
  for (cd z : nr) {
    max_im = std::max(max_im, z.imag());
    min_im = std::min(min_im, z.imag());
  }
  Json j{{"command", "oracle"},
         {"potential", to_json(p)},
         {"bc_a", b.a},
         {"bc_b", b.b},
         {"n", a.n},
         {"h", number(m.h)},
         {"window", {number(m.lo), number(m.hi)}},
         {"proxy_a", m.proxy_a},
         {"proxy_b", m.proxy_b},
         {"eigenvalues", evs},
         {"numerical_range", {{"samples", nr.size()}, {"max_im", number(max_im)}, {"min_im", number(min_im)}}}};
  if (a.richardson) {
    auto rr = fd_richardson(r, std::min<std::size_t>(a.count, 3));
    Json ex = Json::array();
    for (cd z : rr.extrapolated) ex.push_back(complex_json(z));
    j["richardson"] = {{"ns", rr.ns}, {"extrapolated", ex}};
  }
  emit(os, j);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral toolkit for Sturm-Liouville operators with complex potentials", "csturm"};
  app.require_subcommand(1);
  Common common;
  Bcs bcs;

  auto* classify_sc = app.add_subcommand("classify", "endpoint classes, dim U(λ) and boundary indices");
  add_common(classify_sc, common);
  std::string classify_lambda = "0,1";
  bool second = false;
  classify_sc->add_option("--lambda", classify_lambda, "spectral parameter re,im");
  classify_sc->add_flag("--check-second-lambda", second, "require agreement at λ = 1+i");

  auto* solve_sc = app.add_subcommand("solve", "initial value problem (L - λ) f = g, CSV output");
  add_common(solve_sc, common);
  SolveArgs sa;
  solve_sc->add_option("--lambda", sa.lambda);
  solve_sc->add_option("--x0", sa.x0, "initial point (default anchor)");
  solve_sc->add_option("--f0", sa.f0, "f(x0) as re,im");
  solve_sc->add_option("--f1", sa.f1, "f'(x0) as re,im");
  solve_sc->add_option("--rhs", sa.rhs, "inhomogeneity g(x)");
  solve_sc->add_option("--span", sa.span, "lo,hi");
  solve_sc->add_option("--samples", sa.samples);
  solve_sc->add_option("--report", sa.report, "JSON report path");

  auto* greens_sc = app.add_subcommand("greens", "Green's kernels, CSV grid output");
  add_common(greens_sc, common);
  add_bcs(greens_sc, bcs);
  GreensArgs ga;
  greens_sc->add_option("--kind", ga.kind, "two_sided, forward, backward, at_d, bisolution");
  greens_sc->add_option("--lambda", ga.lambda);
  greens_sc->add_option("--u", ga.u, "u data at x0 as f0/f1");
  greens_sc->add_option("--v", ga.v, "v data at x0 as f0/f1");
  greens_sc->add_option("--x0", ga.x0);
  greens_sc->add_option("--d", ga.d, "base point for at_d");
  greens_sc->add_option("--span", ga.span, "lo,hi");
  greens_sc->add_option("--grid", ga.grid);
  greens_sc->add_option("--report", ga.report, "JSON report path");
  greens_sc->add_flag("--from-bcs", ga.realization, "resolvent kernel of the realization given by --bc-a/--bc-b");

  auto* spectrum_sc = app.add_subcommand("spectrum", "eigenvalues in a rectangle");
  add_common(spectrum_sc, common);
  add_bcs(spectrum_sc, bcs);
  SpectrumArgs spa;
  spectrum_sc->add_option("--region", spa.region, "re0,re1,im0,im1");
  spectrum_sc->add_option("--max-roots", spa.max_roots);
  spectrum_sc->add_option("--max-evals", spa.max_evals);
  spectrum_sc->add_option("--oracle-n", spa.oracle_n, "also refine each root on an FD grid of this size");

  auto* weyl_sc = app.add_subcommand("weyl", "Weyl disk trace and trichotomy");
  add_common(weyl_sc, common);
  WeylArgs wa;
  weyl_sc->add_option("--lambda", wa.lambda);
  weyl_sc->add_option("--trace", wa.trace, "CSV path for d,re_c,im_c,r");
  weyl_sc->add_option("--max-trace", wa.max_trace);

  auto* diss_sc = app.add_subcommand("dissipativity", "maximal-dissipativity certificate");
  add_common(diss_sc, common);
  add_bcs(diss_sc, bcs);
  std::size_t probes = 1000;
  diss_sc->add_option("--probes", probes);

  auto* oracle_sc = app.add_subcommand("oracle", "finite-difference oracle");
  add_common(oracle_sc, common);
  add_bcs(oracle_sc, bcs);
  OracleArgs oa;
  oracle_sc->add_option("--n", oa.n, "grid intervals");
  oracle_sc->add_option("--count", oa.count);
  oracle_sc->add_option("--samples", oa.samples, "numerical-range samples");
  oracle_sc->add_flag("--richardson", oa.richardson, "extrapolate over n = 200, 400, 800");

  try {
    std::vector<std::string> args = merge_config(raw);
    if (args.empty()) {
      err << app.help();
      return 1;
    }
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
      app.parse(rev);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n";
      if (!app.get_subcommands().empty()) err << app.get_subcommands().front()->help();
      else err << app.help();
      return 1;
    }
    Output files(out);
    if (*solve_sc) return solve_cmd(common, sa, files);
    if (*greens_sc) return greens_cmd(common, bcs, ga, files);
    if (*weyl_sc) return weyl_cmd(common, wa, files);
    std::ostream& os = files.open(common.out);
    if (*classify_sc) return classify_cmd(common, classify_lambda, second, os);
    if (*spectrum_sc) return spectrum_cmd(common, bcs, spa, os);
    if (*diss_sc) return dissipativity_cmd(common, bcs, probes, os);
    if (*oracle_sc) return oracle_cmd(common, bcs, oa, os);
    err << app.help();
    return 1;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const IndeterminateError& e) {
    err << "indeterminate: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace csturm::cli
