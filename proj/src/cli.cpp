#include "icore/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "icore/cluster.hpp"
#include "icore/core.hpp"
#include "icore/corpus.hpp"
#include "icore/error.hpp"
#include "icore/scalar_limits.hpp"
#include "icore/sequence.hpp"
#include "icore/transforms.hpp"
#include "icore/verify.hpp"

namespace icore::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr std::size_t kDefaultN = 10000;
constexpr std::size_t kDefaultM = 256;
constexpr std::size_t kMinScale = 16;

struct Config {
  std::string command;
  std::string seq;
  std::string ideal;
  std::optional<std::size_t> n, m;
  std::size_t dim = 1;
  bool dual = false;
  double delta = kDefaultDelta;
  double eps_final = kDefaultEpsFinal;
  std::optional<double> tol, tol_equiv;
  std::size_t directions = 0;
  std::size_t centers = 0;
  std::size_t rounds = kDefaultRounds;
  std::string method = "support";
  std::optional<double> bound;
  bool no_bound_check = false;
  std::optional<double> box;
  double r = 0.5;
  std::string mode = "pringsheim";
  std::string item = "all";
  std::string format = "json";
  std::string out;
  bool serial = false;

  double default_tol() const { return 3.0 * std::max(delta, eps_final); }
  double effective_tol() const { return tol ? *tol : default_tol(); }
  double effective_tol_equiv() const { return tol_equiv ? *tol_equiv : default_tol(); }
  std::optional<double> effective_bound() const {
    if (no_bound_check) return std::nullopt;
    return bound ? *bound : kDefaultBound;
  }
  Execution exec() const { return serial ? Execution::serial : Execution::parallel; }
};

// Options shared by the window-based subcommands.
void add_window(CLI::App* sub, Config& c) {
  sub->add_option("--seq", c.seq, "generator spec or CSV file")->required();
  sub->add_option("--N", c.n, "window length for single sequences")
      ->check(CLI::Range(kMinScale, std::size_t{100000000}));
  sub->add_option("--M", c.m, "side of the [1,M]^2 window for double sequences")
      ->check(CLI::Range(kMinScale, std::size_t{100000}));
  sub->add_option("--dim", c.dim, "coordinates per point when reading CSV")
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  sub->add_flag("--double", c.dual, "read the CSV as a double sequence n,m,v1..vk");
}

void add_bound(CLI::App* sub, Config& c) {
  sub->add_option("--bound", c.bound, "boundedness threshold")->check(CLI::PositiveNumber);
  sub->add_flag("--no-bound-check", c.no_bound_check, "skip the boundedness check");
}

void add_output(CLI::App* sub, Config& c) {
  sub->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_flag("--serial", c.serial, "disable OpenMP kernels");
}

CLI::Option* add_delta(CLI::App* sub, Config& c) {
  return sub->add_option("--delta", c.delta, "limsup grid step")
      ->envname("ICORE_DELTA")
      ->check(CLI::PositiveNumber);
}

CLI::Option* add_eps(CLI::App* sub, Config& c) {
  return sub->add_option("--eps", c.eps_final, "finest cluster cell half-side")
      ->envname("ICORE_EPS_FINAL")
      ->check(CLI::PositiveNumber);
}

void add_tol(CLI::App* sub, Config& c) {
  sub->add_option("--tol", c.tol, "convergence tolerance (default 3*max(delta,eps))")
      ->envname("ICORE_TOL")
      ->check(CLI::PositiveNumber);
}

void add_tol_equiv(CLI::App* sub, Config& c) {
  sub->add_option("--tol-equiv", c.tol_equiv, "construction agreement tolerance")
      ->envname("ICORE_TOL_EQUIV")
      ->check(CLI::PositiveNumber);
}

void add_directions(CLI::App* sub, Config& c) {
  sub->add_option("--directions", c.directions, "support directions (0 = 64k)");
}

SequenceWindow load_window(const Config& c) {
  namespace fs = std::filesystem;
  std::error_code ec;
  SequenceWindow w = [&] {
    if (fs::is_regular_file(c.seq, ec))
      return ingest_csv(c.seq, c.dim, c.dual ? Arity::dual : Arity::single);
    auto spec = parse_generator(c.seq);
    const bool dual = is_double_generator(spec);
    if (c.dual && !dual) throw ParameterError("--double given for a single-sequence generator");
    if (dual && c.n) throw ParameterError("double generators take --M, not --N");
    if (!dual && c.m) throw ParameterError("single generators take --N, not --M");
    return generate(spec, dual ? c.m.value_or(kDefaultM) : c.n.value_or(kDefaultN));
  }();
  if (w.scale() < kMinScale)
    throw ParameterError("scale " + std::to_string(w.scale()) + " is below " +
                         std::to_string(kMinScale));
  return w;
}

FiniteIdealModel load_ideal(const Config& c, const SequenceWindow& w) {
  auto ideal = parse_ideal(c.ideal.empty() ? (w.arity() == Arity::dual ? "IP" : "fin") : c.ideal);
  if (ideal.arity() != w.arity())
    throw ParameterError("ideal '" + ideal.name() + "' does not match the window arity");
  return ideal;
}

CoreParams core_params(const Config& c, std::size_t k) {
  CoreParams p;
  p.delta = c.delta;
  p.eps_final = c.eps_final;
  p.rounds = c.rounds;
  p.directions = c.directions;
  p.centers = c.centers;
  p.bound = c.effective_bound();
  if (c.box) p.box = std::make_pair(Point(k, -*c.box), Point(k, *c.box));
  p.exec = c.exec();
  return p;
}

// -0.0 prints as "-0.0"
void drop_signed_zeros(json& j) {
  if (j.is_number_float() && j.get<double>() == 0.0) j = 0.0;
  else if (j.is_structured())
    for (auto& v : j) drop_signed_zeros(v);
}

json optional_number(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

json window_params(const Config& c, const SequenceWindow& w, const std::string& ideal) {
  json p;
  p["command"] = c.command;
  p["seq"] = c.seq;
  p["source"] = w.source();
  p["ideal"] = ideal;
  p["arity"] = w.arity() == Arity::dual ? "double" : "single";
  p["scale"] = w.scale();
  p["dim"] = w.dim();
  return p;
}

json core_echo(json p, const CoreParams& cp, std::size_t k) {
  p["delta"] = cp.delta;
  p["eps_final"] = cp.eps_final;
  p["rounds"] = cp.rounds;
  p["directions"] = cp.direction_count(k);
  p["centers"] = cp.centers ? cp.centers : cp.direction_count(k);
  p["refine_rounds"] = cp.refine_rounds;
  p["window_centers"] = cp.window_centers;
  p["bound"] = optional_number(cp.bound);
  if (cp.box)
    p["box"] = {{"lo", cp.box->first}, {"hi", cp.box->second}};
  else
    p["box"] = nullptr;
  p["execution"] = cp.exec == Execution::serial ? "serial" : "parallel";
  return p;
}

json polytope_json(const Polytope& poly) {
  json j;
  j["empty"] = poly.is_empty();
  if (poly.is_empty()) return j;
  j["diameter"] = poly.diameter();
  const auto [lo, hi] = poly.bounding_box();
  j["bounding_box"] = {{"lo", lo}, {"hi", hi}};
  if (!poly.vertices().empty()) {
    j["vertices"] = poly.vertices();
  } else {
    json hs = json::array();
    for (const auto& h : poly.halfspaces()) hs.push_back({{"u", h.u}, {"b", h.b}});
    j["halfspaces"] = std::move(hs);
  }
  return j;
}

json core_json(const CoreReport& r) {
  json j;
  j["construction"] = to_string(r.construction);
  j["state"] = to_string(r.state);
  j["sample_count"] = r.sample_count;
  j["polytope"] = polytope_json(r.result);
  return j;
}

std::string csv_header(const std::string& lead, std::size_t k) {
  std::string h = lead;
  for (std::size_t a = 1; a <= k; ++a) h += (h.empty() ? "x" : ",x") + std::to_string(a);
  return h + "\n";
}

std::string csv_row(std::span<const double> p) {
  std::ostringstream s;
  s.precision(17);
  for (std::size_t a = 0; a < p.size(); ++a) s << (a ? "," : "") << p[a];
  return s.str();
}

struct Output {
  json report;
  std::string csv;
  int code = kOk;
};

Output cmd_limits(const Config& c) {
  auto w = load_window(c);
  auto ideal = load_ideal(c, w);
  if (w.dim() != 1) throw ParameterError("limits needs a real-valued sequence (dim 1)");
  LimitOptions opt{c.delta, c.effective_bound()};
  const auto rep = scalar_limits(w, ideal, opt);
  const double tol = c.effective_tol();
  Output o;
  auto p = window_params(c, w, ideal.name());
  p["delta"] = c.delta;
  p["tol"] = tol;
  p["bound"] = optional_number(opt.bound);
  o.report["params"] = std::move(p);
  o.report["ilimsup"] = rep.ilimsup;
  o.report["iliminf"] = rep.iliminf;
  o.report["delta"] = rep.delta;
  o.report["N"] = rep.scale;
  const bool conv = rep.ilimsup - rep.iliminf <= tol;
  o.report["convergent"] = conv;
  o.report["limit"] = conv ? json(0.5 * (rep.ilimsup + rep.iliminf)) : json(nullptr);
  o.csv = "index,value\n";
  for (std::size_t i = 0; i < w.size(); ++i)
    o.csv += std::to_string(i + 1) + "," + csv_row(w.point(i)) + "\n";
  return o;
}

Output cmd_clusters(const Config& c) {
  auto w = load_window(c);
  auto ideal = load_ideal(c, w);
  const auto cp = core_params(c, w.dim());
  const auto set = estimate_clusters(w, ideal, cp.cluster_options());
  Output o;
  auto p = window_params(c, w, ideal.name());
  p["eps_final"] = cp.eps_final;
  p["rounds"] = cp.rounds;
  p["bound"] = optional_number(cp.bound);
  p["box"] = cp.box ? json{{"lo", cp.box->first}, {"hi", cp.box->second}} : json(nullptr);
  p["execution"] = c.serial ? "serial" : "parallel";
  o.report["params"] = std::move(p);
  o.report["radius"] = set.radius;
  o.report["count"] = set.points.size();
  o.report["points"] = set.points;
  o.csv = csv_header("", w.dim());
  for (const auto& q : set.points) o.csv += csv_row(q) + "\n";
  return o;
}

Output cmd_core(const Config& c) {
  auto w = load_window(c);
  auto ideal = load_ideal(c, w);
  const auto cp = core_params(c, w.dim());
  std::vector<CoreReport> reports;
  if (c.method == "support" || c.method == "all") reports.push_back(core_by_support(w, ideal, cp));
  if (c.method == "cluster" || c.method == "all")
    reports.push_back(core_by_cluster_hull(w, ideal, cp));
  if (c.method == "balls" || c.method == "all") reports.push_back(core_by_balls(w, ideal, cp));
  Output o;
  auto p = core_echo(window_params(c, w, ideal.name()), cp, w.dim());
  p["method"] = c.method;
  p["tol_equiv"] = c.effective_tol_equiv();
  o.report["params"] = std::move(p);
  json cores = json::array();
  for (const auto& r : reports) cores.push_back(core_json(r));
  o.report["cores"] = std::move(cores);
  if (reports.size() > 1) {
    double gap = 0.0, haus = 0.0;
    bool comparable = true;
    for (const auto& r : reports) comparable = comparable && !r.result.is_empty();
    if (comparable)
      for (std::size_t i = 0; i < reports.size(); ++i)
        for (std::size_t j = i + 1; j < reports.size(); ++j) {
          gap = std::max(gap, std::abs(reports[i].result.diameter() - reports[j].result.diameter()));
          haus = std::max(haus, hausdorff_distance(reports[i].result, reports[j].result));
        }
    json a;
    a["comparable"] = comparable;
    a["max_diameter_gap"] = comparable ? json(gap) : json(nullptr);
    a["max_hausdorff"] = comparable ? json(haus) : json(nullptr);
    a["within_tol_equiv"] = comparable && haus <= c.effective_tol_equiv();
    o.report["agreement"] = std::move(a);
  }
  o.csv = csv_header("construction", w.dim());
  for (const auto& r : reports)
    for (const auto& v : r.result.vertices()) o.csv += to_string(r.construction) + "," + csv_row(v) + "\n";
  return o;
}

Output cmd_euler(const Config& c) {
  auto w = load_window(c);
  if (w.arity() != Arity::single) throw ParameterError("euler needs a single sequence");
  const auto cp = core_params(c, w.dim());
  const auto y = euler_transform(w, c.r, cp.exec);
  const auto rep = core_by_support(y, make_fin(), cp);
  const double tol = c.effective_tol();
  Output o;
  auto p = core_echo(window_params(c, w, "fin"), cp, w.dim());
  p["r"] = c.r;
  p["tol"] = tol;
  o.report["params"] = std::move(p);
  o.report["core"] = core_json(rep);
  const bool conv = !rep.result.is_empty() && rep.result.diameter() <= tol;
  o.report["convergent"] = conv;
  if (conv) {
    const auto [lo, hi] = rep.result.bounding_box();
    Point mid(lo.size());
    for (std::size_t a = 0; a < lo.size(); ++a) mid[a] = 0.5 * (lo[a] + hi[a]);
    o.report["limit"] = mid;
  } else {
    o.report["limit"] = nullptr;
  }
  o.csv = csv_header("index", y.dim());
  for (std::size_t i = 0; i < y.size(); ++i)
    o.csv += std::to_string(i + 1) + "," + csv_row(y.point(i)) + "\n";
  return o;
}

Output cmd_double(const Config& c) {
  auto w = load_window(c);
  if (w.arity() != Arity::dual) throw ParameterError("double needs a double sequence");
  const auto mode = parse_double_mode(c.mode);
  const auto cp = core_params(c, w.dim());
  const double tol = c.effective_tol();
  const auto res = double_convergence(w, mode, tol, cp);
  Output o;
  auto p = core_echo(window_params(c, w, ideal_for(mode).name()), cp, w.dim());
  p["mode"] = to_string(mode);
  p["tol"] = tol;
  o.report["params"] = std::move(p);
  o.report["convergent"] = res.limit.has_value();
  o.report["limit"] = res.limit ? json(*res.limit) : json(nullptr);
  o.report["core"] = core_json(res.core);
  o.csv = csv_header("n,m", w.dim());
  const std::size_t m = w.scale();
  for (std::size_t i = 0; i < w.size(); ++i)
    o.csv += std::to_string(i / m + 1) + "," + std::to_string(i % m + 1) + "," +
             csv_row(w.point(i)) + "\n";
  return o;
}

Output cmd_verify(const Config& c) {
  VerifyOptions vo;
  vo.delta = c.delta;
  vo.eps_final = c.eps_final;
  vo.tol_equiv = c.effective_tol_equiv();
  vo.exec = c.exec();
  std::vector<const CorpusItem*> items;
  if (c.item == "all")
    for (const auto& it : corpus()) items.push_back(&it);
  else
    items.push_back(&corpus_item(c.item));
  Output o;
  json p;
  p["command"] = c.command;
  p["item"] = c.item;
  p["delta"] = vo.delta;
  p["eps_final"] = vo.eps_final;
  p["tol_equiv"] = vo.equiv();
  p["probe_delta"] = vo.probe_delta;
  p["probes"] = vo.probes;
  p["samples"] = vo.samples;
  p["perturb_amplitude"] = vo.perturb_amplitude;
  p["seed"] = vo.seed;
  p["execution"] = c.serial ? "serial" : "parallel";
  o.report["params"] = std::move(p);
  json out = json::array();
  bool all = true;
  o.csv = "item,check,passed,value,limit\n";
  for (const auto* it : items) {
    const auto checks = verify_item(*it, vo);
    json j;
    j["name"] = it->name;
    j["sequence"] = it->sequence;
    j["ideal"] = it->ideal;
    j["scale"] = it->scale;
    bool ok = true;
    json cs = json::array();
    for (const auto& ch : checks) {
      ok = ok && ch.passed;
      cs.push_back({{"name", ch.name},
                    {"passed", ch.passed},
                    {"value", ch.value},
                    {"limit", ch.limit},
                    {"detail", ch.detail}});
      std::ostringstream row;
      row.precision(17);
      row << it->name << "," << ch.name << "," << (ch.passed ? 1 : 0) << "," << ch.value << ","
          << ch.limit << "\n";
      o.csv += row.str();
    }
    j["passed"] = ok;
    j["checks"] = std::move(cs);
    out.push_back(std::move(j));
    all = all && ok;
  }
  o.report["items"] = std::move(out);
  o.report["passed"] = all;
  o.code = all ? kOk : kFailed;
  return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"ideal cores, cluster sets and summability transforms", "icore"};
  app.require_subcommand(1);

  auto* limits = app.add_subcommand("limits", "ideal limsup and liminf of a real sequence");
  add_window(limits, c);
  limits->add_option("--ideal", c.ideal);
  add_delta(limits, c);
  add_tol(limits, c);
  add_bound(limits, c);
  add_output(limits, c);

  auto* clusters = app.add_subcommand("clusters", "estimate the cluster set");
  add_window(clusters, c);
  clusters->add_option("--ideal", c.ideal);
  add_eps(clusters, c);
  clusters->add_option("--rounds", c.rounds)->check(CLI::Range(1, 64));
  add_bound(clusters, c);
  clusters->add_option("--box", c.box, "restrict the search to [-B,B]^k")
      ->check(CLI::PositiveNumber);
  add_output(clusters, c);

  auto* core = app.add_subcommand("core", "ideal core by one or all constructions");
  add_window(core, c);
  core->add_option("--ideal", c.ideal);
  add_delta(core, c);
  add_eps(core, c);
  add_tol_equiv(core, c);
  add_directions(core, c);
  core->add_option("--centers", c.centers, "ball centers per ring (0 = directions)");
  core->add_option("--rounds", c.rounds)->check(CLI::Range(1, 64));
  core->add_option("--method", c.method)
      ->check(CLI::IsMember({"support", "cluster", "balls", "all"}));
  add_bound(core, c);
  core->add_option("--box", c.box, "cluster search box [-B,B]^k")->check(CLI::PositiveNumber);
  add_output(core, c);

  auto* euler = app.add_subcommand("euler", "core of the Euler transform");
  add_window(euler, c);
  euler->add_option("--r", c.r, "Euler parameter");
  add_delta(euler, c);
  add_tol(euler, c);
  add_directions(euler, c);
  add_bound(euler, c);
  add_output(euler, c);

  auto* dbl = app.add_subcommand("double", "convergence of a double sequence");
  add_window(dbl, c);
  dbl->add_option("--mode", c.mode)->check(CLI::IsMember({"pringsheim", "statistical", "e"}));
  add_delta(dbl, c);
  add_tol(dbl, c);
  add_directions(dbl, c);
  add_bound(dbl, c);
  add_output(dbl, c);

  auto* verify = app.add_subcommand("verify", "invariant suite on a corpus item");
  verify->add_option("--item", c.item, "corpus item name or 'all'");
  add_delta(verify, c);
  add_eps(verify, c);
  add_tol_equiv(verify, c);
  add_output(verify, c);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "icore: " << msg << "\n";
    return kConfigError;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    Output o = c.command == "limits"     ? cmd_limits(c)
               : c.command == "clusters" ? cmd_clusters(c)
               : c.command == "core"     ? cmd_core(c)
               : c.command == "euler"    ? cmd_euler(c)
               : c.command == "double"   ? cmd_double(c)
                                         : cmd_verify(c);
    drop_signed_zeros(o.report);
    const std::string text = c.format == "csv" ? o.csv : o.report.dump(2) + "\n";
    if (c.out.empty()) {
      out << text;
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!f) throw ParameterError("cannot write " + c.out);
      f << text;
    }
    if (o.code == kFailed) err << "icore: verification failed\n";
    return o.code;
  } catch (const UnboundedSequenceError& e) {
    err << "icore: unbounded sequence: " << e.what() << "\n";
    return kUnbounded;
  } catch (const ParseError& e) {
    err << "icore: parse error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParameterError& e) {
    err << "icore: " << e.what() << "\n";
    return kConfigError;
  } catch (const OverflowError& e) {
    err << "icore: overflow: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "icore: " << e.what() << "\n";
    return kFailed;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace icore::cli
