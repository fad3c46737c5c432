#include "vefrac/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"
#include "text_util.hpp"
#include "vefrac/error.hpp"

namespace vefrac {

using detail::format_double;
using detail::parse_double;
using detail::parse_index;
using detail::split;
using detail::split_ws;
using detail::trim;
using Json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------- config text

std::vector<std::size_t> parse_edges(const std::string& v) {
  std::vector<std::size_t> out;
  for (const auto& tok : split_ws(v)) out.push_back(parse_index(tok));
  return out;
}

std::vector<std::vector<std::size_t>> parse_paths(const std::string& v) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& part : split(v, ';')) {
    if (part.empty()) continue;
    out.push_back(parse_edges(part));
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& v) {
  std::vector<double> out;
  for (const auto& tok : split_ws(v)) out.push_back(parse_double(tok));
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ValidationError(key + ": expected true or false, got '" + v + "'");
}

double positive(const std::string& name, const std::string& v) {
  const double x = parse_double(v);
  if (!(x > 0.0)) throw ValidationError(name + " must be positive");
  return x;
}

double nonnegative(const std::string& name, const std::string& v) {
  const double x = parse_double(v);
  if (x < 0.0) throw ValidationError(name + " must be nonnegative");
  return x;
}

Amplitude parse_amplitude(const std::string& v) {
  const auto tok = split_ws(v);
  if (tok.empty()) throw ValidationError("load.amplitude is empty");
  if (tok[0] == "linear") {
    if (tok.size() != 3) throw ValidationError("load.amplitude: 'linear c0 c1' takes two numbers");
    return Amplitude::linear(parse_double(tok[1]), parse_double(tok[2]));
  }
  if (tok[0] == "table") {
    if (tok.size() % 2 != 1 || tok.size() < 5)
      throw ValidationError("load.amplitude: 'table' takes at least two (time, value) pairs");
    std::vector<double> ts, vs;
    for (std::size_t i = 1; i < tok.size(); i += 2) {
      ts.push_back(parse_double(tok[i]));
      vs.push_back(parse_double(tok[i + 1]));
    }
    return Amplitude::table(std::move(ts), std::move(vs));
  }
  throw ValidationError("load.amplitude: unknown kind '" + tok[0] + "'");
}

std::string amplitude_text(const Amplitude& a) {
  if (a.kind() == Amplitude::Kind::Linear) return "linear " + format_double(a.c0()) + " " + format_double(a.c1());
  std::string s = "table";
  for (std::size_t i = 0; i < a.times().size(); ++i)
    s += " " + format_double(a.times()[i]) + " " + format_double(a.values()[i]);
  return s;
}

std::string edges_text(const std::vector<std::size_t>& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? " " : "") + std::to_string(e[i]);
  return s;
}

std::string paths_text(const std::vector<std::vector<std::size_t>>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " ; " : "") + edges_text(p[i]);
  return s;
}

std::string numbers_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
  return s;
}

std::string pool_name(PoolKind k) {
  switch (k) {
    case PoolKind::AllInterior: return "all-interior";
    case PoolKind::Paths: return "paths";
    case PoolKind::Seeds: return "seeds";
  }
  return "";
}

PoolKind pool_kind(const std::string& v) {
  if (v == "all-interior") return PoolKind::AllInterior;
  if (v == "paths") return PoolKind::Paths;
  if (v == "seeds") return PoolKind::Seeds;
  throw ValidationError("search.pool: unknown pool '" + v + "'");
}

std::string resolve(const std::string& base, const std::string& file) {
  const std::filesystem::path p(file);
  return p.is_absolute() ? file : (std::filesystem::path(base) / p).string();
}

void require_mesh(const RunConfig& c, const std::string& key) {
  if (!c.mesh) throw ValidationError(key + " needs the mesh");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"mesh.file",
       [](RunConfig& c, const std::string& v, const std::string& base) {
         c.mesh = read_mesh_file(resolve(base, v));
         c.mesh_source = v;
       }},
      {"load.profile",
       [](RunConfig& c, const std::string& v, const std::string&) {
         require_mesh(c, "load.profile");
         c.profile = builtin_profile(v, *c.mesh);
         c.profile_source = v;
       }},
      {"load.profile_file",
       [](RunConfig& c, const std::string& v, const std::string& base) {
         require_mesh(c, "load.profile_file");
         c.profile = parse_profile(detail::read_text_file(resolve(base, v)), *c.mesh);
         c.profile_source = v;
       }},
      {"load.amplitude", [](RunConfig& c, const std::string& v, const std::string&) { c.amplitude = parse_amplitude(v); }},
      {"crack.initial", [](RunConfig& c, const std::string& v, const std::string&) { c.initial = parse_edges(v); }},
      {"dissipation.lambda",
       [](RunConfig& c, const std::string& v, const std::string&) { c.params.lambda = positive("lambda", v); }},
      {"dissipation.mu", [](RunConfig& c, const std::string& v, const std::string&) { c.params.mu = positive("mu", v); }},
      {"dissipation.quadrature_order",
       [](RunConfig& c, const std::string& v, const std::string&) {
         const std::size_t q = parse_index(v);
         if (q < 1 || q > 16) throw ValidationError("quadrature_order must be between 1 and 16");
         c.params.quadrature_order = static_cast<int>(q);
       }},
      {"time.horizon", [](RunConfig& c, const std::string& v, const std::string&) { c.horizon = positive("horizon", v); }},
      {"time.steps",
       [](RunConfig& c, const std::string& v, const std::string&) {
         c.steps = parse_index(v);
         if (c.steps == 0) throw ValidationError("steps must be positive");
       }},
      {"time.times", [](RunConfig& c, const std::string& v, const std::string&) { c.times = parse_numbers(v); }},
      {"time.refine_points",
       [](RunConfig& c, const std::string& v, const std::string&) { c.refine_points = parse_numbers(v); }},
      {"time.refine_levels",
       [](RunConfig& c, const std::string& v, const std::string&) {
         c.refine_levels = parse_index(v);
         if (c.refine_levels > 20) throw ValidationError("refine_levels must be at most 20");
       }},
      {"search.pool", [](RunConfig& c, const std::string& v, const std::string&) { c.pool = pool_kind(v); }},
      {"search.paths", [](RunConfig& c, const std::string& v, const std::string&) { c.paths = parse_paths(v); }},
      {"search.seeds", [](RunConfig& c, const std::string& v, const std::string&) { c.seeds = parse_edges(v); }},
      {"search.budget",
       [](RunConfig& c, const std::string& v, const std::string&) {
         c.budget = parse_index(v);
         if (c.budget < 1 || c.budget > 16) throw ValidationError("budget must be between 1 and 16");
       }},
      {"search.greedy",
       [](RunConfig& c, const std::string& v, const std::string&) { c.greedy = parse_bool("search.greedy", v); }},
      {"search.threads",
       [](RunConfig& c, const std::string& v, const std::string&) {
         const std::size_t n = parse_index(v);
         if (n < 1 || n > 256) throw ValidationError("threads must be between 1 and 256");
         c.threads = static_cast<unsigned>(n);
       }},
      {"tolerances.stability",
       [](RunConfig& c, const std::string& v, const std::string&) { c.stability_tol = nonnegative("stability", v); }},
      {"tolerances.solver",
       [](RunConfig& c, const std::string& v, const std::string&) { c.solver_tol = positive("solver tolerance", v); }},
      {"tolerances.hausdorff",
       [](RunConfig& c, const std::string& v, const std::string&) {
         c.hausdorff_resolution = nonnegative("hausdorff", v);
       }},
      {"tolerances.balance",
       [](RunConfig& c, const std::string& v, const std::string&) { c.balance_tol = nonnegative("balance", v); }},
      {"tolerances.jump_threshold",
       [](RunConfig& c, const std::string& v, const std::string&) {
         c.jump_threshold = nonnegative("jump_threshold", v);
       }},
      {"run.mode",
       [](RunConfig& c, const std::string& v, const std::string&) {
         if (v == "ve") c.viscous = true;
         else if (v == "energetic") c.viscous = false;
         else throw ValidationError("run.mode must be 've' or 'energetic'");
       }},
      {"run.output", [](RunConfig& c, const std::string& v, const std::string&) { c.output = v; }},
      {"griffith.paths", [](RunConfig& c, const std::string& v, const std::string&) { c.tip_paths = parse_paths(v); }},
  };
  return table;
}

void apply(RunConfig& c, const std::string& key, const std::string& value, const std::string& base) {
  const auto& t = setters();
  const auto it = t.find(key);
  if (it == t.end()) throw ValidationError("unknown key '" + key + "'");
  it->second(c, value, base);
}

void check_edges(const RunConfig& c, const std::vector<std::size_t>& edges, const std::string& what) {
  for (std::size_t e : edges)
    if (e >= c.mesh->num_edges()) throw ValidationError(what + ": edge " + std::to_string(e) + " out of range");
}

void finish(const RunConfig& c) {
  if (!c.mesh) throw ValidationError("missing mesh (mesh.file)");
  if (c.profile.empty()) throw ValidationError("missing load profile (load.profile or load.profile_file)");
  check_edges(c, c.initial, "crack.initial");
  check_edges(c, c.seeds, "search.seeds");
  for (const auto& p : c.paths) check_edges(c, p, "search.paths");
  for (const auto& p : c.tip_paths) check_edges(c, p, "griffith.paths");
  if (c.pool == PoolKind::Paths && c.paths.empty()) throw ValidationError("search.pool = paths needs search.paths");
  if (c.pool == PoolKind::Seeds && c.seeds.empty()) throw ValidationError("search.pool = seeds needs search.seeds");
  if (!c.times.empty()) TimePartition::from_times(c.times);
}

// ---------------------------------------------------------------- json helpers

Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double get_num(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ValidationError("archive: expected a number");
}

Json nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> get_nums(const Json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(get_num(x));
  return out;
}

Json edge_json(const CrackSet& k) { return k.edge_list(); }

CrackSet get_set(const MeshPtr& mesh, const Json& j) {
  const auto e = j.get<std::vector<std::size_t>>();
  for (std::size_t x : e)
    if (x >= mesh->num_edges()) throw ValidationError("archive: edge index out of range");
  return CrackSet(mesh, e);
}

Json config_json(const RunConfig& c) {
  Json j;
  j["mesh"] = {{"source", c.mesh_source}, {"text", c.mesh ? write_mesh(*c.mesh) : std::string()}};
  Json amp;
  if (c.amplitude.kind() == Amplitude::Kind::Linear) {
    amp = {{"kind", "linear"}, {"c0", num(c.amplitude.c0())}, {"c1", num(c.amplitude.c1())}};
  } else {
    amp = {{"kind", "table"}, {"times", nums(c.amplitude.times())}, {"values", nums(c.amplitude.values())}};
  }
  j["load"] = {{"profile_source", c.profile_source}, {"profile", nums(c.profile)}, {"amplitude", amp}};
  j["crack"] = {{"initial", c.initial}};
  j["dissipation"] = {{"lambda", num(c.params.lambda)},
                      {"mu", num(c.params.mu)},
                      {"quadrature_order", c.params.quadrature_order}};
  j["time"] = {{"horizon", num(c.horizon)},
               {"steps", c.steps},
               {"times", nums(c.times)},
               {"refine_points", nums(c.refine_points)},
               {"refine_levels", c.refine_levels}};
  j["search"] = {{"pool", pool_name(c.pool)}, {"paths", c.paths}, {"seeds", c.seeds},
                 {"budget", c.budget},        {"greedy", c.greedy}, {"threads", c.threads}};
  j["tolerances"] = {{"stability", num(c.stability_tol)},
                     {"solver", num(c.solver_tol)},
                     {"hausdorff", num(c.hausdorff_resolution)},
                     {"balance", num(c.balance_tol)},
                     {"jump_threshold", num(c.jump_threshold)}};
  j["run"] = {{"mode", c.viscous ? "ve" : "energetic"}, {"output", c.output}};
  j["griffith"] = {{"paths", c.tip_paths}};
  return j;
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  const auto mesh_text = j.at("mesh").at("text").get<std::string>();
  if (!mesh_text.empty()) c.mesh = parse_mesh(mesh_text);
  c.mesh_source = j.at("mesh").at("source").get<std::string>();
  const auto& load = j.at("load");
  c.profile_source = load.at("profile_source").get<std::string>();
  c.profile = get_nums(load.at("profile"));
  const auto& amp = load.at("amplitude");
  if (amp.at("kind") == "linear")
    c.amplitude = Amplitude::linear(get_num(amp.at("c0")), get_num(amp.at("c1")));
  else
    c.amplitude = Amplitude::table(get_nums(amp.at("times")), get_nums(amp.at("values")));
  c.initial = j.at("crack").at("initial").get<std::vector<std::size_t>>();
  const auto& d = j.at("dissipation");
  c.params.lambda = get_num(d.at("lambda"));
  c.params.mu = get_num(d.at("mu"));
  c.params.quadrature_order = d.at("quadrature_order").get<int>();
  const auto& t = j.at("time");
  c.horizon = get_num(t.at("horizon"));
  c.steps = t.at("steps").get<std::size_t>();
  c.times = get_nums(t.at("times"));
  c.refine_points = get_nums(t.at("refine_points"));
  c.refine_levels = t.at("refine_levels").get<std::size_t>();
  const auto& s = j.at("search");
  c.pool = pool_kind(s.at("pool").get<std::string>());
  c.paths = s.at("paths").get<std::vector<std::vector<std::size_t>>>();
  c.seeds = s.at("seeds").get<std::vector<std::size_t>>();
  c.budget = s.at("budget").get<std::size_t>();
  c.greedy = s.at("greedy").get<bool>();
  c.threads = s.at("threads").get<unsigned>();
  const auto& tol = j.at("tolerances");
  c.stability_tol = get_num(tol.at("stability"));
  c.solver_tol = get_num(tol.at("solver"));
  c.hausdorff_resolution = get_num(tol.at("hausdorff"));
  c.balance_tol = get_num(tol.at("balance"));
  c.jump_threshold = get_num(tol.at("jump_threshold"));
  c.viscous = j.at("run").at("mode") == "ve";
  c.output = j.at("run").at("output").get<std::string>();
  c.tip_paths = j.at("griffith").at("paths").get<std::vector<std::vector<std::size_t>>>();
  return c;
}

Json segments_json(const std::vector<TransitionSegment>& segs) {
  Json a = Json::array();
  for (const auto& s : segs)
    a.push_back({{"first", s.first}, {"last", s.last}, {"kind", to_string(s.kind)},
                 {"recursion_violations", s.recursion_violations}});
  return a;
}

std::vector<TransitionSegment> segments_from(const Json& a) {
  std::vector<TransitionSegment> out;
  for (const auto& s : a) {
    TransitionSegment t;
    t.first = s.at("first").get<std::size_t>();
    t.last = s.at("last").get<std::size_t>();
    t.kind = s.at("kind") == "viscous" ? SegmentKind::Viscous : SegmentKind::Sliding;
    t.recursion_violations = s.at("recursion_violations").get<std::vector<std::size_t>>();
    out.push_back(std::move(t));
  }
  return out;
}

Json audits_json(const AuditSummary& a) {
  Json j;
  Json rows = Json::array();
  for (const auto& r : a.balance.rows)
    rows.push_back({{"t", num(r.t)},
                    {"E", num(r.energy)},
                    {"work", num(r.work)},
                    {"work_error", num(r.work_error)},
                    {"residual_c", num(r.residual_c)},
                    {"residual_e", num(r.residual_e)}});
  j["balance"] = {{"tolerance_rel", num(a.balance.tolerance_rel)},
                  {"max_form_difference", num(a.balance.max_form_difference)},
                  {"upper_excess", num(a.balance.upper_excess)},
                  {"forms_agree", a.balance.forms_agree},
                  {"upper_ok", a.balance.upper_ok},
                  {"rows", rows}};
  Json jc = Json::array();
  for (const auto& r : a.jump_conditions) {
    Json chain = Json::array();
    for (const auto& k : r.chain) chain.push_back(edge_json(k));
    jc.push_back({{"index", r.index},
                  {"t", num(r.t)},
                  {"left_at", num(r.left_at)},
                  {"at_right", num(r.at_right)},
                  {"left_right", num(r.left_right)},
                  {"cost_left_at", num(r.cost_left_at)},
                  {"cost_at_right", num(r.cost_at_right)},
                  {"cost_left_right", num(r.cost_left_right)},
                  {"tolerance", num(r.tolerance)},
                  {"ok", r.ok},
                  {"chain", chain},
                  {"segments", segments_json(r.segments)}});
  }
  j["jump_conditions"] = jc;
  j["components"] = {{"bound", num(a.components.bound)},
                     {"initial", a.components.initial},
                     {"max_components", a.components.max_components},
                     {"counts", a.components.counts},
                     {"violations", a.components.violations}};
  j["gronwall"] = {{"max_excess", num(a.gronwall.max_excess)}, {"violations", a.gronwall.violations}};
  j["c_p"] = num(a.c_p);
  j["power_excess"] = num(a.power_excess);
  j["jump_variation"] = num(a.jump_variation);
  j["max_r_off_jumps"] = num(a.max_r_off_jumps);
  j["stable_off_jumps"] = a.stable_off_jumps;
  return j;
}

AuditSummary audits_from(const Json& j, const MeshPtr& mesh) {
  AuditSummary a;
  const auto& b = j.at("balance");
  a.balance.tolerance_rel = get_num(b.at("tolerance_rel"));
  a.balance.max_form_difference = get_num(b.at("max_form_difference"));
  a.balance.upper_excess = get_num(b.at("upper_excess"));
  a.balance.forms_agree = b.at("forms_agree").get<bool>();
  a.balance.upper_ok = b.at("upper_ok").get<bool>();
  for (const auto& r : b.at("rows")) {
    BalanceRow row;
    row.t = get_num(r.at("t"));
    row.energy = get_num(r.at("E"));
    row.work = get_num(r.at("work"));
    row.work_error = get_num(r.at("work_error"));
    row.residual_c = get_num(r.at("residual_c"));
    row.residual_e = get_num(r.at("residual_e"));
    a.balance.rows.push_back(row);
  }
  for (const auto& r : j.at("jump_conditions")) {
    JumpConditionRow row;
    row.index = r.at("index").get<std::size_t>();
    row.t = get_num(r.at("t"));
    row.left_at = get_num(r.at("left_at"));
    row.at_right = get_num(r.at("at_right"));
    row.left_right = get_num(r.at("left_right"));
    row.cost_left_at = get_num(r.at("cost_left_at"));
    row.cost_at_right = get_num(r.at("cost_at_right"));
    row.cost_left_right = get_num(r.at("cost_left_right"));
    row.tolerance = get_num(r.at("tolerance"));
    row.ok = r.at("ok").get<bool>();
    for (const auto& k : r.at("chain")) row.chain.push_back(get_set(mesh, k));
    row.segments = segments_from(r.at("segments"));
    a.jump_conditions.push_back(std::move(row));
  }
  const auto& c = j.at("components");
  a.components.bound = get_num(c.at("bound"));
  a.components.initial = c.at("initial").get<std::size_t>();
  a.components.max_components = c.at("max_components").get<std::size_t>();
  a.components.counts = c.at("counts").get<std::vector<std::size_t>>();
  a.components.violations = c.at("violations").get<std::size_t>();
  a.gronwall.max_excess = get_num(j.at("gronwall").at("max_excess"));
  a.gronwall.violations = j.at("gronwall").at("violations").get<std::size_t>();
  a.c_p = get_num(j.at("c_p"));
  a.power_excess = get_num(j.at("power_excess"));
  a.jump_variation = get_num(j.at("jump_variation"));
  a.max_r_off_jumps = get_num(j.at("max_r_off_jumps"));
  a.stable_off_jumps = j.at("stable_off_jumps").get<bool>();
  return a;
}

Json griffith_json(const GriffithReport& g) {
  Json s = Json::array();
  for (const auto& x : g.samples)
    s.push_back({{"t", num(x.t)},
                 {"tip", x.tip},
                 {"sigma", num(x.sigma)},
                 {"sigmadot", num(x.sigmadot)},
                 {"kappa2", num(x.kappa2)},
                 {"g", num(x.g)},
                 {"slack", num(x.slack)},
                 {"compl", num(x.compl_residual)}});
  return {{"tips", g.tips}, {"h", num(g.h)}, {"tau", num(g.tau)}, {"samples", s}};
}

GriffithReport griffith_from(const Json& j) {
  GriffithReport g;
  g.tips = j.at("tips").get<std::size_t>();
  g.h = get_num(j.at("h"));
  g.tau = get_num(j.at("tau"));
  for (const auto& x : j.at("samples")) {
    GriffithSample s;
    s.t = get_num(x.at("t"));
    s.tip = x.at("tip").get<std::size_t>();
    s.sigma = get_num(x.at("sigma"));
    s.sigmadot = get_num(x.at("sigmadot"));
    s.kappa2 = get_num(x.at("kappa2"));
    s.g = get_num(x.at("g"));
    s.slack = get_num(x.at("slack"));
    s.compl_residual = get_num(x.at("compl"));
    g.samples.push_back(s);
  }
  return g;
}

std::string pass(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

// ---------------------------------------------------------------- config

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  std::vector<std::pair<std::string, std::string>> entries;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(detail::strip_comment(line));
    if (body.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (body.front() == '[') {
      if (body.back() != ']') throw ValidationError(where + "malformed section header");
      section = std::string(trim(body.substr(1, body.size() - 2)));
      if (section.empty()) throw ValidationError(where + "empty section name");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ValidationError(where + "expected 'key = value'");
    const std::string key = std::string(trim(body.substr(0, eq)));
    if (key.empty()) throw ValidationError(where + "missing key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (!setters().count(full)) throw ValidationError(where + "unknown key '" + full + "'");
    if (seen.count(full)) throw ValidationError(where + "duplicate key '" + full + "'");
    seen[full] = lineno;
    entries.emplace_back(full, std::string(trim(body.substr(eq + 1))));
  }
  if (!seen.count("mesh.file")) throw ValidationError("missing mesh (mesh.file)");
  RunConfig cfg;
  // The mesh goes first since profiles are read against it.
  std::stable_partition(entries.begin(), entries.end(), [](const auto& e) { return e.first == "mesh.file"; });
  for (const auto& [key, value] : entries) {
    try {
      apply(cfg, key, value, base_dir);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(seen[key]) + ": " + e.what());
    }
  }
  finish(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_config(detail::read_text_file(path), dir.empty() ? "." : dir);
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  apply(cfg, key, std::string(trim(value)), ".");
  finish(cfg);
}

std::string write_config(const RunConfig& c, const std::string& mesh_file, const std::string& profile_file) {
  std::ostringstream os;
  os << "[mesh]\nfile = " << mesh_file << "\n\n";
  os << "[load]\nprofile_file = " << profile_file << "\namplitude = " << amplitude_text(c.amplitude) << "\n\n";
  os << "[crack]\ninitial = " << edges_text(c.initial) << "\n\n";
  os << "[dissipation]\nlambda = " << format_double(c.params.lambda) << "\nmu = " << format_double(c.params.mu)
     << "\nquadrature_order = " << c.params.quadrature_order << "\n\n";
  os << "[time]\nhorizon = " << format_double(c.horizon) << "\nsteps = " << c.steps << "\n";
  if (!c.times.empty()) os << "times = " << numbers_text(c.times) << "\n";
  if (!c.refine_points.empty()) os << "refine_points = " << numbers_text(c.refine_points) << "\n";
  if (c.refine_levels) os << "refine_levels = " << c.refine_levels << "\n";
  os << "\n[search]\npool = " << pool_name(c.pool) << "\n";
  if (!c.paths.empty()) os << "paths = " << paths_text(c.paths) << "\n";
  if (!c.seeds.empty()) os << "seeds = " << edges_text(c.seeds) << "\n";
  os << "budget = " << c.budget << "\ngreedy = " << (c.greedy ? "true" : "false") << "\nthreads = " << c.threads
     << "\n\n";
  os << "[tolerances]\nstability = " << format_double(c.stability_tol) << "\nsolver = " << format_double(c.solver_tol)
     << "\nhausdorff = " << format_double(c.hausdorff_resolution) << "\nbalance = " << format_double(c.balance_tol)
     << "\njump_threshold = " << format_double(c.jump_threshold) << "\n\n";
  os << "[run]\nmode = " << (c.viscous ? "ve" : "energetic") << "\noutput = " << c.output << "\n";
  if (!c.tip_paths.empty()) os << "\n[griffith]\npaths = " << paths_text(c.tip_paths) << "\n";
  return os.str();
}

// ---------------------------------------------------------------- running

Prepared prepare(const RunConfig& cfg) {
  finish(cfg);
  Prepared p;
  SolverOptions so;
  so.rel_tol = cfg.solver_tol;
  p.model = std::make_shared<const EnergyModel>(cfg.mesh, BoundaryLoad{cfg.profile, cfg.amplitude}, so);
  p.k0 = CrackSet(cfg.mesh, cfg.initial);
  CompetitorGenerator gen;
  switch (cfg.pool) {
    case PoolKind::AllInterior: {
      std::vector<std::size_t> pool;
      for (std::size_t e = 0; e < cfg.mesh->num_edges(); ++e)
        if (!cfg.mesh->is_boundary_edge(e) && !p.k0.contains(e)) pool.push_back(e);
      gen = CompetitorGenerator::subsets(pool, cfg.budget);
      break;
    }
    case PoolKind::Paths: gen = CompetitorGenerator::paths(cfg.paths, cfg.budget); break;
    case PoolKind::Seeds: gen = CompetitorGenerator::subsets(cfg.seeds, cfg.budget); break;
  }
  p.instance = fem_instance(p.model, cfg.params, gen, cfg.threads);
  p.instance.viscous = cfg.viscous;
  p.instance.greedy = cfg.greedy;
  p.instance.stab_rel = cfg.stability_tol;
  if (!cfg.times.empty()) {
    p.partition = TimePartition::from_times(cfg.times);
  } else if (cfg.refine_levels > 0 && !cfg.refine_points.empty()) {
    p.partition = TimePartition::refined_near(cfg.horizon, cfg.steps, cfg.refine_points, cfg.refine_levels);
  } else {
    p.partition = TimePartition::uniform(cfg.horizon, cfg.steps);
  }
  if (!cfg.amplitude.covers(0.0, p.partition.horizon()))
    throw ValidationError("load amplitude table does not cover the time horizon");
  p.c_p = power_bound_constant(p.model->load(), *cfg.mesh, p.partition.horizon());
  return p;
}

AuditSummary run_audits(const DiscreteEvolution& evo, const std::vector<JumpRecord>& jumps, const Prepared& prep,
                        const RunConfig& cfg) {
  AuditSummary a;
  const RisInstance& inst = prep.instance;
  a.c_p = prep.c_p;
  a.balance = audit_balance(evo, jumps, inst, cfg.balance_tol);
  a.jump_conditions = audit_jump_conditions(jumps, inst, cfg.balance_tol);
  a.components = component_bound_check(evo, inst, prep.c_p);
  a.gronwall = gronwall_check(evo, prep.c_p);
  a.power_excess = evo.steps.empty() ? 0.0 : power_bound_excess(evo, prep.c_p);
  a.jump_variation = jump_variation(jumps, inst);
  std::vector<char> is_jump(evo.steps.size(), 0);
  for (const auto& j : jumps) is_jump[j.index] = 1;
  for (std::size_t i = 0; i < evo.steps.size(); ++i) {
    if (is_jump[i]) continue;
    const auto& s = evo.steps[i];
    a.max_r_off_jumps = std::max(a.max_r_off_jumps, s.r);
    if (s.r > inst.stab_tol(s.energy)) a.stable_off_jumps = false;
  }
  return a;
}

Archive run_config(const RunConfig& cfg) {
  const Prepared prep = prepare(cfg);
  Archive a;
  a.config = cfg;
  a.evolution = run_scheme(prep.instance, prep.partition, prep.k0);
  a.jumps = detect_jumps(a.evolution, cfg.jump_threshold);
  a.audits = run_audits(a.evolution, a.jumps, prep, cfg);
  if (!cfg.tip_paths.empty())
    a.griffith = griffith_report(a.evolution, make_tip_paths(prep.k0, cfg.tip_paths), *prep.model);
  return a;
}

void reaudit(Archive& archive) {
  const Prepared prep = prepare(archive.config);
  archive.jumps = detect_jumps(archive.evolution, archive.config.jump_threshold);
  archive.audits = run_audits(archive.evolution, archive.jumps, prep, archive.config);
}

// ---------------------------------------------------------------- archive

std::string archive_to_string(const Archive& a) {
  Json j;
  j["schema"] = kSchema;
  j["config"] = config_json(a.config);
  j["viscous"] = a.evolution.viscous;
  j["partition"] = nums(a.evolution.partition.times());
  Json steps = Json::array();
  for (const auto& s : a.evolution.steps)
    steps.push_back({{"t", num(s.t)},
                     {"edges", edge_json(s.state)},
                     {"E", num(s.energy)},
                     {"power", num(s.power)},
                     {"d", num(s.d)},
                     {"Delta", num(s.delta)},
                     {"alpha", num(s.alpha)},
                     {"R", num(s.r)},
                     {"work", num(s.work)},
                     {"work_error", num(s.work_error)},
                     {"competitors", s.competitors}});
  j["steps"] = steps;
  Json jumps = Json::array();
  for (const auto& r : a.jumps)
    jumps.push_back({{"index", r.index},
                     {"t", num(r.t)},
                     {"left", edge_json(r.left)},
                     {"at", edge_json(r.at)},
                     {"right", edge_json(r.right)},
                     {"magnitude", num(r.magnitude)},
                     {"alpha", num(r.alpha)}});
  j["jumps"] = jumps;
  j["audits"] = audits_json(a.audits);
  j["griffith"] = a.griffith ? griffith_json(*a.griffith) : Json();
  return j.dump(1) + "\n";
}

Archive archive_from_string(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("archive is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("schema")) throw ValidationError("archive has no schema tag");
  const auto schema = j["schema"].is_string() ? j["schema"].get<std::string>() : std::string("?");
  if (schema != kSchema)
    throw ValidationError("unsupported archive schema '" + schema + "' (expected '" + kSchema + "')");
  try {
    Archive a;
    a.config = config_from_json(j.at("config"));
    const MeshPtr& mesh = a.config.mesh;
    a.evolution.viscous = j.at("viscous").get<bool>();
    const auto times = get_nums(j.at("partition"));
    if (!times.empty()) a.evolution.partition = TimePartition::from_times(times);
    for (const auto& s : j.at("steps")) {
      StepRecord r;
      r.t = get_num(s.at("t"));
      r.state = get_set(mesh, s.at("edges"));
      r.energy = get_num(s.at("E"));
      r.power = get_num(s.at("power"));
      r.d = get_num(s.at("d"));
      r.delta = get_num(s.at("Delta"));
      r.alpha = get_num(s.at("alpha"));
      r.r = get_num(s.at("R"));
      r.work = get_num(s.at("work"));
      r.work_error = get_num(s.at("work_error"));
      r.competitors = s.at("competitors").get<std::size_t>();
      a.evolution.steps.push_back(std::move(r));
    }
    if (!a.evolution.steps.empty() && a.evolution.steps.size() != times.size())
      throw ValidationError("archive: step count does not match the partition");
    for (const auto& r : j.at("jumps")) {
      JumpRecord jr;
      jr.index = r.at("index").get<std::size_t>();
      jr.t = get_num(r.at("t"));
      jr.left = get_set(mesh, r.at("left"));
      jr.at = get_set(mesh, r.at("at"));
      jr.right = get_set(mesh, r.at("right"));
      jr.magnitude = get_num(r.at("magnitude"));
      jr.alpha = get_num(r.at("alpha"));
      a.jumps.push_back(std::move(jr));
    }
    a.audits = audits_from(j.at("audits"), mesh);
    if (!j.at("griffith").is_null()) a.griffith = griffith_from(j.at("griffith"));
    return a;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed archive: ") + e.what());
  }
}

void save_archive(const Archive& archive, const std::string& path) {
  detail::write_text_file(path, archive_to_string(archive));
}

Archive load_archive(const std::string& path) { return archive_from_string(detail::read_text_file(path)); }

// ---------------------------------------------------------------- reports

std::string emit_plot_data(const Archive& a, const std::string& kind) {
  std::ostringstream os;
  const auto& steps = a.evolution.steps;
  const auto& rows = a.audits.balance.rows;
  auto residual = [&](std::size_t i) { return i < rows.size() ? rows[i].residual_c : 0.0; };
  if (kind == "energy") {
    os << "t,E,work,balance_residual\n";
    for (std::size_t i = 0; i < steps.size(); ++i)
      os << format_double(steps[i].t) << ',' << format_double(steps[i].energy) << ','
         << format_double(steps[i].work) << ',' << format_double(residual(i)) << '\n';
  } else if (kind == "dissipation") {
    os << "t,H1,d,Delta,alpha,R\n";
    for (const auto& s : steps)
      os << format_double(s.t) << ',' << format_double(h1_measure(s.state)) << ',' << format_double(s.d) << ','
         << format_double(s.delta) << ',' << format_double(s.alpha) << ',' << format_double(s.r) << '\n';
  } else if (kind == "tips") {
    if (!a.griffith) throw ValidationError("archive has no Griffith report (configure griffith.paths)");
    return griffith_csv(*a.griffith);
  } else if (kind == "balance") {
    os << "t,residual_c,residual_e,work_error\n";
    for (const auto& r : rows)
      os << format_double(r.t) << ',' << format_double(r.residual_c) << ',' << format_double(r.residual_e) << ','
         << format_double(r.work_error) << '\n';
  } else {
    throw ValidationError("unknown plot kind '" + kind + "' (energy, dissipation, tips, balance)");
  }
  return os.str();
}

std::size_t first_change(const DiscreteEvolution& evo) {
  for (std::size_t i = 1; i < evo.steps.size(); ++i)
    if (!(evo.steps[i].state == evo.steps[i - 1].state)) return i;
  return evo.steps.size();
}

std::string audit_text(const Archive& a) {
  const auto& au = a.audits;
  std::ostringstream os;
  const auto& steps = a.evolution.steps;
  os << "mode " << (a.evolution.viscous ? "ve" : "energetic") << ", " << steps.size() << " samples, "
     << a.jumps.size() << " jumps";
  if (!steps.empty()) os << ", final H1 " << format_double(h1_measure(steps.back().state));
  os << "\n";
  const std::size_t fc = first_change(a.evolution);
  if (fc < steps.size()) os << "first change at index " << fc << " (t = " << format_double(steps[fc].t) << ")\n";
  else os << "no change\n";
  os << "balance forms agree: " << pass(au.balance.forms_agree)
     << " (max difference " << format_double(au.balance.max_form_difference) << ")\n";
  os << "upper energy estimate: " << pass(au.balance.upper_ok) << " (max excess "
     << format_double(au.balance.upper_excess) << ")\n";
  bool jumps_ok = true;
  for (const auto& r : au.jump_conditions) jumps_ok = jumps_ok && r.ok;
  os << "jump conditions: " << pass(jumps_ok) << " (" << au.jump_conditions.size() << " jumps, variation "
     << format_double(au.jump_variation) << ")\n";
  os << "stability off jumps: " << pass(au.stable_off_jumps) << " (max R " << format_double(au.max_r_off_jumps)
     << ")\n";
  os << "power bound: " << pass(au.power_excess <= 0.0) << " (C_P " << format_double(au.c_p) << ", max excess "
     << format_double(au.power_excess) << ")\n";
  os << "energy growth bound: " << pass(au.gronwall.violations == 0) << "\n";
  os << "component bound: " << pass(au.components.violations == 0) << " (max " << au.components.max_components
     << ", bound " << format_double(au.components.bound) << ")\n";
  if (a.griffith) {
    const KktCheck k = check_kkt(*a.griffith, a.griffith->h + a.griffith->tau);
    os << "griffith: a " << pass(k.a) << ", b " << pass(k.b) << ", c " << pass(k.c) << " (growing samples "
       << k.growing << ", max |kappa^2-1| " << format_double(k.max_growth_deviation) << ", estimator gap "
       << format_double(k.max_estimator_gap) << ")\n";
  }
  return os.str();
}

}  // namespace vefrac
