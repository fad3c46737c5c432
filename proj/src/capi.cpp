#include "vefrac/vefrac.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <sstream>
#include <string>

#include "text_util.hpp"
#include "vefrac/cli_io.hpp"
#include "vefrac/error.hpp"

struct vf_config {
  vefrac::RunConfig cfg;
};

struct vf_archive {
  vefrac::Archive archive;
};

namespace {

thread_local std::string last_error;

vf_status fail(vf_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
vf_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return VF_OK;
  } catch (const vefrac::ValidationError& e) {
    return fail(VF_ERR_VALIDATION, e.what());
  } catch (const vefrac::NumericalError& e) {
    return fail(VF_ERR_NUMERICAL, e.what());
  } catch (const vefrac::IoError& e) {
    return fail(VF_ERR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(VF_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(VF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VF_ERR_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

vefrac::CrackSet resolve_set(const vefrac::Archive& a, const std::string& spec) {
  const auto body = std::string(vefrac::detail::trim(spec));
  if (body.rfind("step:", 0) == 0) {
    const std::size_t i = vefrac::detail::parse_index(body.substr(5));
    if (i >= a.evolution.steps.size()) throw vefrac::ValidationError("step " + std::to_string(i) + " out of range");
    return a.evolution.steps[i].state;
  }
  std::vector<std::size_t> edges;
  for (const auto& tok : vefrac::detail::split_ws(body)) edges.push_back(vefrac::detail::parse_index(tok));
  for (std::size_t e : edges)
    if (e >= a.config.mesh->num_edges()) throw vefrac::ValidationError("edge " + std::to_string(e) + " out of range");
  return vefrac::CrackSet(a.config.mesh, edges);
}

std::string set_text(const vefrac::CrackSet& k) {
  std::string s = "{";
  const auto e = k.edge_list();
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? " " : "") + std::to_string(e[i]);
  return s + "}";
}

}  // namespace

extern "C" {

const char* vf_version(void) { return "1.0.0"; }

const char* vf_last_error(void) { return last_error.c_str(); }

void vf_string_free(char* s) { std::free(s); }

vf_status vf_config_load(const char* path, vf_config** out) {
  if (!path || !out) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] { *out = new vf_config{vefrac::load_config(path)}; });
}

vf_status vf_config_parse(const char* text, const char* base_dir, vf_config** out) {
  if (!text || !out) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] { *out = new vf_config{vefrac::parse_config(text, base_dir ? base_dir : ".")}; });
}

vf_status vf_config_set(vf_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] { vefrac::set_config_value(cfg->cfg, key, value); });
}

vf_status vf_config_output_dir(const vf_config* cfg, char** out) {
  if (!cfg || !out) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] { *out = dup(cfg->cfg.output); });
}

void vf_config_free(vf_config* cfg) { delete cfg; }

vf_status vf_run(const vf_config* cfg, vf_archive** out) {
  if (!cfg || !out) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] { *out = new vf_archive{vefrac::run_config(cfg->cfg)}; });
}

vf_status vf_archive_load(const char* path, vf_archive** out) {
  if (!path || !out) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] { *out = new vf_archive{vefrac::load_archive(path)}; });
}

vf_status vf_archive_save(const vf_archive* a, const char* path) {
  if (!a || !path) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] { vefrac::save_archive(a->archive, path); });
}

vf_status vf_archive_json(const vf_archive* a, char** out) {
  if (!a || !out) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] { *out = dup(vefrac::archive_to_string(a->archive)); });
}

vf_status vf_archive_reaudit(vf_archive* a) {
  if (!a) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] { vefrac::reaudit(a->archive); });
}

vf_status vf_archive_summary(const vf_archive* a, char** out) {
  if (!a || !out) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] { *out = dup(vefrac::audit_text(a->archive)); });
}

vf_status vf_archive_stats(const vf_archive* a, vf_run_stats* out) {
  if (!a || !out) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] {
    const auto& ar = a->archive;
    const auto& steps = ar.evolution.steps;
    vf_run_stats s{};
    s.samples = steps.size();
    s.jumps = ar.jumps.size();
    s.first_change = vefrac::first_change(ar.evolution);
    s.first_change_time = s.first_change < steps.size() ? steps[s.first_change].t : -1.0;
    s.final_h1 = steps.empty() ? 0.0 : vefrac::h1_measure(steps.back().state);
    s.max_components = ar.audits.components.max_components;
    s.viscous = ar.evolution.viscous;
    s.balance_ok = ar.audits.balance.forms_agree && ar.audits.balance.upper_ok;
    s.jumps_ok = 1;
    for (const auto& r : ar.audits.jump_conditions) s.jumps_ok = s.jumps_ok && r.ok;
    s.stable_off_jumps = ar.audits.stable_off_jumps;
    s.power_bound_ok = ar.audits.power_excess <= 0.0;
    s.component_bound_ok = ar.audits.components.violations == 0;
    *out = s;
  });
}

vf_status vf_archive_plot(const vf_archive* a, const char* kind, char** out) {
  if (!a || !kind || !out) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] { *out = dup(vefrac::emit_plot_data(a->archive, kind)); });
}

vf_status vf_archive_griffith(vf_archive* a, const char* paths, char** csv, char** summary) {
  if (!a || !paths || !csv || !summary) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] {
    auto& ar = a->archive;
    if (ar.evolution.steps.empty()) throw vefrac::ValidationError("archive has no steps");
    vefrac::RunConfig cfg = ar.config;
    vefrac::set_config_value(cfg, "griffith.paths", paths);
    const vefrac::Prepared prep = vefrac::prepare(cfg);
    const auto tips = vefrac::make_tip_paths(ar.evolution.steps.front().state, cfg.tip_paths);
    auto rep = vefrac::griffith_report(ar.evolution, tips, *prep.model);
    ar.config.tip_paths = cfg.tip_paths;
    ar.griffith = std::move(rep);
    char* c = dup(vefrac::griffith_csv(*ar.griffith));
    try {
      *summary = dup(vefrac::audit_text(ar));
    } catch (...) {
      std::free(c);
      throw;
    }
    *csv = c;
  });
}

vf_status vf_archive_jump_cost(const vf_archive* a, double t, const char* left, const char* right, char** report) {
  if (!a || !left || !right || !report) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] {
    const auto& ar = a->archive;
    const vefrac::Prepared prep = vefrac::prepare(ar.config);
    const auto km = resolve_set(ar, left);
    const auto kp = resolve_set(ar, right);
    if (!km.subset_of(kp)) throw vefrac::ValidationError("left set is not contained in the right set");
    const auto res = vefrac::jump_cost(t, km, kp, prep.instance);
    std::ostringstream os;
    using vefrac::detail::format_double;
    os << "t " << format_double(t) << "\n";
    os << "cost " << (res.cost.is_infinite() ? std::string("inf") : format_double(res.cost.value())) << "\n";
    os << "incremental " << format_double(vefrac::incremental_jump_cost(t, km, kp, prep.instance)) << "\n";
    os << "lattice nodes " << res.lattice_nodes << "\n";
    os << "chain";
    for (const auto& k : res.chain) os << " " << set_text(k);
    os << "\n";
    for (const auto& h : res.hops)
      os << "hop " << set_text(h.from) << " -> " << set_text(h.to) << " R " << format_double(h.r) << " H1 "
         << format_double(h.h1) << " Delta " << format_double(h.delta) << " alpha " << format_double(h.alpha)
         << " weight " << format_double(h.weight) << "\n";
    for (const auto& s : res.segments)
      os << "segment " << s.first << ".." << s.last << " " << vefrac::to_string(s.kind) << " recursion violations "
         << s.recursion_violations.size() << "\n";
    *report = dup(os.str());
  });
}

void vf_archive_free(vf_archive* a) { delete a; }

vf_status vf_benchmark_names(char** out) {
  if (!out) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] {
    std::string s;
    for (const auto& n : vefrac::benchmark_names()) s += n + "\n";
    *out = dup(s);
  });
}

vf_status vf_generate_benchmark(const char* name, const char* dir) {
  if (!name || !dir) return fail(VF_ERR_ARGUMENT, "null argument");
  return guard([&] { vefrac::write_benchmark(name, dir); });
}

}  // extern "C"
