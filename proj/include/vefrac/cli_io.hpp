#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vefrac/audits.hpp"
#include "vefrac/elastic.hpp"
#include "vefrac/evolution.hpp"
#include "vefrac/griffith.hpp"

namespace vefrac {

inline constexpr const char* kSchema = "ve-fracture/1";

enum class PoolKind { AllInterior, Paths, Seeds };

struct RunConfig {
  MeshPtr mesh;
  std::string mesh_source;  // file name as written, informational
  std::vector<double> profile;
  std::string profile_source;
  Amplitude amplitude = Amplitude::linear(0.0, 1.0);
  std::vector<std::size_t> initial;

  DissipationParams params;

  double horizon = 1.0;
  std::size_t steps = 50;
  std::vector<double> times;  // explicit partition; overrides horizon/steps
  std::vector<double> refine_points;
  std::size_t refine_levels = 0;

  PoolKind pool = PoolKind::AllInterior;
  std::vector<std::vector<std::size_t>> paths;
  std::vector<std::size_t> seeds;
  std::size_t budget = 3;
  bool greedy = false;
  unsigned threads = 1;

  double stability_tol = 1e-9;
  double solver_tol = 1e-10;
  double hausdorff_resolution = 0.0;
  double balance_tol = 1e-8;
  double jump_threshold = 10.0;

  bool viscous = true;
  std::string output = "out";

  std::vector<std::vector<std::size_t>> tip_paths;  // non-empty enables the Griffith report
};

// INI-like text: `[section]` headers, `key = value` lines, `#` comments.
// Relative file names resolve against `base_dir`.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);
// Overrides one `section.key` entry, validating as the parser does.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
// Text that parse_config reads back to the same configuration, with the mesh
// and profile referenced by the given file names.
std::string write_config(const RunConfig& cfg, const std::string& mesh_file, const std::string& profile_file);

// Everything needed to run a configuration.
struct Prepared {
  std::shared_ptr<const EnergyModel> model;
  RisInstance instance;
  CrackSet k0;
  TimePartition partition;
  double c_p = 0.0;
};

Prepared prepare(const RunConfig& cfg);

struct AuditSummary {
  BalanceReport balance;
  std::vector<JumpConditionRow> jump_conditions;
  ComponentReport components;
  GronwallReport gronwall;
  double c_p = 0.0;
  double power_excess = 0.0;
  double jump_variation = 0.0;
  double max_r_off_jumps = 0.0;
  bool stable_off_jumps = true;
};

struct Archive {
  RunConfig config;
  DiscreteEvolution evolution;
  std::vector<JumpRecord> jumps;
  AuditSummary audits;
  std::optional<GriffithReport> griffith;
};

AuditSummary run_audits(const DiscreteEvolution& evo, const std::vector<JumpRecord>& jumps, const Prepared& prep,
                        const RunConfig& cfg);
Archive run_config(const RunConfig& cfg);
// Recomputes jumps and audits of a loaded archive from its configuration.
void reaudit(Archive& archive);

std::string archive_to_string(const Archive& archive);
Archive archive_from_string(const std::string& text);
void save_archive(const Archive& archive, const std::string& path);
Archive load_archive(const std::string& path);

// Kinds: energy, dissipation, tips, balance.
std::string emit_plot_data(const Archive& archive, const std::string& kind);

std::string audit_text(const Archive& archive);
std::size_t first_change(const DiscreteEvolution& evo);

// Shipped benchmark setups: griffith-strip, two-well, nucleation,
// hexagon-fan, affine-square.
std::vector<std::string> benchmark_names();
RunConfig benchmark_config(const std::string& name);
// Writes <name>.ini, <name>.mesh and <name>.profile into dir.
void write_benchmark(const std::string& name, const std::string& dir);

}  // namespace vefrac
