// Command-line front end; talks to the library through the C interface only.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vefrac/vefrac.h"

namespace {

namespace fs = std::filesystem;

// Exit codes: 0 ok, 1 bad input, 2 numerical failure.
int exit_code(vf_status s) { return s == VF_OK ? 0 : s == VF_ERR_NUMERICAL ? 2 : 1; }

struct Failure {
  vf_status status;
};

void check(vf_status s) {
  if (s != VF_OK) throw Failure{s};
}

struct ConfigPtr {
  vf_config* p = nullptr;
  ~ConfigPtr() { vf_config_free(p); }
};

struct ArchivePtr {
  vf_archive* p = nullptr;
  ~ArchivePtr() { vf_archive_free(p); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  vf_string_free(s);
  return out;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) {
    std::cerr << "error: cannot write " << p.string() << "\n";
    throw Failure{VF_ERR_IO};
  }
}

void load_config(const std::string& path, ConfigPtr& cfg) { check(vf_config_load(path.c_str(), &cfg.p)); }

std::string summary(const ArchivePtr& a) {
  char* s = nullptr;
  check(vf_archive_summary(a.p, &s));
  return take(s);
}

vf_run_stats stats(const ArchivePtr& a) {
  vf_run_stats s{};
  check(vf_archive_stats(a.p, &s));
  return s;
}

int cmd_run(const std::string& config, const std::string& output_override) {
  ConfigPtr cfg;
  load_config(config, cfg);
  if (!output_override.empty()) check(vf_config_set(cfg.p, "run.output", output_override.c_str()));
  char* od = nullptr;
  check(vf_config_output_dir(cfg.p, &od));
  const fs::path out = take(od);
  ArchivePtr a;
  check(vf_run(cfg.p, &a.p));
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) {
    std::cerr << "error: cannot create " << out.string() << ": " << ec.message() << "\n";
    return 1;
  }
  check(vf_archive_save(a.p, (out / "archive.json").string().c_str()));
  for (const char* kind : {"energy", "dissipation", "balance", "tips"}) {
    char* csv = nullptr;
    const vf_status s = vf_archive_plot(a.p, kind, &csv);
    if (s == VF_OK) write_file(out / (std::string(kind) + ".csv"), take(csv));
  }
  std::cout << summary(a) << "archive written to " << (out / "archive.json").string() << "\n";
  return 0;
}

int cmd_audit(const std::string& archive) {
  ArchivePtr a;
  check(vf_archive_load(archive.c_str(), &a.p));
  check(vf_archive_reaudit(a.p));
  std::cout << summary(a);
  return 0;
}

int cmd_jumpcost(const std::string& archive, double t, const std::string& left, const std::string& right) {
  ArchivePtr a;
  check(vf_archive_load(archive.c_str(), &a.p));
  char* rep = nullptr;
  check(vf_archive_jump_cost(a.p, t, left.c_str(), right.c_str(), &rep));
  std::cout << take(rep);
  return 0;
}

int cmd_griffith(const std::string& archive, const std::string& paths, const std::string& csv_out) {
  ArchivePtr a;
  check(vf_archive_load(archive.c_str(), &a.p));
  char* csv = nullptr;
  char* sum = nullptr;
  check(vf_archive_griffith(a.p, paths.c_str(), &csv, &sum));
  const std::string table = take(csv);
  if (csv_out.empty()) {
    std::cout << table;
  } else {
    write_file(csv_out, table);
    std::cout << "tip report written to " << csv_out << "\n";
  }
  std::cout << take(sum);
  return 0;
}

void print_row(const std::string& label, const vf_run_stats& s) {
  std::printf("%-24s %-9s %8zu %6zu %12zu %12.6g %10.6g %4s %4s %4s\n", label.c_str(),
              s.viscous ? "ve" : "energetic", s.samples, s.jumps, s.first_change, s.first_change_time, s.final_h1,
              s.balance_ok ? "ok" : "FAIL", s.jumps_ok ? "ok" : "FAIL", s.stable_off_jumps ? "ok" : "FAIL");
}

void print_header() {
  std::printf("%-24s %-9s %8s %6s %12s %12s %10s %4s %4s %4s\n", "run", "mode", "samples", "jumps", "first_change",
              "t_change", "final_H1", "bal", "jmp", "stab");
}

int cmd_compare(const std::string& a_path, const std::string& b_path) {
  ConfigPtr ca, cb;
  load_config(a_path, ca);
  load_config(b_path, cb);
  ArchivePtr a, b;
  check(vf_run(ca.p, &a.p));
  check(vf_run(cb.p, &b.p));
  const auto sa = stats(a), sb = stats(b);
  print_header();
  print_row("A " + fs::path(a_path).filename().string(), sa);
  print_row("B " + fs::path(b_path).filename().string(), sb);
  if (sa.first_change < sb.first_change) std::cout << "A changes first\n";
  else if (sb.first_change < sa.first_change) std::cout << "B changes first\n";
  else std::cout << "both change at the same index\n";
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& param, const std::vector<std::string>& values) {
  print_header();
  for (const auto& v : values) {
    ConfigPtr cfg;
    load_config(config, cfg);
    check(vf_config_set(cfg.p, param.c_str(), v.c_str()));
    for (const char* mode : {"ve", "energetic"}) {
      check(vf_config_set(cfg.p, "run.mode", mode));
      ArchivePtr a;
      check(vf_run(cfg.p, &a.p));
      print_row(param + "=" + v, stats(a));
    }
  }
  return 0;
}

int cmd_generate(const std::vector<std::string>& names, const std::string& dir) {
  std::vector<std::string> list = names;
  if (list.empty() || (list.size() == 1 && list[0] == "all")) {
    char* s = nullptr;
    check(vf_benchmark_names(&s));
    std::istringstream in(take(s));
    list.clear();
    for (std::string n; std::getline(in, n);)
      if (!n.empty()) list.push_back(n);
  }
  for (const auto& n : list) {
    check(vf_generate_benchmark(n.c_str(), dir.c_str()));
    std::cout << "wrote " << (fs::path(dir) / (n + ".ini")).string() << "\n";
  }
  return 0;
}

int cmd_plot(const std::string& archive, const std::string& kind) {
  ArchivePtr a;
  check(vf_archive_load(archive.c_str(), &a.p));
  char* csv = nullptr;
  check(vf_archive_plot(a.p, kind.c_str(), &csv));
  std::cout << take(csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visco-energetic brittle fracture in antiplane shear"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vf_version()));

  std::string config, config_b, archive, output, left, right, paths, param, csv_out, kind, dir = "benchmarks";
  double t = 0.0;
  std::vector<std::string> values, names;

  auto* run = app.add_subcommand("run", "run a configuration and write the archive");
  run->add_option("config", config, "configuration file")->required();
  run->add_option("-o,--output", output, "output directory (overrides run.output)");

  auto* audit = app.add_subcommand("audit", "recompute and print the audits of an archive");
  audit->add_option("archive", archive, "archive file")->required();

  auto* jc = app.add_subcommand("jumpcost", "transition cost between two crack sets");
  jc->add_option("archive", archive, "archive file")->required();
  jc->add_option("--time", t, "time")->required();
  jc->add_option("--left", left, "edge list or step:<i>")->required();
  jc->add_option("--right", right, "edge list or step:<i>")->required();

  auto* gr = app.add_subcommand("griffith", "tip tracking and Griffith conditions for an archive");
  gr->add_option("archive", archive, "archive file")->required();
  gr->add_option("--paths", paths, "tip paths: edge lists separated by ';'")->required();
  gr->add_option("--csv", csv_out, "write the tip table here instead of standard output");

  auto* cmp = app.add_subcommand("compare", "run two configurations side by side");
  cmp->add_option("configA", config, "first configuration")->required();
  cmp->add_option("configB", config_b, "second configuration")->required();

  auto* sw = app.add_subcommand("sweep", "run a configuration over values of one key, in both modes");
  sw->add_option("config", config, "configuration file")->required();
  sw->add_option("--param", param, "section.key to vary")->required();
  sw->add_option("--values", values, "values")->required()->delimiter(',');

  auto* gen = app.add_subcommand("generate", "write shipped benchmark inputs");
  gen->add_option("names", names, "benchmark names, or all");
  gen->add_option("--dir", dir, "target directory");

  auto* plot = app.add_subcommand("plot", "print plot data of an archive as CSV");
  plot->add_option("archive", archive, "archive file")->required();
  plot->add_option("--kind", kind, "energy, dissipation, tips or balance")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*run) return cmd_run(config, output);
    if (*audit) return cmd_audit(archive);
    if (*jc) return cmd_jumpcost(archive, t, left, right);
    if (*gr) return cmd_griffith(archive, paths, csv_out);
    if (*cmp) return cmd_compare(config, config_b);
    if (*sw) return cmd_sweep(config, param, values);
    if (*gen) return cmd_generate(names, dir);
    if (*plot) return cmd_plot(archive, kind);
  } catch (const Failure& f) {
    const char* msg = vf_last_error();
    if (msg && *msg) std::cerr << "error: " << msg << "\n";
    return exit_code(f.status);
  }
  return 1;
}
