/* C interface of the vefrac shared library. Every function returns a
 * vf_status; on failure vf_last_error() describes the problem. Strings
 * returned through char** are owned by the caller and released with
 * vf_string_free. Handles are not thread-safe; distinct handles are. */
#ifndef VEFRAC_H
#define VEFRAC_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define VF_API __declspec(dllexport)
#else
#define VF_API __attribute__((visibility("default")))
#endif

typedef enum vf_status {
  VF_OK = 0,
  VF_ERR_VALIDATION = 1, /* bad input: config, archive, edge lists */
  VF_ERR_NUMERICAL = 2,  /* solver failure, lattice caps */
  VF_ERR_IO = 3,
  VF_ERR_ARGUMENT = 4, /* null handle or pointer */
  VF_ERR_INTERNAL = 5
} vf_status;

typedef struct vf_config vf_config;
typedef struct vf_archive vf_archive;

typedef struct vf_run_stats {
  size_t samples;
  size_t jumps;
  size_t first_change; /* == samples when the crack never moves */
  double first_change_time;
  double final_h1;
  size_t max_components;
  int viscous;
  int balance_ok; /* forms agree and upper estimate holds */
  int jumps_ok;
  int stable_off_jumps;
  int power_bound_ok;
  int component_bound_ok;
} vf_run_stats;

VF_API const char* vf_version(void);
/* Message of the last failure on the calling thread. */
VF_API const char* vf_last_error(void);
VF_API void vf_string_free(char* s);

VF_API vf_status vf_config_load(const char* path, vf_config** out);
VF_API vf_status vf_config_parse(const char* text, const char* base_dir, vf_config** out);
/* key is "section.name", e.g. "dissipation.lambda". */
VF_API vf_status vf_config_set(vf_config* cfg, const char* key, const char* value);
VF_API vf_status vf_config_output_dir(const vf_config* cfg, char** out);
VF_API void vf_config_free(vf_config* cfg);

VF_API vf_status vf_run(const vf_config* cfg, vf_archive** out);
VF_API vf_status vf_archive_load(const char* path, vf_archive** out);
VF_API vf_status vf_archive_save(const vf_archive* a, const char* path);
/* JSON text, byte-identical to what vf_archive_save writes. */
VF_API vf_status vf_archive_json(const vf_archive* a, char** out);
/* Recomputes jump detection and audits from the stored configuration. */
VF_API vf_status vf_archive_reaudit(vf_archive* a);
VF_API vf_status vf_archive_summary(const vf_archive* a, char** out);
VF_API vf_status vf_archive_stats(const vf_archive* a, vf_run_stats* out);
/* kind: energy, dissipation, tips, balance. */
VF_API vf_status vf_archive_plot(const vf_archive* a, const char* kind, char** out);
/* Computes and stores the tip report; paths are edge lists separated by ';'. */
VF_API vf_status vf_archive_griffith(vf_archive* a, const char* paths, char** csv, char** summary);
/* Transition cost between two crack sets at time t. Each set is either an
 * edge list ("3 4 9") or "step:<i>" for the state of step i. */
VF_API vf_status vf_archive_jump_cost(const vf_archive* a, double t, const char* left, const char* right,
                                      char** report);
VF_API void vf_archive_free(vf_archive* a);

/* Newline-separated names of the shipped benchmarks. */
VF_API vf_status vf_benchmark_names(char** out);
/* Writes <name>.ini, .mesh and .profile into dir. */
VF_API vf_status vf_generate_benchmark(const char* name, const char* dir);

#ifdef __cplusplus
}
#endif

#endif
