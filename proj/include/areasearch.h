/* C interface to the area-search simulator, trainer, and benchmark
 * harness. All functions return as_status; AS_OK is 0. On failure,
 * as_last_error() describes the problem (thread-local). Handles are opaque
 * and must be released with the matching *_free call. */
#ifndef AREASEARCH_H
#define AREASEARCH_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum as_status {
  AS_OK = 0,
  AS_ERR = 1,
  AS_ERR_CONFIG = 2,
  AS_ERR_INFEASIBLE = 3,
  AS_ERR_NUMERIC = 4,
  AS_ERR_IO = 5
} as_status;

const char* as_last_error(void);
const char* as_status_name(as_status status);

/* ------------------------------------------------------------------ */
/* Simulator                                                           */

typedef struct as_sim as_sim;

typedef struct as_scenario {
  int width, height;
  int obstacles, targets, robots;
  int fov, comm, rad_e;
  int episode_len;
  uint64_t seed;
} as_scenario;

void as_scenario_defaults(as_scenario* out);
as_status as_scenario_preset(const char* name, int robots, uint64_t seed,
                             as_scenario* out);

as_status as_sim_generate(const as_scenario* scenario, as_sim** out);
as_status as_sim_load(const char* path, const as_scenario* defaults,
                      as_sim** out);
as_status as_sim_save(const as_sim* sim, const char* path);
void as_sim_free(as_sim* sim);

int as_sim_width(const as_sim* sim);
int as_sim_height(const as_sim* sim);
int as_sim_robot_count(const as_sim* sim);
/* 0 free, 1 obstacle, 2 target; -1 out of bounds */
int as_sim_cell(const as_sim* sim, int x, int y);
int as_sim_explored(const as_sim* sim, int x, int y);
int as_sim_covered(const as_sim* sim, int x, int y);
/* fills x,y,heading (0 N, 1 E, 2 S, 3 W) for a robot */
as_status as_sim_robot(const as_sim* sim, int robot_id, int* x, int* y,
                       int* heading);

as_status as_sim_initial_sense(as_sim* sim);
/* actions: 0 forward, 1 turn right, 2 backward, 3 turn left, 4 stop */
as_status as_sim_step(as_sim* sim, const int* actions, int n_actions);
as_status as_sim_counts(const as_sim* sim, int* explored_free,
                        int* free_cells, int* covered, int* targets);

/* ------------------------------------------------------------------ */
/* Runs (gen-map / train / eval / replay)                              */

typedef struct as_run as_run;

as_status as_run_create(as_run** out);
as_status as_run_load(const char* config_path, as_run** out);
/* key is "section.name" as in the config file, e.g. "scenario.preset",
 * "reward.alpha", "train.timesteps", "run.policy". */
as_status as_run_set(as_run* run, const char* key, const char* value);
as_status as_run_serialize(const as_run* run, char* buf, int buf_len);
void as_run_free(as_run* run);

as_status as_cmd_gen_map(const as_run* run, const char* out_path,
                         char* summary, int summary_len);
/* Trains to train.timesteps; writes checkpoint.bin and train_log.csv under
 * run.out_dir. Resumes from run.checkpoint when it points at a file. */
as_status as_cmd_train(const as_run* run);
/* Writes metrics.csv under run.out_dir. */
as_status as_cmd_eval(const as_run* run);
/* Writes replay.jsonl (and frames when run.render=1) under run.out_dir. */
as_status as_cmd_replay(const as_run* run);

#ifdef __cplusplus
}
#endif

#endif /* AREASEARCH_H */
