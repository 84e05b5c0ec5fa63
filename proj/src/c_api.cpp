#include "hdgflow.h"

#include "hdgflow/driver.hpp"
#include "hdgflow/errors.hpp"
#include "hdgflow/mesh.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <string>

namespace {

thread_local std::string g_last_error;

hfw_status fail(hfw_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <class Fn>
hfw_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(HFW_ERR_INVALID_ARGUMENT, e.what());
  } catch (const hdgflow::inadmissible_state_error& e) {
    return fail(HFW_ERR_INADMISSIBLE_STATE, e.what());
  } catch (const hdgflow::solver_error& e) {
    return fail(HFW_ERR_SOLVER_FAILURE, e.what());
  } catch (const hdgflow::topology_error& e) {
    return fail(HFW_ERR_INVALID_ARGUMENT, e.what());
  } catch (const hdgflow::io_error& e) {
    return fail(HFW_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(HFW_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(HFW_ERR_INTERNAL, "unknown error");
  }
}

void fill_summary(const hdgflow::RunSummary& s, hfw_run_summary* out) {
  if (!out) return;
  out->completed = s.completed ? 1 : 0;
  out->final_time = s.final_time;
  out->steps_accepted = s.steps_accepted;
  out->steps_rejected = s.steps_rejected;
  out->total_newton = s.total_newton;
  out->sum_error = s.sum_error;
  out->error_budget = s.error_budget;
  out->final_error = s.final_error;
  out->final_entropy_error = s.final_entropy_error;
  out->wall_seconds = s.wall_seconds;
  out->gmres_solves = s.gmres_solves;
  out->gmres_worst_rel_residual = s.gmres_worst_rel_residual;
  out->newton_failures = s.newton_failures;
  out->n_elements = s.n_elements;
  out->n_edges = s.n_edges;
  out->trace_dofs = s.trace_dofs;
}

} // namespace

struct hfw_config {
  hdgflow::RunConfig cfg;
};

extern "C" {

const char* hfw_status_name(hfw_status status) {
  switch (status) {
    case HFW_OK: return "ok";
    case HFW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case HFW_ERR_IO: return "i/o error";
    case HFW_ERR_SOLVER_FAILURE: return "solver failure";
    case HFW_ERR_INADMISSIBLE_STATE: return "inadmissible state";
    case HFW_ERR_RUN_INCOMPLETE: return "run incomplete";
    case HFW_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* hfw_last_error(void) { return g_last_error.c_str(); }

const char* hfw_version(void) { return "hdgflow 1.0.0"; }

hfw_config* hfw_config_create(void) { return new (std::nothrow) hfw_config(); }

void hfw_config_free(hfw_config* cfg) { delete cfg; }

hfw_status hfw_config_load_file(hfw_config* cfg, const char* path) {
  if (!cfg || !path) return fail(HFW_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    hdgflow::RunConfig parsed = hdgflow::parse_config_file(path);
    // keep CLI-style semantics: the file fully replaces previously loaded keys
    // it mentions, leaving other fields as they were
    cfg->cfg = parsed;
    return HFW_OK;
  });
}

hfw_status hfw_config_set(hfw_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(HFW_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    hdgflow::apply_override(cfg->cfg, key, value);
    return HFW_OK;
  });
}

hfw_status hfw_config_get(const hfw_config* cfg, const char* key, char* buffer, size_t size,
                          size_t* needed) {
  if (!cfg || !key) return fail(HFW_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> hfw_status {
    hdgflow::RunConfig resolved = cfg->cfg;
    resolved.resolve();
    const auto kv = resolved.as_key_values();
    const auto it = kv.find(key);
    if (it == kv.end())
      return fail(HFW_ERR_INVALID_ARGUMENT, std::string("unknown config field '") + key + "'");
    if (needed) *needed = it->second.size() + 1;
    if (!buffer || size < it->second.size() + 1)
      return fail(HFW_ERR_INVALID_ARGUMENT, "buffer too small");
    std::memcpy(buffer, it->second.c_str(), it->second.size() + 1);
    return HFW_OK;
  });
}

hfw_status hfw_run(const hfw_config* cfg, hfw_run_summary* summary) {
  if (!cfg) return fail(HFW_ERR_INVALID_ARGUMENT, "null config");
  return guarded([&]() -> hfw_status {
    const hdgflow::RunArtifacts art = hdgflow::run_simulation(cfg->cfg);
    fill_summary(art.summary, summary);
    if (!art.summary.completed)
      return fail(HFW_ERR_RUN_INCOMPLETE, art.summary.failure_reason);
    return HFW_OK;
  });
}

hfw_status hfw_study(const hfw_config* cfg, int levels) {
  if (!cfg) return fail(HFW_ERR_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    hdgflow::StudySpec spec;
    spec.levels = levels;
    hdgflow::convergence_study(cfg->cfg, spec);
    return HFW_OK;
  });
}

hfw_status hfw_compare(const hfw_config* cfg, const char* integrators_csv) {
  if (!cfg || !integrators_csv) return fail(HFW_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<std::string> names;
    std::istringstream ss(integrators_csv);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) names.push_back(item);
    hdgflow::compare_integrators(cfg->cfg, names);
    return HFW_OK;
  });
}

hfw_status hfw_mesh_gen(int nx, int ny, double xmin, double ymin, double xmax, double ymax,
                        const char* path) {
  if (!path) return fail(HFW_ERR_INVALID_ARGUMENT, "null path");
  return guarded([&] {
    const hdgflow::Mesh mesh =
        hdgflow::generate_structured(nx, ny, hdgflow::BBox{xmin, ymin, xmax, ymax});
    hdgflow::write_mesh_file(mesh, path);
    return HFW_OK;
  });
}

} // extern "C"
