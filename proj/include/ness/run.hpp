#ifndef NESS_RUN_HPP
#define NESS_RUN_HPP

#include "ness/config.hpp"

namespace ness {

/// Execute one configured experiment, writing its CSV data files, a summary
/// JSON and the effective-config echo into cfg.out_dir.
/// Returns 0 on success, 1 when a per-run assertion failed.
int run_experiment(const RunConfig& cfg);

}  // namespace ness

#endif
