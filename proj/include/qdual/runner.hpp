#pragma once

#include "qdual/config.hpp"

namespace qdual {

// Executes the configured experiment and writes its artifacts into the
// config's output directory: <experiment>.csv, <experiment>-peaks.csv,
// <experiment>.json and plot.gp (hhg-spectrum adds hhg-spectrum-spectrum.csv).
// Outputs are deterministic for identical configs. Filesystem failures throw
// IoError; numerical failures propagate with their own types.
void run(const RunConfig& config);

}  // namespace qdual
