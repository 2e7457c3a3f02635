#pragma once

#include <string>
#include <vector>

#include "qpse/harness/config.hpp"

namespace qpse::harness {

/// Preset studies. "table1" (1D spatial, PM and QSM),
/// "table2" (1D temporal), "table3" (2D octagonal spatial), "table4" (2D
/// octagonal temporal). Desk scale shrinks the 2D reference to N_ref = 16,
/// tau_ref = 1e-7; the full-scale variant (--paper-scale) uses N_ref = 64 and needs a large machine.
ExperimentConfig table_config(const std::string& name, bool paper_scale = false);

std::vector<std::string> table_names();

}  // namespace qpse::harness
