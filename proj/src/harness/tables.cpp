#include "qpse/harness/tables.hpp"

#include "qpse/errors.hpp"

namespace qpse::harness {

std::vector<std::string> table_names() { return {"table1", "table2", "table3", "table4"}; }

ExperimentConfig table_config(const std::string& name, bool paper_scale) {
  ExperimentConfig c;
  c.taylor_order = 5;
  c.alignment = ErrorAlignment::Aliased;
  c.embedding = torus::EmbedMode::Alias;
  if (name == "table1") {
    c.problem = "1d-sqrt3";
    c.study = StudyKind::Spatial;
    c.methods = {Method::PM, Method::QSM};
    c.N = {2, 4, 8, 16, 32};
    c.tau = {1e-6};
    c.reference = ReferenceSpec{Method::PM, 128, 1e-8, std::nullopt, false};
  } else if (name == "table2") {
    c.problem = "1d-sqrt3";
    c.study = StudyKind::Temporal;
    c.methods = {Method::PM};
    c.N = {128};
    c.tau = {1e-3, 5e-4, 2.5e-4, 1.25e-4};
    // 1e5 steps at tau = 1e-8 accumulate ~1e-11 of FFT roundoff, which bends
    // the last order; at 1e-7 the time error is ~1e-17 and roundoff ~1e-12.
    c.reference = ReferenceSpec{Method::PM, 128, 1e-7, std::nullopt, false};
  } else if (name == "table3") {
    c.problem = "2d-octagonal";
    c.study = StudyKind::Spatial;
    c.methods = {Method::PM};
    c.tau = {1e-6};
    if (paper_scale) {
      c.N = {4, 8, 16, 32};
      c.reference = ReferenceSpec{Method::PM, 64, 1e-7, std::nullopt, false};
    } else {
      c.N = {2, 4, 8};
      c.reference = ReferenceSpec{Method::PM, 16, 1e-7, std::nullopt, false};
    }
  } else if (name == "table4") {
    c.problem = "2d-octagonal";
    c.study = StudyKind::Temporal;
    c.methods = {Method::PM};
    c.N = {16};
    c.tau = {1e-3, 5e-4, 2.5e-4, 1.25e-4};
    // Same-N reference: the temporal table isolates the time error at h = pi/16.
    c.reference = ReferenceSpec{Method::PM, 16, 1e-7, std::nullopt, false};
  } else {
    throw ConfigError("unknown table '" + name + "' (table1..table4)");
  }
  return c;
}

}  // namespace qpse::harness
