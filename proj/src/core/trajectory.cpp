#include "qpse/trajectory.hpp"

#include <iomanip>
#include <ostream>

namespace qpse {

void write_trajectory(std::ostream& out, const Trajectory& trajectory) {
  const char* method = trajectory.method == MethodTag::PM    ? "pm"
                       : trajectory.method == MethodTag::QSM ? "qsm"
                                                             : "none";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "# method=" << method << "\n";
  out << "step,time,l2_norm,wall_seconds\n";
  out << std::scientific << std::setprecision(16);
  for (const auto& r : trajectory.records) {
    out << r.step << ',' << r.time << ',' << r.l2_norm << ',' << r.wall_seconds << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace qpse
