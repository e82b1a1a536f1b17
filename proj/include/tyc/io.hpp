#pragma once

#include <string>
#include <vector>

#include "tyc/bifurcation.hpp"
#include "tyc/grid.hpp"
#include "tyc/integrator.hpp"

namespace tyc {

// All emitted numbers use 15 significant digits with '.' as the decimal
// separator, independent of locale.
std::string fmt_num(double v);

// Single field: header "i,value" (1D) or "i,j,value" (2D), one row per
// cell, x index fastest.
void write_field_csv(const std::string& path, const Field& u, const Grid& g);
Field read_field_csv(const std::string& path, const Grid& g);

// Combined state: header "i[,j],f,m,s,r".
void write_state_csv(const std::string& path, const SimState& st, const Grid& g);
SimState read_state_csv(const std::string& path, const Grid& g);

// Norm time series: t, per-species L2 norms, per-species min/max.
void write_timeseries_csv(const std::string& path, const std::vector<NormSample>& series);

// Bifurcation diagram, one row per beta: analytic branch coordinates
// (nan when absent), asymptotic norms, convergence flag.
void write_bifurcation_csv(const std::string& path,
                           const std::vector<BifurcationRecord>& records);

} // namespace tyc
