#pragma once

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace ilfd::cli {

// Each command writes its CSV tables either to `out` or, when cfg.out is
// set, to files in that directory. Errors propagate as ilfd::Error.
void cmd_limit_cycle(const RunConfig& cfg, std::ostream& out);
void cmd_wronskian(const RunConfig& cfg, std::ostream& out);
void cmd_coeffs(const RunConfig& cfg, std::ostream& out);
void cmd_tongues(const RunConfig& cfg, std::ostream& out);
void cmd_staircase(const RunConfig& cfg, std::ostream& out);
void cmd_fit(const RunConfig& cfg, std::ostream& out);
void cmd_report(const RunConfig& cfg, std::ostream& out);

}  // namespace ilfd::cli
