#pragma once

#include <string>

#include <json.hpp>

#include "sectorpass/config.hpp"

namespace sectorpass {

struct RunOptions {
  std::string out_dir = "out";
  bool timings = true;
};

// Executes one pipeline stage set and writes artifacts plus report.json
// under out_dir.  Subcommands: check-hypotheses, solve-sector,
// moser-limits, assemble, full.  Returns the report; report["invariants"]
// ["ok"] is false when a verified property failed (the CLI exits nonzero).
nlohmann::ordered_json run_pipeline(const std::string& subcommand, const RunConfig& cfg,
                                    const RunOptions& opts);

}  // namespace sectorpass
