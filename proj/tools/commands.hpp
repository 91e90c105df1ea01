#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"
#include "softdeco/checks.hpp"
#include "softdeco/whichpath.hpp"

namespace softdeco::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNotConverged = 2,
  kExitCheckFailed = 3,
};

/// One evaluated parameter point.
struct Evaluation {
  DecoherenceReport report;
  std::optional<Variant> summary_variant;  ///< which Gamma fed the which-path numbers
  WhichPathSummary summary;
};

/// Evaluate the requested variants. D and V_max come from the first
/// available of dressed, hard, sub, full.
Evaluation evaluate(const RunConfig& cfg);

/// Full report as JSON.
int cmd_gamma(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Column header of the sweep table.
extern const char* const kSweepHeader;

/// CSV sweep; rows are computed on `threads` workers and written in input order.
int cmd_sweep(const RunConfig& cfg, int threads, std::ostream& out, std::ostream& err);

/// Named pass/fail table of the invariant suite.
int cmd_check(const checks::CheckOptions& opt, int threads, std::ostream& out);

/// Experiment estimators as JSON; needs a slit block, a mirror block is optional.
int cmd_estimate_slit(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// printf("%.11e") for finite values.
std::string format_number(double x);

}  // namespace softdeco::app
