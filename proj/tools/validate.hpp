#pragma once

#include <iosfwd>

#include "dca/config.hpp"

namespace dca {

/// Hypothesis probes for the configured kernel pair plus the oracle
/// self-tests on seeded random small instances. Returns an exit code.
int cmd_validate(const RunConfig& cfg, std::ostream& log);

}  // namespace dca
