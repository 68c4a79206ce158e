#pragma once

#include <iosfwd>

namespace nsga3oj {

/// Built-in invariant suite: closed-form front vs. enumeration, lattice
/// identities, and cover-number retention on a few canned runs. Writes one
/// line per check to `log`; returns true if all pass.
bool run_invariant_checks(std::ostream& log);

} // namespace nsga3oj
