#pragma once

#include <cstdint>
#include <ostream>

namespace dayflow {

// Runs a seeded sample of the library's invariants (associativity,
// convolution identities, residual identity, LP sandwich) and prints one
// PASS/FAIL line per check. Returns true when every check passes.
bool run_selftest(std::uint64_t seed, std::ostream& out);

}  // namespace dayflow
