#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gigo::verify {

struct PropertyResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;   // worst observed value of the property's metric
    double tolerance = 0.0;  // gate the metric is held against
    std::string detail;
};

/// Cross-module invariant suite on randomized instances drawn from `seed`:
/// Noether drift, exact-vs-Euler agreement, xNES = blockwise GIGO,
/// square-root independence, and the trajectory second derivatives against
/// finite differences. `tolerance_override` replaces every property's gate
/// when set.
std::vector<PropertyResult> run_verification_suite(std::uint64_t seed,
                                                   std::optional<double> tolerance_override);

}  // namespace gigo::verify
