#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace sbmeme {

/// "%.6g" rendering used by all report serialization.
std::string format_sig6(double v);

/// The double nearest to the 6-significant-digit decimal of v. Idempotent,
/// so reload-then-rewrite is byte stable.
double round_sig6(double v);

/// Shortest decimal that parses back to exactly v (corpus files).
std::string format_exact(double v);

/// Runs body(0..n-1) on `threads` workers. Results must be written to
/// per-index slots; the first exception is rethrown after all workers join.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body);

} // namespace sbmeme
