#pragma once

#include <cstddef>
#include <functional>

namespace geoloc {

/// Runs fn(i) for every i in [0, count) on at most `jobs` threads (0 means
/// one per hardware thread). Work is claimed by index, so anything written to
/// slot i is independent of scheduling. If calls throw, the exception from
/// the lowest index is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace geoloc
