#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

namespace polylab {

/// Default cap on dense table sizes (entries), shared by tabulation, spectra
/// and exhaustive scans. Overridable per call and via the CLI.
constexpr std::size_t kDefaultTableBudget = std::size_t{1} << 26;

std::size_t default_table_budget();
void set_default_table_budget(std::size_t entries);

int thread_count();
void set_thread_count(int threads);

/// p^n if it fits under `cap`, otherwise nullopt.
std::optional<std::size_t> checked_pow(std::uint8_t p, int n, std::size_t cap);

/// p^n under the table budget, or a budget_error naming the caller.
std::size_t require_table_size(std::uint8_t p, int n, std::size_t budget, const char* what);

/// Runs fn(chunk_begin, chunk_end) over [0, total) split into a fixed number
/// of chunks, independent of the worker count, so floating-point merges are
/// thread-count-invariant. Workers own disjoint chunks.
void parallel_for_chunked(std::size_t total, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace polylab
