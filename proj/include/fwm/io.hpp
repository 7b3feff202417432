// io.hpp - CSV/JSON emission, run manifests and the small worker pool used by
// sweeps. Output formatting is deterministic so reruns are byte-identical.

#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "fwm/core.hpp"

namespace fwm {

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> meta;     // emitted as '# ...' header lines
    std::vector<std::string> columns;  // column names
    std::vector<std::vector<double>> rows;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);

// Numeric CSV reader for fit data files; '#' lines and the column header are
// skipped. Parse failures name the offending line.
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          std::size_t expected_columns);

void write_text(const std::filesystem::path& path, const std::string& text);

// Runs fn(0..n-1) on up to `jobs` worker threads. Exceptions from workers are
// rethrown on the caller; results must be written to per-index slots so the
// output order never depends on scheduling.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

// Default worker count: FWM_JOBS environment variable, else 1.
int default_jobs();

}  // namespace fwm
