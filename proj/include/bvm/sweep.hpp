#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bvm/bounds.hpp"
#include "bvm/examples.hpp"

namespace bvm {

struct SweepRow {
    std::size_t n = 0;
    std::string theorem;
    Metric metric = Metric::TV;
    StdKind standardization = StdKind::Mode;
    double bound = 0.0;
    double clamped = 0.0;
    double oracle = 0.0;
    double rel_err = 0.0;
    double bound_se = 0.0;
    double oracle_se = 0.0;
    std::uint64_t seed = 0;
};

struct SweepConfig {
    ExampleConfig example;
    std::vector<std::size_t> n_grid;  // sorted ascending
    std::uint64_t seed = 0;
    std::size_t empirical_batch = 500;  // 2-D Wasserstein estimate
    std::size_t empirical_reps = 20;
    ExpectOptions expect;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::string csv;  // header + one line per row, byte-stable for a fixed seed
};

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

// One seeded dataset of max(n_grid) observations; bounds and distance oracles
// evaluated on nested prefixes.
SweepResult run_sweep(const SweepConfig& cfg);

// Oracle distances between the standardized posterior and N(0, I) for one
// example at one summary. 2-D Wasserstein is the empirical estimate (band).
struct OraclePair {
    double tv = 0.0, tv_err = 0.0;
    double wass = 0.0, wass_err = 0.0;
    bool wass_is_band = false;
};
OraclePair oracle_distances(const ExampleSpec& ex, const DataSummary& summary,
                            StdKind kind, const SweepConfig& cfg);

// Relative-error curves (one polyline per theorem/metric series; Wasserstein
// in orange, total variation in blue), log-y optional.
std::string render_sweep_svg(const std::vector<SweepRow>& rows, bool log_y);

std::vector<SweepRow> parse_sweep_csv(const std::string& text);

}  // namespace bvm
