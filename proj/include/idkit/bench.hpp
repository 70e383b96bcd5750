#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "idkit/datasets.hpp"
#include "idkit/matrix.hpp"

namespace idkit {

enum class Algorithm { det_id, rand_id, svd_baseline };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view s);

/// One (dataset, algorithm, rank, repetition) measurement. `status` is "ok"
/// or the error text of a failed cell; failed cells keep their identifying
/// fields and zeroed measurements.
struct ExperimentRecord {
    std::string dataset;
    Algorithm algorithm = Algorithm::det_id;
    std::size_t rank = 0;
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    double relative_error = 0.0;
    double wall_time_s = 0.0;
    std::optional<double> max_abs_z; // absent for svd_baseline
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
};

/// Dataset registry entry: the source plus an optional protocol cap on the
/// tested rank (e.g. the smallest sparse matrix is only swept below 400).
struct BenchDataset {
    DatasetSpec spec;
    std::optional<std::size_t> max_rank;
};

/// {10, 30, 50, ..., 450, 470}
std::vector<std::size_t> default_rank_grid();

struct RunConfig {
    std::vector<BenchDataset> datasets;
    std::vector<Algorithm> algorithms = {Algorithm::det_id, Algorithm::rand_id,
                                         Algorithm::svd_baseline};
    std::vector<std::size_t> ranks = default_rank_grid();
    std::size_t repetitions = 10; // randomized cells only
    std::uint64_t base_seed = 0;
    std::filesystem::path out_dir; // where run_and_emit writes its artifacts
    double oversampling = 0.2;
    std::size_t warmup = 0;
    bool skip_timing = false; // error-only mode: no warm-up runs
    /// Receives skip/failure notices; defaults to stderr when empty.
    std::function<void(const std::string&)> notice;
};

/// Deterministic per-cell seed derived from the base seed and the cell key.
std::uint64_t cell_seed(std::uint64_t base, std::string_view dataset, Algorithm algorithm,
                        std::size_t rank, std::size_t repetition);

/// Run one cell: times exactly the factorization call with a monotonic
/// clock, then computes diagnostics on the result. Algorithm errors are
/// captured in the record's status instead of propagating.
ExperimentRecord run_cell(const Matrix& m, Algorithm algorithm, std::size_t rank,
                          std::uint64_t seed, double oversampling = 0.2,
                          std::size_t warmup = 0);

/// Full sweep over datasets × algorithms × ranks × repetitions. Cells whose
/// rank exceeds min(dims) or the dataset's max_rank are skipped with a
/// notice; datasets that fail to resolve are skipped likewise. Identical
/// configs produce identical error fields.
std::vector<ExperimentRecord> run_sweep(const RunConfig& config);

/// run_sweep plus records.csv, summary.txt, and charts/ under
/// config.out_dir.
std::vector<ExperimentRecord> run_and_emit(const RunConfig& config);

/// CSV with header dataset,algorithm,rank,repetition,seed,relative_error,
/// wall_time_s,max_abs_z,status; floats carry 17 significant digits; rows
/// ordered by (dataset, algorithm, rank, repetition).
void emit_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path);

/// Inverse of emit_csv; float fields round-trip bit-exactly.
std::vector<ExperimentRecord> parse_csv(const std::filesystem::path& path);

/// Per-dataset mean error / time / max |Z| per algorithm at the chosen rank,
/// randomized columns averaged over repetitions; emits an explicit notice
/// when no record matches the rank.
void emit_summary_tables(const std::vector<ExperimentRecord>& records, std::ostream& out,
                         std::size_t rank = 190);
void emit_summary_tables(const std::vector<ExperimentRecord>& records,
                         const std::filesystem::path& path, std::size_t rank = 190);

/// One SVG per dataset under dir: error-vs-rank and time-vs-rank panels,
/// one polyline + point markers per algorithm. Pure text output.
std::vector<std::filesystem::path> emit_charts(const std::vector<ExperimentRecord>& records,
                                               const std::filesystem::path& dir);

/// Re-check sweep invariants on records (used by `bench verify`): positive
/// wall times, SVD-dominance of both ID errors, deterministic errors across
/// det_id repetitions, det_id error monotone non-increasing in rank, and a
/// weak time-vs-rank trend (Spearman > 0) when enough ranks are present.
std::vector<std::string> verify_records(const std::vector<ExperimentRecord>& records);

} // namespace idkit
