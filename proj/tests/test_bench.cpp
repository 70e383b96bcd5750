#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>
#include <unistd.h>

#include "idkit/bench.hpp"
#include "support/oracles.hpp"

using namespace idkit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("idkit-bench-" + std::to_string(::getpid()) + "-" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

RunConfig small_config(std::vector<Algorithm> algorithms, std::vector<std::size_t> ranks,
                       std::size_t reps = 2) {
    RunConfig config;
    config.datasets.push_back(
        {DatasetSpec{"gauss-small", GeneratorSource{GeneratorKind::gaussian, 24, 30, 5}},
         std::nullopt});
    config.algorithms = std::move(algorithms);
    config.ranks = std::move(ranks);
    config.repetitions = reps;
    config.base_seed = 99;
    config.notice = [](const std::string&) {};
    return config;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("run_cell is deterministic for det_id") {
    const Matrix m = oracles::gaussian_matrix(20, 25, 1);
    const ExperimentRecord a = run_cell(m, Algorithm::det_id, 5, 7);
    const ExperimentRecord b = run_cell(m, Algorithm::det_id, 5, 7);
    REQUIRE(a.ok());
    CHECK(std::memcmp(&a.relative_error, &b.relative_error, sizeof(double)) == 0);
    CHECK(a.max_abs_z.has_value());
    CHECK(a.wall_time_s > 0.0);
}

TEST_CASE("svd_baseline at full rank of a full-rank matrix is exact") {
    const Matrix m = oracles::gaussian_matrix(12, 18, 2);
    const ExperimentRecord r = run_cell(m, Algorithm::svd_baseline, 12, 0);
    REQUIRE(r.ok());
    CHECK(r.relative_error <= 1e-10);
    CHECK_FALSE(r.max_abs_z.has_value());
}

TEST_CASE("failed cells carry their error instead of throwing") {
    const Matrix zero(6, 6); // rank deficient for any k
    const ExperimentRecord r = run_cell(zero, Algorithm::det_id, 2, 0);
    CHECK_FALSE(r.ok());
    CHECK(r.status.find("positive") != std::string::npos);
    CHECK(r.status.find(',') == std::string::npos); // CSV-safe
}

TEST_CASE("sweep cardinality: one dataset, det only, three ranks") {
    const auto records = run_sweep(small_config({Algorithm::det_id}, {2, 5, 9}));
    CHECK(records.size() == 3);
    for (const auto& r : records) {
        CHECK(r.dataset == "gauss-small");
        CHECK(r.algorithm == Algorithm::det_id);
        CHECK(r.repetition == 0);
        CHECK(r.ok());
    }
}

TEST_CASE("sweep cardinality counts repetitions for rand_id only") {
    const auto records = run_sweep(small_config(
        {Algorithm::det_id, Algorithm::rand_id, Algorithm::svd_baseline}, {3, 7}, 4));
    // per rank: 1 det + 4 rand + 1 svd = 6
    CHECK(records.size() == 12);
}

TEST_CASE("ranks above min(dims) and above the dataset cap are skipped with notices") {
    RunConfig config = small_config({Algorithm::det_id}, {2, 5, 9, 26});
    config.datasets[0].max_rank = 6;
    std::vector<std::string> notices;
    config.notice = [&](const std::string& msg) { notices.push_back(msg); };
    const auto records = run_sweep(config);
    CHECK(records.size() == 2); // ranks 2 and 5 survive
    REQUIRE(notices.size() == 2);
    CHECK(notices[0].find("rank cap") != std::string::npos);  // 9 > cap 6
    CHECK(notices[1].find("min(dims)") != std::string::npos); // 26 > 24
}

TEST_CASE("reruns with the same base seed give identical error fields") {
    const RunConfig config =
        small_config({Algorithm::det_id, Algorithm::rand_id}, {3, 6}, 3);
    const auto a = run_sweep(config);
    const auto b = run_sweep(config);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].seed == b[i].seed);
        CHECK(std::memcmp(&a[i].relative_error, &b[i].relative_error, sizeof(double)) == 0);
    }
}

TEST_CASE("unresolvable datasets are skipped, not fatal") {
    RunConfig config = small_config({Algorithm::det_id}, {2});
    config.datasets.push_back(
        {DatasetSpec{"ghost", MatrixMarketSource{"/nonexistent/ghost.mtx"}}, std::nullopt});
    std::vector<std::string> notices;
    config.notice = [&](const std::string& msg) { notices.push_back(msg); };
    const auto records = run_sweep(config);
    CHECK(records.size() == 1);
    REQUIRE(notices.size() == 1);
    CHECK(notices[0].find("ghost") != std::string::npos);
}

TEST_CASE("emit_csv writes a header-only file for no records") {
    TempDir tmp;
    const fs::path file = tmp.path / "empty.csv";
    emit_csv({}, file);
    const std::string text = slurp(file);
    CHECK(text ==
          "dataset,algorithm,rank,repetition,seed,relative_error,wall_time_s,max_abs_z,status\n");
}

TEST_CASE("emit_csv writes one line per record plus the header") {
    TempDir tmp;
    const auto records = run_sweep(small_config({Algorithm::det_id}, {2, 5}));
    const fs::path file = tmp.path / "two.csv";
    emit_csv(records, file);
    const std::string text = slurp(file);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("csv round-trip preserves float bits") {
    TempDir tmp;
    const auto records = run_sweep(
        small_config({Algorithm::det_id, Algorithm::rand_id, Algorithm::svd_baseline}, {3, 6}, 2));
    const fs::path file = tmp.path / "roundtrip.csv";
    emit_csv(records, file);
    const auto parsed = parse_csv(file);
    REQUIRE(parsed.size() == records.size());

    std::vector<ExperimentRecord> sorted = records;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return std::tie(a.dataset, a.algorithm, a.rank, a.repetition) <
               std::tie(b.dataset, b.algorithm, b.rank, b.repetition);
    });
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        CHECK(parsed[i].dataset == sorted[i].dataset);
        CHECK(parsed[i].algorithm == sorted[i].algorithm);
        CHECK(parsed[i].rank == sorted[i].rank);
        CHECK(parsed[i].repetition == sorted[i].repetition);
        CHECK(parsed[i].seed == sorted[i].seed);
        CHECK(std::memcmp(&parsed[i].relative_error, &sorted[i].relative_error, sizeof(double)) ==
              0);
        CHECK(std::memcmp(&parsed[i].wall_time_s, &sorted[i].wall_time_s, sizeof(double)) == 0);
        CHECK(parsed[i].max_abs_z.has_value() == sorted[i].max_abs_z.has_value());
        if (parsed[i].max_abs_z)
            CHECK(std::memcmp(&*parsed[i].max_abs_z, &*sorted[i].max_abs_z, sizeof(double)) == 0);
        CHECK(parsed[i].status == sorted[i].status);
    }
}

TEST_CASE("summary marks randomized columns absent on det-only records") {
    const auto records = run_sweep(small_config({Algorithm::det_id, Algorithm::svd_baseline}, {5}));
    std::ostringstream os;
    emit_summary_tables(records, os, 5);
    const std::string text = os.str();
    CHECK(text.find("gauss-small") != std::string::npos);
    CHECK(text.find("-") != std::string::npos); // absent rand_id cell
}

TEST_CASE("summary notices a missing rank") {
    const auto records = run_sweep(small_config({Algorithm::det_id}, {5}));
    std::ostringstream os;
    emit_summary_tables(records, os, 190);
    CHECK(os.str().find("no records at this rank") != std::string::npos);
}

TEST_CASE("single-record chart contains a point marker and parses as XML") {
    TempDir tmp;
    const auto records = run_sweep(small_config({Algorithm::det_id}, {4}));
    REQUIRE(records.size() == 1);
    const auto files = emit_charts(records, tmp.path / "charts");
    REQUIRE(files.size() == 1);
    const std::string text = slurp(files[0]);
    CHECK(text.find("<circle") != std::string::npos);
    CHECK(oracles::xml_well_formed(text));
}

TEST_CASE("charts for a full sweep are well-formed XML") {
    TempDir tmp;
    RunConfig config = small_config(
        {Algorithm::det_id, Algorithm::rand_id, Algorithm::svd_baseline}, {2, 5, 9, 14}, 2);
    config.datasets.push_back(
        {DatasetSpec{"uniform-small", GeneratorSource{GeneratorKind::uniform, 20, 26, 8}},
         std::nullopt});
    const auto records = run_sweep(config);
    const auto files = emit_charts(records, tmp.path / "charts");
    REQUIRE(files.size() == 2);
    for (const auto& f : files) {
        const std::string text = slurp(f);
        CHECK(oracles::xml_well_formed(text));
        CHECK(text.find("<polyline") != std::string::npos);
        CHECK(text.find("relative error") != std::string::npos);
        CHECK(text.find("rank k") != std::string::npos);
        CHECK(text.find("legend") == std::string::npos); // legend is drawn, not labeled
    }
}

TEST_CASE("verify_records accepts a clean sweep and flags corruption") {
    RunConfig config;
    config.datasets.push_back(
        {DatasetSpec{"gauss-mid", GeneratorSource{GeneratorKind::gaussian, 60, 80, 3}},
         std::nullopt});
    config.algorithms = {Algorithm::det_id, Algorithm::rand_id, Algorithm::svd_baseline};
    config.ranks = {2, 12, 30, 55};
    config.repetitions = 3;
    config.base_seed = 42;
    config.notice = [](const std::string&) {};
    const auto records = run_sweep(config);
    CHECK(verify_records(records).empty());

    auto corrupted = records;
    for (auto& r : corrupted)
        if (r.algorithm == Algorithm::det_id && r.rank == 55) r.relative_error = 0.9;
    const auto violations = verify_records(corrupted);
    CHECK_FALSE(violations.empty()); // breaks monotonicity in k
}

TEST_CASE("run_and_emit writes the whole artifact bundle") {
    TempDir tmp;
    RunConfig config = small_config({Algorithm::det_id, Algorithm::svd_baseline}, {3, 7});
    config.out_dir = tmp.path / "out";
    const auto records = run_and_emit(config);
    CHECK(records.size() == 4);
    CHECK(fs::exists(config.out_dir / "records.csv"));
    CHECK(fs::exists(config.out_dir / "summary.txt"));
    CHECK(fs::exists(config.out_dir / "charts" / "gauss-small.svg"));
    CHECK(parse_csv(config.out_dir / "records.csv").size() == 4);

    RunConfig no_dir = small_config({Algorithm::det_id}, {3});
    CHECK_THROWS_AS(run_and_emit(no_dir), std::invalid_argument);
}

TEST_CASE("cell seeds differ across the key fields") {
    const auto s = cell_seed(1, "d", Algorithm::det_id, 10, 0);
    CHECK(s != cell_seed(2, "d", Algorithm::det_id, 10, 0));
    CHECK(s != cell_seed(1, "e", Algorithm::det_id, 10, 0));
    CHECK(s != cell_seed(1, "d", Algorithm::rand_id, 10, 0));
    CHECK(s != cell_seed(1, "d", Algorithm::det_id, 11, 0));
    CHECK(s != cell_seed(1, "d", Algorithm::det_id, 10, 1));
    CHECK(s == cell_seed(1, "d", Algorithm::det_id, 10, 0));
}
