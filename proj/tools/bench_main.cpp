// Benchmark CLI: rank sweeps over the standard datasets with CSV, summary
// table, and SVG chart output.
//
//   bench run    --datasets all --out results/
//   bench report --in results/ --rank 190
//   bench verify --in results/
//
// File-backed datasets (mnist, fashion, sparse1..3) are located under
// ID_DATA_DIR (or --data-dir). Synthetic datasets are generated in place.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idkit/bench.hpp"
#include "idkit/datasets.hpp"
#include "idkit/random.hpp"

namespace fs = std::filesystem;
using namespace idkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailedCell = 1;
constexpr int kExitConfig = 2;

fs::path data_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("ID_DATA_DIR")) return env;
    return "data";
}

struct RegistryEntry {
    std::string canonical;
    BenchDataset dataset;
    bool file_backed;
};

std::vector<RegistryEntry> dataset_registry(const fs::path& dir, std::uint64_t base_seed) {
    const auto gen = [&](const std::string& name, GeneratorKind kind) {
        return RegistryEntry{
            name,
            BenchDataset{DatasetSpec{name, GeneratorSource{kind, 784, 1000,
                                                           mix_seed(base_seed, "dataset:" + name)}},
                         std::nullopt},
            false};
    };
    const auto mm = [&](const std::string& name, const std::string& file,
                        std::optional<std::size_t> max_rank) {
        return RegistryEntry{
            name, BenchDataset{DatasetSpec{name, MatrixMarketSource{dir / file}}, max_rank}, true};
    };
    return {
        gen("boolean", GeneratorKind::boolean),
        gen("gaussian", GeneratorKind::gaussian),
        gen("uniform", GeneratorKind::uniform),
        RegistryEntry{"mnist",
                      BenchDataset{DatasetSpec{"mnist",
                                               IdxImagesSource{dir / "mnist" /
                                                                   "train-images-idx3-ubyte",
                                                               5000}},
                                   std::nullopt},
                      true},
        RegistryEntry{"fashion",
                      BenchDataset{DatasetSpec{"fashion",
                                               IdxImagesSource{dir / "fashion-mnist" /
                                                                   "train-images-idx3-ubyte",
                                                               5000}},
                                   std::nullopt},
                      true},
        mm("sparse1", "1138_bus.mtx", std::nullopt),
        mm("sparse2", "Vehicle_10NN.mtx", std::nullopt),
        // The smallest sparse matrix is only swept below rank 400.
        mm("sparse3", "Spectro_NN.mtx", 399),
    };
}

std::optional<std::string> canonical_name(const std::string& requested) {
    if (requested == "boolean" || requested == "gaussian" || requested == "uniform" ||
        requested == "mnist" || requested == "fashion" || requested == "sparse1" ||
        requested == "sparse2" || requested == "sparse3")
        return requested;
    if (requested == "1138_bus") return "sparse1";
    if (requested == "Vehicle_10NN") return "sparse2";
    if (requested == "Spectro_NN") return "sparse3";
    return std::nullopt;
}

bool source_available(const BenchDataset& ds) {
    if (const auto* mm = std::get_if<MatrixMarketSource>(&ds.spec.source))
        return fs::exists(mm->path);
    if (const auto* idx = std::get_if<IdxImagesSource>(&ds.spec.source))
        return fs::exists(idx->path);
    return true;
}

int cmd_run(const std::vector<std::string>& names, const std::string& ranks_arg,
            std::size_t reps, std::uint64_t seed, double oversampling, const fs::path& out_dir,
            std::size_t warmup, bool skip_timing, const std::string& data_dir_flag) {
    const fs::path dir = data_dir(data_dir_flag);
    const auto registry = dataset_registry(dir, seed);

    RunConfig config;
    config.repetitions = reps;
    config.base_seed = seed;
    config.oversampling = oversampling;
    config.warmup = warmup;
    config.skip_timing = skip_timing;

    const bool all = names.size() == 1 && names[0] == "all";
    if (all) {
        for (const RegistryEntry& e : registry) {
            if (e.file_backed && !source_available(e.dataset)) {
                std::cerr << "notice: dataset " << e.canonical
                          << " unavailable (missing file under " << dir.string()
                          << ") -- skipping\n";
                continue;
            }
            config.datasets.push_back(e.dataset);
        }
    } else {
        for (const std::string& requested : names) {
            const auto canon = canonical_name(requested);
            if (!canon) {
                std::cerr << "error: unknown dataset '" << requested << "'\n";
                return kExitConfig;
            }
            for (const RegistryEntry& e : registry) {
                if (e.canonical != *canon) continue;
                if (e.file_backed && !source_available(e.dataset)) {
                    std::cerr << "error: dataset " << requested << " needs a file under "
                              << dir.string() << " (see README)\n";
                    return kExitConfig;
                }
                config.datasets.push_back(e.dataset);
            }
        }
    }
    if (config.datasets.empty()) {
        std::cerr << "error: no datasets selected\n";
        return kExitConfig;
    }

    if (ranks_arg != "default") {
        config.ranks.clear();
        std::size_t start = 0;
        while (start <= ranks_arg.size()) {
            const std::size_t comma = ranks_arg.find(',', start);
            const std::string tok =
                ranks_arg.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (tok.empty()) {
                std::cerr << "error: empty rank in --ranks\n";
                return kExitConfig;
            }
            char* end = nullptr;
            const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
            if (end == nullptr || *end != '\0' || v == 0) {
                std::cerr << "error: bad rank '" << tok << "'\n";
                return kExitConfig;
            }
            config.ranks.push_back(static_cast<std::size_t>(v));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    for (std::size_t i = 1; i < config.ranks.size(); ++i) {
        if (config.ranks[i] <= config.ranks[i - 1]) {
            std::cerr << "error: rank grid must be strictly increasing\n";
            return kExitConfig;
        }
    }

    config.out_dir = out_dir;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory " << out_dir.string() << "\n";
        return kExitConfig;
    }

    const std::vector<ExperimentRecord> records = run_and_emit(config);
    std::cout << "wrote " << records.size() << " records to " << (out_dir / "records.csv").string()
              << "\n";

    for (const ExperimentRecord& r : records)
        if (!r.ok()) return kExitFailedCell;
    return kExitOk;
}

int cmd_report(const fs::path& in_dir, std::size_t rank) {
    const auto records = parse_csv(in_dir / "records.csv");
    emit_summary_tables(records, std::cout, rank);
    return kExitOk;
}

int cmd_verify(const fs::path& in_dir) {
    const auto records = parse_csv(in_dir / "records.csv");
    const auto violations = verify_records(records);
    if (violations.empty()) {
        std::cout << "ok: " << records.size() << " records satisfy the sweep invariants\n";
        return kExitOk;
    }
    for (const std::string& v : violations) std::cout << "violation: " << v << "\n";
    return kExitFailedCell;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpolative decomposition benchmark harness"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a sweep and emit CSV, summary, and charts");
    std::vector<std::string> datasets{"all"};
    std::string ranks = "default";
    std::size_t reps = 10;
    std::uint64_t seed = 0;
    double oversampling = 0.2;
    std::string out_dir = "results";
    std::size_t warmup = 0;
    bool skip_timing = false;
    std::string data_dir_flag;
    run->add_option("--datasets", datasets, "Dataset names or 'all'")->delimiter(',');
    run->add_option("--ranks", ranks, "Comma-separated ranks or 'default'");
    run->add_option("--reps", reps, "Repetitions per randomized cell");
    run->add_option("--seed", seed, "Base seed");
    run->add_option("--oversampling", oversampling, "Randomized oversampling fraction");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--warmup", warmup, "Unrecorded warm-up calls per timed cell");
    run->add_flag("--skip-timing", skip_timing, "Error-only mode: no warm-up runs");
    run->add_option("--data-dir", data_dir_flag, "Dataset directory (overrides ID_DATA_DIR)");

    auto* report = app.add_subcommand("report", "Summarize an emitted CSV at one rank");
    std::string report_in = "results";
    std::size_t report_rank = 190;
    report->add_option("--in", report_in, "Directory holding records.csv");
    report->add_option("--rank", report_rank, "Summary rank");

    auto* verify = app.add_subcommand("verify", "Re-check sweep invariants on an emitted CSV");
    std::string verify_in = "results";
    verify->add_option("--in", verify_in, "Directory holding records.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed())
            return cmd_run(datasets, ranks, reps, seed, oversampling, out_dir, warmup, skip_timing,
                           data_dir_flag);
        if (report->parsed()) return cmd_report(report_in, report_rank);
        if (verify->parsed()) return cmd_verify(verify_in);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
