#include "idkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include "idkit/errors.hpp"

#include "idkit/id.hpp"
#include "idkit/random.hpp"
#include "idkit/svd.hpp"

namespace idkit {

std::string_view to_string(Algorithm a) {
    switch (a) {
    case Algorithm::det_id: return "det_id";
    case Algorithm::rand_id: return "rand_id";
    case Algorithm::svd_baseline: return "svd_baseline";
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view s) {
    if (s == "det_id") return Algorithm::det_id;
    if (s == "rand_id") return Algorithm::rand_id;
    if (s == "svd_baseline") return Algorithm::svd_baseline;
    return std::nullopt;
}

std::vector<std::size_t> default_rank_grid() {
    std::vector<std::size_t> ranks;
    for (std::size_t k = 10; k <= 470; k += 20) ranks.push_back(k);
    return ranks;
}

std::uint64_t cell_seed(std::uint64_t base, std::string_view dataset, Algorithm algorithm,
                        std::size_t rank, std::size_t repetition) {
    std::string key;
    key.append(dataset);
    key.push_back('/');
    key.append(to_string(algorithm));
    key.push_back('/');
    key.append(std::to_string(rank));
    key.push_back('/');
    key.append(std::to_string(repetition));
    return mix_seed(base, key);
}

namespace {

using Clock = std::chrono::steady_clock;

struct CellOutcome {
    double relative_error = 0.0;
    std::optional<double> max_abs_z;
};

CellOutcome execute(const Matrix& m, Algorithm algorithm, std::size_t rank, std::uint64_t seed,
                    double oversampling) {
    CellOutcome out;
    switch (algorithm) {
    case Algorithm::det_id: {
        const IdResult r = id_auto(m, rank, IdMethod::deterministic, seed, oversampling);
        const IdDiagnostics d = diagnostics(m, r);
        out.relative_error = d.relative_error;
        out.max_abs_z = d.max_abs_z;
        break;
    }
    case Algorithm::rand_id: {
        const IdResult r = id_auto(m, rank, IdMethod::randomized, seed, oversampling);
        const IdDiagnostics d = diagnostics(m, r);
        out.relative_error = d.relative_error;
        out.max_abs_z = d.max_abs_z;
        break;
    }
    case Algorithm::svd_baseline: {
        out.relative_error = truncated_svd_error(m, rank);
        break;
    }
    }
    return out;
}

} // namespace

ExperimentRecord run_cell(const Matrix& m, Algorithm algorithm, std::size_t rank,
                          std::uint64_t seed, double oversampling, std::size_t warmup) {
    ExperimentRecord rec;
    rec.algorithm = algorithm;
    rec.rank = rank;
    rec.seed = seed;
    try {
        for (std::size_t w = 0; w < warmup; ++w) (void)execute(m, algorithm, rank, seed, oversampling);
        // The timed region covers the factorization call only; diagnostics
        // run on the returned result after the clock stops.
        const auto t0 = Clock::now();
        CellOutcome out;
        switch (algorithm) {
        case Algorithm::det_id:
        case Algorithm::rand_id: {
            const IdMethod method = algorithm == Algorithm::det_id ? IdMethod::deterministic
                                                                   : IdMethod::randomized;
            const IdResult r = id_auto(m, rank, method, seed, oversampling);
            const auto t1 = Clock::now();
            rec.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
            const IdDiagnostics d = diagnostics(m, r);
            out.relative_error = d.relative_error;
            out.max_abs_z = d.max_abs_z;
            break;
        }
        case Algorithm::svd_baseline: {
            const SvdResult s = svd(m);
            const auto t1 = Clock::now();
            rec.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
            double tail = 0.0;
            for (std::size_t i = rank; i < s.singular_values.size(); ++i)
                tail += s.singular_values[i] * s.singular_values[i];
            double total = tail;
            for (std::size_t i = 0; i < std::min(rank, s.singular_values.size()); ++i)
                total += s.singular_values[i] * s.singular_values[i];
            out.relative_error = total > 0.0 ? std::sqrt(tail / total) : 0.0;
            break;
        }
        }
        rec.relative_error = out.relative_error;
        rec.max_abs_z = out.max_abs_z;
    } catch (const std::exception& e) {
        std::string what = e.what();
        for (char& c : what)
            if (c == ',' || c == '\n') c = ';';
        rec.status = what;
        rec.relative_error = 0.0;
        rec.wall_time_s = 0.0;
        rec.max_abs_z.reset();
    }
    return rec;
}

std::vector<ExperimentRecord> run_sweep(const RunConfig& config) {
    const auto notify = [&](const std::string& msg) {
        if (config.notice)
            config.notice(msg);
        else
            std::cerr << "notice: " << msg << "\n";
    };

    std::vector<ExperimentRecord> records;
    for (const BenchDataset& ds : config.datasets) {
        Matrix m;
        try {
            m = resolve(ds.spec);
        } catch (const std::exception& e) {
            notify("dataset " + ds.spec.name + ": " + e.what() + " -- skipping");
            continue;
        }
        const std::size_t min_dim = std::min(m.rows(), m.cols());
        for (std::size_t rank : config.ranks) {
            if (rank > min_dim) {
                notify("dataset " + ds.spec.name + ": rank " + std::to_string(rank) +
                       " exceeds min(dims) = " + std::to_string(min_dim) + " -- skipping cell");
                continue;
            }
            if (ds.max_rank && rank > *ds.max_rank) {
                notify("dataset " + ds.spec.name + ": rank " + std::to_string(rank) +
                       " above the dataset's rank cap " + std::to_string(*ds.max_rank) +
                       " -- skipping cell");
                continue;
            }
            for (Algorithm alg : config.algorithms) {
                const std::size_t reps = alg == Algorithm::rand_id ? config.repetitions : 1;
                for (std::size_t rep = 0; rep < reps; ++rep) {
                    const std::uint64_t seed =
                        cell_seed(config.base_seed, ds.spec.name, alg, rank, rep);
                    const std::size_t warmup = config.skip_timing ? 0 : config.warmup;
                    ExperimentRecord rec =
                        run_cell(m, alg, rank, seed, config.oversampling, warmup);
                    rec.dataset = ds.spec.name;
                    rec.repetition = rep;
                    if (!rec.ok())
                        notify("cell " + rec.dataset + "/" + std::string(to_string(alg)) + "/k=" +
                               std::to_string(rank) + "/rep=" + std::to_string(rep) +
                               " failed: " + rec.status);
                    records.push_back(std::move(rec));
                }
            }
        }
    }
    return records;
}

std::vector<ExperimentRecord> run_and_emit(const RunConfig& config) {
    if (config.out_dir.empty())
        throw std::invalid_argument("run_and_emit: config.out_dir is empty");
    std::filesystem::create_directories(config.out_dir);
    std::vector<ExperimentRecord> records = run_sweep(config);
    emit_csv(records, config.out_dir / "records.csv");
    emit_summary_tables(records, config.out_dir / "summary.txt");
    emit_charts(records, config.out_dir / "charts");
    return records;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void sort_records(std::vector<ExperimentRecord>& records) {
    std::sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
        if (a.dataset != b.dataset) return a.dataset < b.dataset;
        if (a.algorithm != b.algorithm) return static_cast<int>(a.algorithm) < static_cast<int>(b.algorithm);
        if (a.rank != b.rank) return a.rank < b.rank;
        return a.repetition < b.repetition;
    });
}

} // namespace

void emit_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path) {
    std::vector<ExperimentRecord> sorted = records;
    sort_records(sorted);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path.string());
    out << "dataset,algorithm,rank,repetition,seed,relative_error,wall_time_s,max_abs_z,status\n";
    for (const ExperimentRecord& r : sorted) {
        out << r.dataset << ',' << to_string(r.algorithm) << ',' << r.rank << ',' << r.repetition
            << ',' << r.seed << ',' << format_double(r.relative_error) << ','
            << format_double(r.wall_time_s) << ','
            << (r.max_abs_z ? format_double(*r.max_abs_z) : std::string()) << ',' << r.status
            << '\n';
    }
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path.string());
}

std::vector<ExperimentRecord> parse_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError("parse_csv: cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": line 1: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "dataset,algorithm,rank,repetition,seed,relative_error,wall_time_s,max_abs_z,status")
        throw ParseError(path.string() + ": line 1: unexpected header");

    std::vector<ExperimentRecord> records;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (fields.size() != 9)
            throw ParseError(path.string() + ": line " + std::to_string(lineno) +
                             ": expected 9 fields, got " + std::to_string(fields.size()));
        ExperimentRecord r;
        r.dataset = fields[0];
        const auto alg = parse_algorithm(fields[1]);
        if (!alg)
            throw ParseError(path.string() + ": line " + std::to_string(lineno) +
                             ": unknown algorithm '" + fields[1] + "'");
        r.algorithm = *alg;
        r.rank = std::strtoull(fields[2].c_str(), nullptr, 10);
        r.repetition = std::strtoull(fields[3].c_str(), nullptr, 10);
        r.seed = std::strtoull(fields[4].c_str(), nullptr, 10);
        r.relative_error = std::strtod(fields[5].c_str(), nullptr);
        r.wall_time_s = std::strtod(fields[6].c_str(), nullptr);
        if (!fields[7].empty()) r.max_abs_z = std::strtod(fields[7].c_str(), nullptr);
        r.status = fields[8];
        records.push_back(std::move(r));
    }
    return records;
}

namespace {

struct CellStats {
    double error_sum = 0.0;
    double time_sum = 0.0;
    double maxz_sum = 0.0;
    std::size_t count = 0;
    std::size_t maxz_count = 0;
};

std::string format_cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

} // namespace

void emit_summary_tables(const std::vector<ExperimentRecord>& records, std::ostream& out,
                         std::size_t rank) {
    constexpr Algorithm kOrder[] = {Algorithm::svd_baseline, Algorithm::det_id, Algorithm::rand_id};

    std::vector<std::string> datasets;
    std::map<std::pair<std::string, Algorithm>, CellStats> stats;
    for (const ExperimentRecord& r : records) {
        if (r.rank != rank || !r.ok()) continue;
        if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end())
            datasets.push_back(r.dataset);
        CellStats& s = stats[{r.dataset, r.algorithm}];
        s.error_sum += r.relative_error;
        s.time_sum += r.wall_time_s;
        ++s.count;
        if (r.max_abs_z) {
            s.maxz_sum += *r.max_abs_z;
            ++s.maxz_count;
        }
    }

    out << "Summary at rank " << rank << "\n";
    if (datasets.empty()) {
        out << "  (no records at this rank)\n";
        return;
    }
    std::sort(datasets.begin(), datasets.end());

    const auto table = [&](const char* title, auto value) {
        out << "\n" << title << "\n";
        char head[80];
        std::snprintf(head, sizeof(head), "%-12s %-14s %-12s %-12s", "dataset", "svd_baseline",
                      "det_id", "rand_id");
        out << "  " << head << "\n";
        for (const std::string& ds : datasets) {
            std::string row;
            char lead[32];
            std::snprintf(lead, sizeof(lead), "%-12s ", ds.c_str());
            row += lead;
            for (Algorithm alg : kOrder) {
                const auto it = stats.find({ds, alg});
                std::string cell = "-";
                if (it != stats.end()) {
                    const auto v = value(it->second);
                    if (v) cell = format_cell(*v);
                }
                char padded[32];
                std::snprintf(padded, sizeof(padded), alg == Algorithm::svd_baseline ? "%-14s " : "%-12s ",
                              cell.c_str());
                row += padded;
            }
            out << "  " << row << "\n";
        }
    };

    table("Relative error (mean over repetitions)", [](const CellStats& s) -> std::optional<double> {
        if (s.count == 0) return std::nullopt;
        return s.error_sum / static_cast<double>(s.count);
    });
    table("Wall time, seconds (mean over repetitions)", [](const CellStats& s) -> std::optional<double> {
        if (s.count == 0) return std::nullopt;
        return s.time_sum / static_cast<double>(s.count);
    });
    table("Max |Z| entry (mean over repetitions)", [](const CellStats& s) -> std::optional<double> {
        if (s.maxz_count == 0) return std::nullopt;
        return s.maxz_sum / static_cast<double>(s.maxz_count);
    });
}

void emit_summary_tables(const std::vector<ExperimentRecord>& records,
                         const std::filesystem::path& path, std::size_t rank) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_summary_tables: cannot open " + path.string());
    emit_summary_tables(records, out, rank);
    if (!out) throw std::runtime_error("emit_summary_tables: write failed for " + path.string());
}

namespace {

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    const auto ranks = [n](const std::vector<double>& v) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) r[idx[i]] = static_cast<double>(i);
        return r;
    };
    const std::vector<double> rx = ranks(x), ry = ranks(y);
    const double mean = (static_cast<double>(n) - 1.0) / 2.0;
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (rx[i] - mean) * (ry[i] - mean);
        dx += (rx[i] - mean) * (rx[i] - mean);
        dy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (dx == 0.0 || dy == 0.0) return 0.0;
    return num / std::sqrt(dx * dy);
}

} // namespace

std::vector<std::string> verify_records(const std::vector<ExperimentRecord>& records) {
    std::vector<std::string> violations;
    const auto complain = [&](const std::string& msg) { violations.push_back(msg); };

    std::map<std::pair<std::string, std::size_t>, double> svd_error;
    std::map<std::pair<std::string, std::size_t>, std::vector<double>> det_errors, rand_errors;

    for (const ExperimentRecord& r : records) {
        if (!r.ok()) {
            complain("failed cell: " + r.dataset + "/" + std::string(to_string(r.algorithm)) +
                     "/k=" + std::to_string(r.rank) + ": " + r.status);
            continue;
        }
        if (!(r.wall_time_s > 0.0))
            complain("non-positive wall time in " + r.dataset + "/" +
                     std::string(to_string(r.algorithm)) + "/k=" + std::to_string(r.rank));
        if (r.relative_error < 0.0)
            complain("negative relative error in " + r.dataset + "/k=" + std::to_string(r.rank));
        const auto key = std::make_pair(r.dataset, r.rank);
        switch (r.algorithm) {
        case Algorithm::svd_baseline: svd_error[key] = r.relative_error; break;
        case Algorithm::det_id: det_errors[key].push_back(r.relative_error); break;
        case Algorithm::rand_id: rand_errors[key].push_back(r.relative_error); break;
        }
    }

    for (const auto& [key, errs] : det_errors) {
        for (double e : errs)
            if (e != errs.front())
                complain("det_id error varies across repetitions on " + key.first + "/k=" +
                         std::to_string(key.second));
    }

    constexpr double kDominanceSlack = 1e-10;
    for (const auto& [key, sv] : svd_error) {
        if (const auto it = det_errors.find(key); it != det_errors.end()) {
            for (double e : it->second)
                if (e < sv - kDominanceSlack)
                    complain("det_id error beats the SVD baseline on " + key.first + "/k=" +
                             std::to_string(key.second));
        }
        if (const auto it = rand_errors.find(key); it != rand_errors.end()) {
            double mean = 0.0;
            for (double e : it->second) mean += e;
            mean /= static_cast<double>(it->second.size());
            if (mean < sv - kDominanceSlack)
                complain("mean rand_id error beats the SVD baseline on " + key.first + "/k=" +
                         std::to_string(key.second));
        }
    }

    // Per-dataset det_id trends over the rank grid.
    std::map<std::string, std::vector<std::pair<std::size_t, const ExperimentRecord*>>> det_by_ds;
    for (const ExperimentRecord& r : records)
        if (r.ok() && r.algorithm == Algorithm::det_id)
            det_by_ds[r.dataset].emplace_back(r.rank, &r);
    for (auto& [ds, cells] : det_by_ds) {
        std::sort(cells.begin(), cells.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 1; i < cells.size(); ++i) {
            if (cells[i].first == cells[i - 1].first) continue;
            if (cells[i].second->relative_error > cells[i - 1].second->relative_error + 1e-12)
                complain("det_id error increases from k=" + std::to_string(cells[i - 1].first) +
                         " to k=" + std::to_string(cells[i].first) + " on " + ds);
        }
        std::vector<double> ks, ts;
        for (const auto& [k, rec] : cells) {
            ks.push_back(static_cast<double>(k));
            ts.push_back(rec->wall_time_s);
        }
        if (ks.size() >= 3 && spearman(ks, ts) <= 0.0)
            complain("det_id wall time shows no increasing trend in k on " + ds);
    }

    return violations;
}

} // namespace idkit
