#include "idkit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace idkit {

namespace {

struct Series {
    std::vector<double> x; // rank
    std::vector<double> y; // mean value at that rank
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

const char* color_of(Algorithm a) {
    switch (a) {
    case Algorithm::svd_baseline: return "#7f7f7f";
    case Algorithm::det_id: return "#1f77b4";
    case Algorithm::rand_id: return "#d62728";
    }
    return "#000000";
}

// One panel: axes, ticks, one polyline + circle markers per series.
void draw_panel(std::ostream& out, double ox, double oy, double w, double h,
                const std::string& y_label,
                const std::map<Algorithm, Series>& series) {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& [alg, s] : series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    if (xmax == xmin) {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if (ymax == ymin) {
        const double pad = ymax == 0.0 ? 1.0 : std::fabs(ymax) * 0.5;
        ymin -= pad;
        ymax += pad;
    }

    const auto sx = [&](double v) { return ox + (v - xmin) / (xmax - xmin) * w; };
    const auto sy = [&](double v) { return oy + h - (v - ymin) / (ymax - ymin) * h; };

    out << "<rect x=\"" << num(ox) << "\" y=\"" << num(oy) << "\" width=\"" << num(w)
        << "\" height=\"" << num(h) << "\" fill=\"none\" stroke=\"#333333\"/>\n";

    constexpr int kTicks = 5;
    for (int t = 0; t < kTicks; ++t) {
        const double fx = xmin + (xmax - xmin) * t / (kTicks - 1);
        const double px = sx(fx);
        out << "<line x1=\"" << num(px) << "\" y1=\"" << num(oy + h) << "\" x2=\"" << num(px)
            << "\" y2=\"" << num(oy + h + 4) << "\" stroke=\"#333333\"/>\n";
        out << "<text x=\"" << num(px) << "\" y=\"" << num(oy + h + 16)
            << "\" font-size=\"10\" text-anchor=\"middle\">" << num(fx) << "</text>\n";
        const double fy = ymin + (ymax - ymin) * t / (kTicks - 1);
        const double py = sy(fy);
        out << "<line x1=\"" << num(ox - 4) << "\" y1=\"" << num(py) << "\" x2=\"" << num(ox)
            << "\" y2=\"" << num(py) << "\" stroke=\"#333333\"/>\n";
        out << "<text x=\"" << num(ox - 6) << "\" y=\"" << num(py + 3)
            << "\" font-size=\"10\" text-anchor=\"end\">" << num(fy) << "</text>\n";
    }
    out << "<text x=\"" << num(ox + w / 2) << "\" y=\"" << num(oy + h + 30)
        << "\" font-size=\"11\" text-anchor=\"middle\">rank k</text>\n";
    out << "<text x=\"" << num(ox - 44) << "\" y=\"" << num(oy + h / 2)
        << "\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 " << num(ox - 44)
        << " " << num(oy + h / 2) << ")\">" << escape_xml(y_label) << "</text>\n";

    for (const auto& [alg, s] : series) {
        const char* color = color_of(alg);
        if (s.x.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) out << ' ';
                out << num(sx(s.x[i])) << ',' << num(sy(s.y[i]));
            }
            out << "\"/>\n";
        }
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << "<circle cx=\"" << num(sx(s.x[i])) << "\" cy=\"" << num(sy(s.y[i]))
                << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
}

} // namespace

std::vector<std::filesystem::path> emit_charts(const std::vector<ExperimentRecord>& records,
                                               const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    // dataset -> algorithm -> rank -> (sum, count); charts plot repetition means.
    std::map<std::string, std::map<Algorithm, std::map<std::size_t, std::pair<double, std::size_t>>>>
        errors, times;
    for (const ExperimentRecord& r : records) {
        if (!r.ok()) continue;
        auto& e = errors[r.dataset][r.algorithm][r.rank];
        e.first += r.relative_error;
        ++e.second;
        auto& t = times[r.dataset][r.algorithm][r.rank];
        t.first += r.wall_time_s;
        ++t.second;
    }

    const auto collect = [](const std::map<Algorithm, std::map<std::size_t, std::pair<double, std::size_t>>>&
                                src) {
        std::map<Algorithm, Series> out;
        for (const auto& [alg, by_rank] : src) {
            Series s;
            for (const auto& [rank, acc] : by_rank) {
                s.x.push_back(static_cast<double>(rank));
                s.y.push_back(acc.first / static_cast<double>(acc.second));
            }
            out[alg] = std::move(s);
        }
        return out;
    };

    std::vector<std::filesystem::path> files;
    for (const auto& [dataset, by_alg] : errors) {
        const std::filesystem::path path = dir / (dataset + ".svg");
        std::ofstream out(path);
        if (!out) throw std::runtime_error("emit_charts: cannot open " + path.string());

        const double width = 760, height = 330;
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
            << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
        out << "<text x=\"" << width / 2
            << "\" y=\"18\" font-size=\"14\" text-anchor=\"middle\" font-weight=\"bold\">"
            << escape_xml(dataset) << "</text>\n";

        draw_panel(out, 60, 40, 280, 220, "relative error", collect(by_alg));
        draw_panel(out, 440, 40, 280, 220, "time (s)", collect(times[dataset]));

        double lx = 60;
        for (Algorithm alg : {Algorithm::svd_baseline, Algorithm::det_id, Algorithm::rand_id}) {
            if (!by_alg.count(alg)) continue;
            out << "<line x1=\"" << num(lx) << "\" y1=\"310\" x2=\"" << num(lx + 18)
                << "\" y2=\"310\" stroke=\"" << color_of(alg) << "\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << num(lx + 22) << "\" y=\"314\" font-size=\"11\">"
                << to_string(alg) << "</text>\n";
            lx += 130;
        }
        out << "</svg>\n";
        if (!out) throw std::runtime_error("emit_charts: write failed for " + path.string());
        files.push_back(path);
    }
    return files;
}

} // namespace idkit
