#include "c2lse/emit.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "c2lse/config.hpp"
#include "c2lse/csv.hpp"

namespace c2lse {

namespace fs = std::filesystem;

void ensure_writable(const std::string& outdir) {
    std::error_code ec;
    fs::create_directories(outdir, ec);
    const fs::path probe = fs::path(outdir) / ".write_probe";
    {
        std::ofstream out(probe);
        if (!out) throw std::runtime_error("output directory '" + outdir + "' is not writable");
        out << "probe";
    }
    fs::remove(probe, ec);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
        out << content;
        if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
    }
    fs::rename(tmp, path);
}

std::string render_trace_csv(const ExperimentConfig& config, const ReplicateTable& table,
                             Index dim) {
    std::ostringstream out;
    std::vector<std::string> header = {"iteration", "seed"};
    for (Index j = 0; j < dim; ++j) header.push_back("x" + std::to_string(j));
    for (const char* col : {"y", "acq_value", "cum_info_gain", "f1_macro", "wall_ms",
                            "gp_inferences"})
        header.push_back(col);
    out << csv_line(header) << "\n";

    for (const RunRecord& run : table.runs) {
        for (const IterationRow& row : run.rows) {
            std::vector<std::string> cells;
            cells.push_back(std::to_string(row.iteration));
            cells.push_back(std::to_string(run.seed));
            for (Index j = 0; j < dim; ++j) cells.push_back(format_double(row.query[j]));
            cells.push_back(format_double(row.observation));
            cells.push_back(format_double(row.acq_value));
            cells.push_back(format_double(row.cum_info_gain));
            cells.push_back(std::isnan(row.f1_macro) ? "" : format_double(row.f1_macro));
            cells.push_back(config.record_timings ? format_double(row.wall_ms) : "0");
            cells.push_back(std::to_string(row.gp_inferences));
            out << csv_line(cells) << "\n";
        }
    }
    return out.str();
}

std::string render_summary_csv(const ReplicateTable& table) {
    std::ostringstream out;
    out << "iteration,f1_macro_mean,f1_macro_std\n";
    for (std::size_t i = 0; i < table.eval_iterations.size(); ++i) {
        out << table.eval_iterations[i] << "," << format_double(table.f1_mean[i]) << ","
            << format_double(table.f1_std[i]) << "\n";
    }
    return out.str();
}

namespace {

std::string svg_header(int width, int height) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    return out.str();
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string render_f1_curve_svg(const ReplicateTable& table) {
    const int width = 640, height = 420;
    const double left = 60, right = 20, top = 24, bottom = 48;
    const double plot_w = width - left - right, plot_h = height - top - bottom;

    std::ostringstream out;
    out << svg_header(width, height);

    const int max_iter = table.eval_iterations.empty() ? 1 : table.eval_iterations.back();
    auto sx = [&](double it) { return left + plot_w * (it / std::max(1, max_iter)); };
    auto sy = [&](double f1) { return top + plot_h * (1.0 - f1); };

    // axes and gridlines
    out << "<g stroke=\"#ccc\" stroke-width=\"1\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double f1 = i / 5.0;
        out << "<line x1=\"" << fmt2(left) << "\" y1=\"" << fmt2(sy(f1)) << "\" x2=\""
            << fmt2(left + plot_w) << "\" y2=\"" << fmt2(sy(f1)) << "\"/>\n";
    }
    out << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double f1 = i / 5.0;
        out << "<text x=\"" << fmt2(left - 34) << "\" y=\"" << fmt2(sy(f1) + 4) << "\">"
            << fmt2(f1) << "</text>\n";
    }
    out << "<text x=\"" << fmt2(left + plot_w / 2 - 30) << "\" y=\"" << fmt2(height - 12)
        << "\">iteration</text>\n";
    out << "<text x=\"12\" y=\"" << fmt2(top + plot_h / 2)
        << "\" transform=\"rotate(-90 16 " << fmt2(top + plot_h / 2) << ")\">macro F1</text>\n";
    out << "</g>\n";

    if (!table.eval_iterations.empty()) {
        // +/- one standard deviation band
        std::ostringstream band;
        band << "<polygon fill=\"#9ecae1\" fill-opacity=\"0.45\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < table.eval_iterations.size(); ++i)
            band << fmt2(sx(table.eval_iterations[i])) << ","
                 << fmt2(sy(std::min(1.0, table.f1_mean[i] + table.f1_std[i]))) << " ";
        for (std::size_t i = table.eval_iterations.size(); i-- > 0;)
            band << fmt2(sx(table.eval_iterations[i])) << ","
                 << fmt2(sy(std::max(0.0, table.f1_mean[i] - table.f1_std[i]))) << " ";
        band << "\"/>\n";
        out << band.str();

        out << "<polyline fill=\"none\" stroke=\"#2171b5\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < table.eval_iterations.size(); ++i)
            out << fmt2(sx(table.eval_iterations[i])) << "," << fmt2(sy(table.f1_mean[i])) << " ";
        out << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_query_scatter_svg(const ReplicateTable& table, const LevelSetProblem& problem,
                                     const GroundTruth& truth) {
    if (problem.dim() != 2)
        throw std::invalid_argument("render_query_scatter_svg: 2-D problems only");
    const int width = 560, height = 560;
    const double left = 40, top = 20, plot = 500;

    const double x0 = problem.bounds.lower[0], x1 = problem.bounds.upper[0];
    const double y0 = problem.bounds.lower[1], y1 = problem.bounds.upper[1];
    auto sx = [&](double x) { return left + plot * (x - x0) / (x1 - x0); };
    auto sy = [&](double y) { return top + plot * (1.0 - (y - y0) / (y1 - y0)); };

    std::ostringstream out;
    out << svg_header(width, height);

    // truth grid as background cells: superlevel white, sublevel gray
    Index nx = 0, ny = 0;
    if (problem.truth_grid_shape.size() == 2) {
        nx = problem.truth_grid_shape[0];
        ny = problem.truth_grid_shape[1];
    }
    if (nx > 1 && ny > 1 && truth.count() == nx * ny) {
        out << "<g stroke=\"none\">\n";
        const double cw = plot / static_cast<double>(nx);
        const double ch = plot / static_cast<double>(ny);
        for (Index i = 0; i < truth.count(); ++i) {
            if (truth.labels[static_cast<std::size_t>(i)] != Label::Sub) continue;
            const double cx = sx(truth.points(i, 0)) - cw / 2;
            const double cy = sy(truth.points(i, 1)) - ch / 2;
            out << "<rect x=\"" << fmt2(cx) << "\" y=\"" << fmt2(cy) << "\" width=\""
                << fmt2(cw + 0.5) << "\" height=\"" << fmt2(ch + 0.5) << "\" fill=\"#bbb\"/>\n";
        }
        out << "</g>\n";
    }
    out << "<rect x=\"" << fmt2(left) << "\" y=\"" << fmt2(top) << "\" width=\"" << fmt2(plot)
        << "\" height=\"" << fmt2(plot) << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // initial design as open circles, loop queries as black dots
    for (const RunRecord& run : table.runs) {
        for (Index i = 0; i < run.initial_points.rows(); ++i)
            out << "<circle cx=\"" << fmt2(sx(run.initial_points(i, 0))) << "\" cy=\""
                << fmt2(sy(run.initial_points(i, 1)))
                << "\" r=\"3\" fill=\"none\" stroke=\"#d62728\"/>\n";
        for (const IterationRow& row : run.rows)
            out << "<circle cx=\"" << fmt2(sx(row.query[0])) << "\" cy=\""
                << fmt2(sy(row.query[1])) << "\" r=\"2.5\" fill=\"black\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::vector<std::string> emit_results(const ExperimentConfig& config, const ReplicateTable& table,
                                      const LevelSetProblem& problem, const GroundTruth& truth,
                                      const std::string& outdir) {
    ensure_writable(outdir);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = (fs::path(outdir) / name).string();
        write_file_atomic(path, content);
        written.push_back(path);
    };
    emit("trace.csv", render_trace_csv(config, table, problem.dim()));
    emit("summary.csv", render_summary_csv(table));
    emit("resolved_config.toml", resolved_config_toml(config));
    emit("f1_curve.svg", render_f1_curve_svg(table));
    if (problem.dim() == 2)
        emit("queries.svg", render_query_scatter_svg(table, problem, truth));
    return written;
}

double emit_truth(const LevelSetProblem& problem, const GroundTruth& truth,
                  const std::string& outdir) {
    ensure_writable(outdir);
    std::ostringstream out;
    std::vector<std::string> header;
    for (Index j = 0; j < problem.dim(); ++j) header.push_back("x" + std::to_string(j));
    header.push_back("f");
    header.push_back("label");
    out << csv_line(header) << "\n";
    for (Index i = 0; i < truth.count(); ++i) {
        std::vector<std::string> cells;
        for (Index j = 0; j < problem.dim(); ++j) cells.push_back(format_double(truth.points(i, j)));
        cells.push_back(format_double(truth.values[i]));
        cells.push_back(to_string(truth.labels[static_cast<std::size_t>(i)]));
        out << csv_line(cells) << "\n";
    }
    write_file_atomic((fs::path(outdir) / "truth.csv").string(), out.str());
    return static_cast<double>(truth.count_super()) / static_cast<double>(truth.count());
}

}  // namespace c2lse
