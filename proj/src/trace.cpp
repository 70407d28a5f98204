#include "psaes/trace.hpp"

#include <cstdio>
#include <ostream>

namespace psaes
{
    std::string format_double(double x)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return buf;
    }

    std::vector<std::string> trace_columns(std::size_t n)
    {
        std::vector<std::string> cols = {"run_id",
                                         "g",
                                         "lambda_real",
                                         "lambda_r",
                                         "sigma_pre_correction",
                                         "sigma_post_correction",
                                         "correction_branch",
                                         "p_sigma_norm",
                                         "f_best",
                                         "f_of_mean"};
        for (std::size_t i = 1; i <= n; ++i)
            cols.push_back("m_" + std::to_string(i));
        cols.push_back("fevals_cumulative");
        cols.push_back("wall_micros");
        return cols;
    }

    std::string csv_line(const std::vector<std::string> &cells)
    {
        std::string out;
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            if (i)
                out += ',';
            out += cells[i];
        }
        return out;
    }

    void write_trace_header(std::ostream &os, std::size_t n)
    {
        os << csv_line(trace_columns(n)) << '\n';
    }

    void write_trace_row(std::ostream &os, const TraceRow &r)
    {
        std::vector<std::string> cells = {r.run_id,
                                          std::to_string(r.g),
                                          format_double(r.lambda_real),
                                          std::to_string(r.lambda_r),
                                          format_double(r.sigma_pre_correction),
                                          format_double(r.sigma_post_correction),
                                          std::to_string(r.correction_branch),
                                          format_double(r.p_sigma_norm),
                                          format_double(r.f_best),
                                          format_double(r.f_of_mean)};
        for (Eigen::Index i = 0; i < r.mean.size(); ++i)
            cells.push_back(format_double(r.mean(i)));
        cells.push_back(std::to_string(r.fevals_cumulative));
        cells.push_back(std::to_string(r.wall_micros));
        os << csv_line(cells) << '\n';
    }

    void write_trace_csv(std::ostream &os, const std::vector<TraceRow> &rows, std::size_t n)
    {
        write_trace_header(os, n);
        for (const auto &r : rows)
            write_trace_row(os, r);
    }

    std::ofstream open_output(const std::filesystem::path &path, bool force)
    {
        std::error_code ec;
        if (std::filesystem::exists(path, ec) && !force)
            throw IoFailure(path.string() + " already exists (use --force to overwrite)");
        if (path.has_parent_path())
        {
            std::filesystem::create_directories(path.parent_path(), ec);
            if (ec)
                throw IoFailure("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
        std::ofstream os(path, std::ios::out | std::ios::trunc);
        if (!os)
            throw IoFailure("cannot open " + path.string() + " for writing");
        return os;
    }
}
