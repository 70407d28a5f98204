#pragma once

#include "psaes/optimizer.hpp"

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

namespace psaes
{
    /// Doubles rendered with 17 significant digits.
    std::string format_double(double x);

    std::vector<std::string> trace_columns(std::size_t n);

    void write_trace_header(std::ostream &os, std::size_t n);
    void write_trace_row(std::ostream &os, const TraceRow &row);
    void write_trace_csv(std::ostream &os, const std::vector<TraceRow> &rows, std::size_t n);

    /// Opens `path` for writing, creating parent directories. Throws IoFailure
    /// when the file exists and `force` is false, or when it cannot be opened.
    std::ofstream open_output(const std::filesystem::path &path, bool force);

    /// Joins cells with commas; cells are written verbatim.
    std::string csv_line(const std::vector<std::string> &cells);
}
