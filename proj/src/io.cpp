#include "noregret/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace noregret {

std::string format_g17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

SequenceTrace load_column_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_column_csv: cannot open " + path.string());
    }
    std::vector<double> values;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        // Only the first column matters; tolerate trailing columns.
        std::string cell = line.substr(0, line.find(','));
        try {
            size_t consumed = 0;
            const double v = std::stod(cell, &consumed);
            values.push_back(v);
        } catch (const std::exception&) {
            if (first) {
                first = false;
                continue;  // header line
            }
            throw std::runtime_error("load_column_csv: non-numeric cell '" + cell + "' in " +
                                     path.string());
        }
        first = false;
    }
    if (values.empty()) {
        throw std::runtime_error("load_column_csv: no data in " + path.string());
    }
    SequenceTrace trace(static_cast<Index>(values.size()));
    for (Index i = 0; i < trace.size(); ++i) {
        trace[i] = values[static_cast<size_t>(i)];
    }
    require_finite(trace, "load_column_csv " + path.string());
    return trace;
}

void save_column_csv(const std::filesystem::path& path, const SequenceTrace& trace,
                     const std::string& header) {
    std::ostringstream out;
    if (!header.empty()) {
        out << header << "\n";
    }
    for (Index i = 0; i < trace.size(); ++i) {
        out << format_g17(trace[i]) << "\n";
    }
    write_text_file(path, out.str());
}

void write_plotdata(const std::filesystem::path& path, const std::vector<std::string>& columns,
                    const std::vector<SequenceTrace>& data) {
    require(columns.size() == data.size(), "write_plotdata: column/name count mismatch");
    require(!data.empty(), "write_plotdata: no columns");
    const Index rows = data.front().size();
    for (const auto& column : data) {
        require(column.size() == rows, "write_plotdata: ragged columns");
    }
    std::ostringstream out;
    out << "#";
    for (const auto& name : columns) {
        out << ' ' << name;
    }
    out << "\n";
    for (Index i = 0; i < rows; ++i) {
        for (size_t c = 0; c < data.size(); ++c) {
            if (c > 0) {
                out << ' ';
            }
            out << format_g17(data[c][i]);
        }
        out << "\n";
    }
    write_text_file(path, out.str());
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_text_file: cannot open " + path.string());
    }
    out << contents;
    if (!out) {
        throw std::runtime_error("write_text_file: write failed for " + path.string());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("read_text_file: cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace noregret
