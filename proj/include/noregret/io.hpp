#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "noregret/common.hpp"

namespace noregret {

// Shortest exact decimal form would round-trip too, but a fixed 17-significant
// digit rendering keeps files byte-comparable across writers.
std::string format_g17(double value);

// Single-column CSV (optional non-numeric header line is skipped).
SequenceTrace load_column_csv(const std::filesystem::path& path);

void save_column_csv(const std::filesystem::path& path, const SequenceTrace& trace,
                     const std::string& header);

// Whitespace-separated columns behind one '#'-prefixed header line.
void write_plotdata(const std::filesystem::path& path, const std::vector<std::string>& columns,
                    const std::vector<SequenceTrace>& data);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace noregret
