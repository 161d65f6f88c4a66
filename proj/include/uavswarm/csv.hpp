#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uavswarm {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// One CSV record under construction.
class CsvRow {
public:
    CsvRow& add(std::string_view text);
    CsvRow& add(const char* text) { return add(std::string_view(text)); }
    CsvRow& add(double v);
    CsvRow& add(std::int64_t v);
    CsvRow& add(std::uint64_t v);
    CsvRow& add(int v) { return add(static_cast<std::int64_t>(v)); }
    CsvRow& add(bool v) { return add(v ? "true" : "false"); }
    /// Empty cell when absent.
    CsvRow& add(const std::optional<double>& v);

    const std::vector<std::string>& cells() const { return cells_; }

private:
    std::vector<std::string> cells_;
};

/// Comma-separated output with a mandatory header; fields containing commas,
/// quotes or newlines are quoted.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header);

    void write(const CsvRow& row);
    std::size_t columns() const { return header_.size(); }

private:
    void write_cells(const std::vector<std::string>& cells);

    std::ostream& out_;
    std::vector<std::string> header_;
};

}  // namespace uavswarm
