#include "uavswarm/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace uavswarm {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

CsvRow& CsvRow::add(std::string_view text) {
    cells_.emplace_back(text);
    return *this;
}

CsvRow& CsvRow::add(double v) {
    cells_.push_back(format_double(v));
    return *this;
}

CsvRow& CsvRow::add(std::int64_t v) {
    cells_.push_back(std::to_string(v));
    return *this;
}

CsvRow& CsvRow::add(std::uint64_t v) {
    cells_.push_back(std::to_string(v));
    return *this;
}

CsvRow& CsvRow::add(const std::optional<double>& v) {
    cells_.push_back(v ? format_double(*v) : std::string());
    return *this;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), header_(std::move(header)) {
    write_cells(header_);
}

void CsvWriter::write(const CsvRow& row) {
    if (row.cells().size() != header_.size()) {
        throw std::logic_error("csv row has " + std::to_string(row.cells().size()) + " cells, header has " +
                               std::to_string(header_.size()));
    }
    write_cells(row.cells());
}

void CsvWriter::write_cells(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        const std::string& c = cells[i];
        if (c.find_first_of(",\"\n\r") == std::string::npos) {
            out_ << c;
            continue;
        }
        out_ << '"';
        for (char ch : c) {
            if (ch == '"') out_ << '"';
            out_ << ch;
        }
        out_ << '"';
    }
    out_ << '\n';
}

}  // namespace uavswarm
