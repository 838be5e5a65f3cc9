#include "sigtrade/csv.hpp"

#include <charconv>
#include <stdexcept>


namespace sigtrade {

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), width_(header.size()) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t j = 0; j < header.size(); ++j) out_ << (j ? "," : "") << header[j];
    out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
    if (values.size() != width_) throw std::logic_error("CSV row width mismatch in " + path_.string());
    line_.clear();
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (j) line_ += ',';
        line_ += format_double(values[j]);
    }
    line_ += '\n';
    out_ << line_;
    if (!out_) throw std::runtime_error("write failed for " + path_.string());
}

void write_columns(const std::filesystem::path& path, const std::vector<std::string>& header,
                   const std::vector<Eigen::VectorXd>& columns) {
    if (header.size() != columns.size()) throw std::logic_error("header/column count mismatch");
    CsvWriter w(path, header);
    const Eigen::Index rows = columns.empty() ? 0 : columns.front().size();
    std::vector<double> buf(columns.size());
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) buf[j] = columns[j][i];
        w.row(buf);
    }
}

}  // namespace sigtrade
