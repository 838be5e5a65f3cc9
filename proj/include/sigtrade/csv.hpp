#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace sigtrade {

/// Numeric CSV with a header row. Values print with 17 significant digits
/// and '.' as decimal separator regardless of the global locale.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

    void row(std::span<const double> values);
    void row(std::initializer_list<double> values) { row(std::span(values.begin(), values.size())); }

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::size_t width_;
    std::ofstream out_;
    std::string line_;
};

/// 17 significant digits, locale independent.
std::string format_double(double value);

/// Column-major table: column j of `columns` is written under header[j].
void write_columns(const std::filesystem::path& path, const std::vector<std::string>& header,
                   const std::vector<Eigen::VectorXd>& columns);

}  // namespace sigtrade
