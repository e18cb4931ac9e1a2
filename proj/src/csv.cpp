#include "mbm/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace mbm {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::filesystem::path path, const std::vector<std::string>& provenance,
                     const std::vector<std::string>& columns)
    : final_path_(std::move(path)), tmp_path_(final_path_.string() + ".tmp") {
    std::filesystem::create_directories(final_path_.parent_path().empty()
                                            ? std::filesystem::path(".")
                                            : final_path_.parent_path());
    out_.open(tmp_path_, std::ios::binary | std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot open output file: " + tmp_path_.string());
    for (const auto& line : provenance) out_ << "# " << line << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
    out_ << "\n";
}

CsvWriter::~CsvWriter() {
    if (!closed_) {
        out_.close();
        std::error_code ec;
        std::filesystem::remove(tmp_path_, ec);
    }
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "");
    out_ << "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << values[i] << (i + 1 < values.size() ? "," : "");
    out_ << "\n";
}

void CsvWriter::close() {
    if (closed_) return;
    out_.flush();
    if (!out_) throw std::runtime_error("write failed: " + tmp_path_.string());
    out_.close();
    std::filesystem::rename(tmp_path_, final_path_);
    closed_ = true;
}

std::vector<std::string> provenance_lines(
    const std::string& subcommand, std::uint64_t seed,
    const std::vector<std::pair<std::string, std::string>>& echo) {
    std::vector<std::string> lines;
    lines.push_back(std::string("mbmlab ") + kVersion);
    lines.push_back("subcommand: " + subcommand);
    lines.push_back("seed: " + std::to_string(seed));
    std::string cfg = "config:";
    for (const auto& [k, v] : echo) cfg += " " + k + "=" + v + ";";
    lines.push_back(cfg);
    return lines;
}

}  // namespace mbm
