#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace mbm {

inline constexpr const char* kVersion = "0.1.0";

// 17 significant digits, the shortest round-trippable form we emit.
std::string format_double(double v);

// CSV with '#' provenance header lines. Content is written to <path>.tmp and
// renamed on close(); the temporary is removed if the writer dies early, so a
// failed run leaves no partial file behind.
class CsvWriter {
public:
    CsvWriter(std::filesystem::path path, const std::vector<std::string>& provenance,
              const std::vector<std::string>& columns);
    ~CsvWriter();

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& values);
    void close();

private:
    std::filesystem::path final_path_;
    std::filesystem::path tmp_path_;
    std::ofstream out_;
    bool closed_ = false;
};

// Standard provenance block: version, subcommand, seed, config echo.
std::vector<std::string> provenance_lines(const std::string& subcommand, std::uint64_t seed,
                                          const std::vector<std::pair<std::string, std::string>>& echo);

}  // namespace mbm
