// io.hpp — CSV tables, structured-text records and run manifests
//
// CSV: header row, comma separator, dot decimal point, doubles printed with
// 17 significant digits so values round-trip exactly.

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "diamag/lattice.hpp"
#include "diamag/normal_modes.hpp"

namespace diamag::io {

std::string format_double(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
    std::string to_string() const;
};

// Parsed back from text; throws ConfigError on malformed input.
CsvTable parse_csv(const std::string& text);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

// Ordered key=value lines.
class Record {
public:
    void set(std::string key, std::string value);
    void set(std::string key, double value);
    std::string to_string() const;
    const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

private:
    std::vector<std::pair<std::string, std::string>> items_;
};

// Flat key=value parser; '#' starts a comment, blank lines ignored.
std::vector<std::pair<std::string, std::string>> parse_record(const std::string& text);

CsvTable modes_table(const ModeSet& modes);  // n, nu_n, f_n

// Dimensions, config echo and every nonzero matrix entry.
std::string dump_model(const QuadraticModel& model);

std::string sha256_hex(const std::string& bytes);

}  // namespace diamag::io
