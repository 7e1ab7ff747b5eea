#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nhrmt/common.hpp"

namespace nhrmt::io {

// Numeric cell formatting for all exported CSVs: %.12e.
std::string format_number(double v);

// Minimal CSV table: header row + numeric/string rows, written atomically
// (temp file + rename) in UTF-8 with '\n' line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(const std::vector<std::string>& cells);
    // Convenience: formats every value with format_number.
    void add_numeric_row(const std::vector<double>& values);

    std::size_t n_rows() const { return rows_.size(); }
    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    std::string to_string() const;
    void write(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Parsed CSV with a header row; numeric access with error context.
struct CsvFile {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;         // -1 if absent
    int require_column(const std::string& name) const; // IoError if absent
    double number(std::size_t row, int col) const;
};

CsvFile read_csv(const std::string& path);

// SHA-256 of a byte string / file, lowercase hex.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

// Plain key = value configuration text ('#' comments, blank lines ignored).
// Later keys override earlier ones; unknown keys are the caller's problem
// (the experiment config validates its own schema).
std::map<std::string, std::string> read_key_values(const std::string& path);
std::map<std::string, std::string> parse_key_values(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
bool file_exists(const std::string& path);
void ensure_directory(const std::string& path);

}  // namespace nhrmt::io
