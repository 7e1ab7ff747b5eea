#include "nhrmt/io.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nhrmt::io {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

namespace {

std::string escape_csv(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw ParameterError("csv: header must be non-empty");
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) {
        throw ParameterError("csv: row width does not match header");
    }
    rows_.push_back(cells);
}

void CsvTable::add_numeric_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    add_row(cells);
}

std::string CsvTable::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) out += ',';
        out += escape_csv(header_[i]);
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += escape_csv(row[i]);
        }
        out += '\n';
    }
    return out;
}

void CsvTable::write(const std::string& path) const { write_text_file(path, to_string()); }

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

}  // namespace

int CsvFile::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

int CsvFile::require_column(const std::string& name) const {
    const int c = column(name);
    if (c < 0) throw IoError("csv: missing column '" + name + "'");
    return c;
}

double CsvFile::number(std::size_t row, int col) const {
    if (row >= rows.size() || col < 0 || static_cast<std::size_t>(col) >= rows[row].size()) {
        throw IoError("csv: cell out of range");
    }
    const std::string& cell = rows[row][static_cast<std::size_t>(col)];
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str()) throw IoError("csv: non-numeric cell '" + cell + "'");
    return v;
}

CsvFile read_csv(const std::string& path) {
    const std::string text = read_text_file(path);
    CsvFile f;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.eof()) break;
        if (first) {
            f.header = split_csv_line(line);
            first = false;
        } else {
            f.rows.push_back(split_csv_line(line));
        }
    }
    if (first) throw IoError("csv: empty file " + path);
    return f;
}

// --- SHA-256 ----------------------------------------------------------------

namespace {

// Round and initialization constants are the fractional parts of cube/square
// roots of the first primes; generated here (long double gives ~64 mantissa
// bits, ample for the leading 32) and pinned by a known-answer test.
struct Sha256Tables {
    std::array<std::uint32_t, 64> k;
    std::array<std::uint32_t, 8> h0;
    Sha256Tables() {
        std::array<int, 64> primes{};
        int found = 0;
        for (int cand = 2; found < 64; ++cand) {
            bool is_prime = true;
            for (int d = 2; d * d <= cand; ++d) {
                if (cand % d == 0) {
                    is_prime = false;
                    break;
                }
            }
            if (is_prime) primes[static_cast<std::size_t>(found++)] = cand;
        }
        auto frac32 = [](long double x) {
            return static_cast<std::uint32_t>(
                std::floor((x - std::floor(x)) * 4294967296.0L));
        };
        for (int i = 0; i < 64; ++i) {
            k[static_cast<std::size_t>(i)] =
                frac32(std::cbrt(static_cast<long double>(primes[static_cast<std::size_t>(i)])));
        }
        for (int i = 0; i < 8; ++i) {
            h0[static_cast<std::size_t>(i)] =
                frac32(std::sqrt(static_cast<long double>(primes[static_cast<std::size_t>(i)])));
        }
    }
};

const Sha256Tables& sha_tables() {
    static const Sha256Tables t;
    return t;
}

inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

void sha256_block(std::array<std::uint32_t, 8>& h, const unsigned char* p) {
    const auto& tab = sha_tables();
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i) {
        w[i] = (static_cast<std::uint32_t>(p[4 * i]) << 24) |
               (static_cast<std::uint32_t>(p[4 * i + 1]) << 16) |
               (static_cast<std::uint32_t>(p[4 * i + 2]) << 8) |
               static_cast<std::uint32_t>(p[4 * i + 3]);
    }
    for (int i = 16; i < 64; ++i) {
        const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
        const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3];
    std::uint32_t e = h[4], f = h[5], g = h[6], hh = h[7];
    for (int i = 0; i < 64; ++i) {
        const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
        const std::uint32_t ch = (e & f) ^ (~e & g);
        const std::uint32_t t1 = hh + s1 + ch + tab.k[static_cast<std::size_t>(i)] + w[i];
        const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
        const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
        const std::uint32_t t2 = s0 + maj;
        hh = g;
        g = f;
        f = e;
        e = d + t1;
        d = c;
        c = b;
        b = a;
        a = t1 + t2;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
    h[5] += f;
    h[6] += g;
    h[7] += hh;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    std::array<std::uint32_t, 8> h = sha_tables().h0;
    const std::size_t n = bytes.size();
    std::size_t i = 0;
    for (; i + 64 <= n; i += 64) {
        sha256_block(h, reinterpret_cast<const unsigned char*>(bytes.data()) + i);
    }
    unsigned char tail[128];
    std::size_t rest = n - i;
    std::memcpy(tail, bytes.data() + i, rest);
    tail[rest++] = 0x80;
    const std::size_t blocks = rest <= 56 ? 1 : 2;
    std::memset(tail + rest, 0, blocks * 64 - rest - 8);
    const std::uint64_t bits = static_cast<std::uint64_t>(n) * 8;
    for (int b = 0; b < 8; ++b) {
        tail[blocks * 64 - 1 - b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xff);
    }
    for (std::size_t blk = 0; blk < blocks; ++blk) sha256_block(h, tail + 64 * blk);
    std::string hex;
    hex.reserve(64);
    const char* digits = "0123456789abcdef";
    for (std::uint32_t word : h) {
        for (int shift = 28; shift >= 0; shift -= 4) {
            hex += digits[(word >> shift) & 0xf];
        }
    }
    return hex;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_text_file(path)); }

// --- key = value configuration ----------------------------------------------

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw IoError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw IoError("config line " + std::to_string(line_no) + ": empty key");
        }
        kv[key] = value;
    }
    return kv;
}

std::map<std::string, std::string> read_key_values(const std::string& path) {
    return parse_key_values(read_text_file(path));
}

// --- filesystem helpers ------------------------------------------------------

void write_text_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + tmp + " -> " + path + " (" + ec.message() + ")");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool file_exists(const std::string& path) { return std::filesystem::exists(path); }

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw IoError("cannot create directory " + path + " (" + ec.message() + ")");
}

}  // namespace nhrmt::io
