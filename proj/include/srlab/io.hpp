#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace srlab::io {

// Line-oriented "key = value" text (a TOML-compatible subset): values are
// numbers, "quoted strings", bare words, or flat bracket lists of numbers.
// '#' starts a comment. Keys keep file order; duplicate keys are allowed
// (last one wins for the typed getters, all are iterable).
class KVFile {
public:
    static KVFile parse_text(const std::string& text);
    static KVFile parse_file(const std::string& path);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& dflt) const;
    double get_number(const std::string& key) const;
    double get_number(const std::string& key, double dflt) const;
    long get_int(const std::string& key, long dflt) const;
    std::vector<double> get_list(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& pairs() const { return pairs_; }

private:
    const std::string* find(const std::string& key) const;
    std::vector<std::pair<std::string, std::string>> pairs_;
};

// Bit-exact double <-> text through the C99 hex-float representation.
std::string hex_double(double v);
double parse_double(const std::string& s);  // accepts hex and decimal forms

// Shortest decimal that round-trips (for human-facing columns).
std::string fmt_double(double v);

// Minimal CSV writer: quotes nothing, callers pass plain numeric/label cells.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();
    void row(const std::vector<std::string>& cells);

private:
    std::string path_;
    std::string buf_;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace srlab::io
