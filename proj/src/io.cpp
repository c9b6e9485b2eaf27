#include "srlab/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace srlab::io {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// strips a trailing comment that is not inside quotes
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

} // namespace

KVFile KVFile::parse_text(const std::string& text) {
    KVFile kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " is not `key = value`: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " has empty key or value");
        kv.pairs_.emplace_back(key, val);
    }
    return kv;
}

KVFile KVFile::parse_file(const std::string& path) {
    return parse_text(read_text_file(path));
}

const std::string* KVFile::find(const std::string& key) const {
    const std::string* hit = nullptr;
    for (const auto& [k, v] : pairs_)
        if (k == key) hit = &v;
    return hit;
}

bool KVFile::has(const std::string& key) const { return find(key) != nullptr; }

std::string KVFile::get_string(const std::string& key) const {
    const std::string* v = find(key);
    if (!v) throw std::invalid_argument("missing config key: " + key);
    std::string s = *v;
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::string KVFile::get_string(const std::string& key, const std::string& dflt) const {
    return has(key) ? get_string(key) : dflt;
}

double KVFile::get_number(const std::string& key) const {
    const std::string* v = find(key);
    if (!v) throw std::invalid_argument("missing config key: " + key);
    return parse_double(*v);
}

double KVFile::get_number(const std::string& key, double dflt) const {
    return has(key) ? get_number(key) : dflt;
}

long KVFile::get_int(const std::string& key, long dflt) const {
    return has(key) ? static_cast<long>(get_number(key)) : dflt;
}

std::vector<double> KVFile::get_list(const std::string& key) const {
    const std::string* v = find(key);
    if (!v) throw std::invalid_argument("missing config key: " + key);
    std::string s = trim(*v);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw std::invalid_argument("config key " + key + " is not a [list]");
    s = s.substr(1, s.size() - 2);
    std::vector<double> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item));
    }
    return out;
}

std::string hex_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_double(const std::string& s) {
    const char* c = s.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end == c) throw std::invalid_argument("not a number: " + s);
    return v;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // shorten when a shorter representation round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char t[64];
        std::snprintf(t, sizeof t, "%.*g", prec, v);
        if (std::strtod(t, nullptr) == v) return t;
    }
    return buf;
}

CsvWriter::CsvWriter(const std::string& path) : path_(path) {}

CsvWriter::~CsvWriter() {
    if (!path_.empty()) write_text_file(path_, buf_);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) buf_ += ",";
        buf_ += cells[i];
    }
    buf_ += "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace srlab::io
