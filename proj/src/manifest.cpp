#include "glab/manifest.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "glab/common.hpp"

namespace glab {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double parse_number(const std::string& tok, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(tok, &pos);
        if (pos != tok.size())
            throw UsageError(where + ": trailing characters in number '" + tok + "'");
        return x;
    } catch (const std::invalid_argument&) {
        throw UsageError(where + ": expected a number, got '" + tok + "'");
    } catch (const std::out_of_range&) {
        throw UsageError(where + ": number out of range '" + tok + "'");
    }
}

std::vector<double> parse_flat_array(const std::string& body, const std::string& where) {
    std::vector<double> out;
    std::string tok;
    std::istringstream in(body);
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        out.push_back(parse_number(tok, where));
    }
    return out;
}

KvValue parse_value(const std::string& raw, const std::string& where) {
    if (raw.empty()) throw UsageError(where + ": empty value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"')
            throw UsageError(where + ": unterminated string");
        return KvValue{raw.substr(1, raw.size() - 2)};
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') throw UsageError(where + ": unterminated array");
        const std::string body = trim(raw.substr(1, raw.size() - 2));
        if (body.empty()) return KvValue{std::vector<double>{}};
        if (body.front() == '[') {
            // matrix: [[...],[...],...]
            std::vector<std::vector<double>> rows;
            std::size_t i = 0;
            while (i < body.size()) {
                if (body[i] == ',' || std::isspace(static_cast<unsigned char>(body[i]))) {
                    ++i;
                    continue;
                }
                if (body[i] != '[') throw UsageError(where + ": malformed matrix");
                const std::size_t close = body.find(']', i);
                if (close == std::string::npos)
                    throw UsageError(where + ": unterminated matrix row");
                rows.push_back(parse_flat_array(body.substr(i + 1, close - i - 1), where));
                i = close + 1;
            }
            return KvValue{rows};
        }
        return KvValue{parse_flat_array(body, where)};
    }
    if (raw == "true") return KvValue{1.0};
    if (raw == "false") return KvValue{0.0};
    return KvValue{parse_number(raw, where)};
}

} // namespace

double KvValue::number() const {
    if (!is_number()) throw UsageError("manifest value is not a number");
    return std::get<double>(v);
}

const std::string& KvValue::string() const {
    if (!is_string()) throw UsageError("manifest value is not a string");
    return std::get<std::string>(v);
}

const std::vector<double>& KvValue::array() const {
    if (!is_array()) throw UsageError("manifest value is not an array");
    return std::get<std::vector<double>>(v);
}

const std::vector<std::vector<double>>& KvValue::matrix() const {
    if (!is_matrix()) throw UsageError("manifest value is not a matrix");
    return std::get<std::vector<std::vector<double>>>(v);
}

KvFile KvFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

KvFile KvFile::parse_string(const std::string& text, const std::string& origin) {
    KvFile kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments outside of quotes
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line.resize(i);
                break;
            }
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw UsageError(where + ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        if (key.empty()) throw UsageError(where + ": empty key");
        if (kv.entries_.count(key))
            throw UsageError(where + ": duplicate key '" + key + "'");
        kv.entries_.emplace(key, parse_value(trim(stripped.substr(eq + 1)), where));
    }
    return kv;
}

const KvValue& KvFile::at(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        throw UsageError(origin_ + ": missing required key '" + key + "'");
    return it->second;
}

std::optional<double> KvFile::number(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.number();
}

std::optional<std::string> KvFile::string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.string();
}

} // namespace glab
