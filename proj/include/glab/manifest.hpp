#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace glab {

/// Parsed value of a `key = value` line: number, quoted string, or a
/// (possibly nested, one level) bracketed array of numbers.
struct KvValue {
    std::variant<double, std::string, std::vector<double>,
                 std::vector<std::vector<double>>>
        v;

    bool is_number() const { return std::holds_alternative<double>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_array() const { return std::holds_alternative<std::vector<double>>(v); }
    bool is_matrix() const {
        return std::holds_alternative<std::vector<std::vector<double>>>(v);
    }

    double number() const;
    const std::string& string() const;
    const std::vector<double>& array() const;
    const std::vector<std::vector<double>>& matrix() const;
};

/// Flat `key = value` file with `#` comments. Duplicate keys are rejected.
class KvFile {
public:
    static KvFile parse_file(const std::string& path);
    static KvFile parse_string(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const { return entries_.count(key) > 0; }
    const KvValue& at(const std::string& key) const;
    std::optional<double> number(const std::string& key) const;
    std::optional<std::string> string(const std::string& key) const;

    const std::map<std::string, KvValue>& entries() const { return entries_; }
    const std::string& origin() const { return origin_; }

private:
    std::map<std::string, KvValue> entries_;
    std::string origin_;
};

} // namespace glab
