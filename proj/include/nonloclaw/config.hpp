#ifndef NONLOCLAW_CONFIG_HPP
#define NONLOCLAW_CONFIG_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nonloclaw/numeric.hpp"

namespace nonloclaw {

/// Malformed or inconsistent configuration. The message starts with
/// "file:line:" when the problem can be tied to a line.
class ConfigError : public InvalidInput
{
public:
    using InvalidInput::InvalidInput;
};

// Flat config text:
//
//   # comment
//   [section]
//   key = value        # trailing comment
//
// Keys are unique within a section. Sections may not repeat.
class Config
{
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static Config parse(const std::string& text, const std::string& source = "<config>");
    static Config load(const std::filesystem::path& path);

    const std::string& source() const { return source_; }
    bool has_section(const std::string& section) const;
    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           std::optional<std::string> fallback = std::nullopt) const;
    double get_double(const std::string& section, const std::string& key,
                      std::optional<double> fallback = std::nullopt) const;
    int get_int(const std::string& section, const std::string& key, std::optional<int> fallback = std::nullopt) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
    /// Every key of a section as doubles, minus the excluded ones.
    std::map<std::string, double> numeric_section(const std::string& section,
                                                  const std::set<std::string>& exclude = {}) const;

    /// Throws ConfigError at the first key of `section` outside `allowed`.
    void allow_keys(const std::string& section, const std::set<std::string>& allowed) const;
    /// Throws ConfigError at the first section outside `allowed`.
    void allow_sections(const std::set<std::string>& allowed) const;

    /// Inserts or replaces a value (command-line overrides); line 0.
    void set(const std::string& section, const std::string& key, const std::string& value);

    /// ConfigError anchored at the line of section/key when it exists.
    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& message) const;

    const std::map<std::string, std::map<std::string, Entry>>& sections() const { return sections_; }

private:
    std::string source_;
    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::map<std::string, int> section_lines_;

    const Entry* find(const std::string& section, const std::string& key) const;
};

}  // namespace nonloclaw

#endif
