#include "nonloclaw/config.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "nonloclaw/field_io.hpp"

namespace nonloclaw {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s)
{
    if (s.empty())
        return false;
    for (char ch : s)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.'))
            return false;
    return true;
}

std::string anchored(const std::string& source, int line, const std::string& message)
{
    std::ostringstream msg;
    msg << source;
    if (line > 0)
        msg << ':' << line;
    msg << ": " << message;
    return msg.str();
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& source)
{
    Config cfg;
    cfg.source_ = source;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (const auto hash = s.find('#'); hash != std::string::npos)
            s.erase(hash);
        s = trim(s);
        if (s.empty() || s[0] == ';')
            continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError(anchored(source, line, "unterminated section header"));
            section = trim(s.substr(1, s.size() - 2));
            if (!valid_name(section))
                throw ConfigError(anchored(source, line, "invalid section name '" + section + "'"));
            if (cfg.section_lines_.contains(section))
                throw ConfigError(anchored(source, line, "section [" + section + "] appears twice"));
            cfg.section_lines_[section] = line;
            cfg.sections_[section];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(anchored(source, line, "expected 'key = value'"));
        if (section.empty())
            throw ConfigError(anchored(source, line, "key outside of any [section]"));
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (!valid_name(key))
            throw ConfigError(anchored(source, line, "invalid key '" + key + "'"));
        if (value.empty())
            throw ConfigError(anchored(source, line, "key '" + key + "' has no value"));
        auto& sec = cfg.sections_[section];
        if (sec.contains(key))
            throw ConfigError(anchored(source, line, "duplicate key '" + key + "' in [" + section + "]"));
        sec[key] = {value, line};
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path)
{
    if (!std::filesystem::is_regular_file(path))
        throw ConfigError(path.string() + ": cannot read config file");
    return parse(read_file(path), path.string());
}

bool Config::has_section(const std::string& section) const
{
    return sections_.contains(section);
}

bool Config::has(const std::string& section, const std::string& key) const
{
    return find(section, key) != nullptr;
}

const Config::Entry* Config::find(const std::string& section, const std::string& key) const
{
    const auto s = sections_.find(section);
    if (s == sections_.end())
        return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
}

void Config::fail(const std::string& section, const std::string& key, const std::string& message) const
{
    int line = 0;
    if (const Entry* e = find(section, key))
        line = e->line;
    else if (const auto it = section_lines_.find(section); it != section_lines_.end())
        line = it->second;
    throw ConfigError(anchored(source_, line, "[" + section + "] " + message));
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               std::optional<std::string> fallback) const
{
    if (const Entry* e = find(section, key))
        return e->value;
    if (!fallback)
        fail(section, key, "missing required key '" + key + "'");
    return *fallback;
}

double Config::get_double(const std::string& section, const std::string& key, std::optional<double> fallback) const
{
    const Entry* e = find(section, key);
    if (!e) {
        if (!fallback)
            fail(section, key, "missing required key '" + key + "'");
        return *fallback;
    }
    try {
        return parse_double(e->value);
    } catch (const InvalidInput&) {
        fail(section, key, "'" + key + "' must be a number, got '" + e->value + "'");
    }
}

int Config::get_int(const std::string& section, const std::string& key, std::optional<int> fallback) const
{
    if (!find(section, key)) {
        if (!fallback)
            fail(section, key, "missing required key '" + key + "'");
        return *fallback;
    }
    const double v = get_double(section, key);
    if (v != std::floor(v) || std::abs(v) > 2e9)
        fail(section, key, "'" + key + "' must be an integer");
    return static_cast<int>(v);
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key) const
{
    const Entry* e = find(section, key);
    if (!e)
        fail(section, key, "missing required key '" + key + "'");
    std::istringstream in(e->value);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        if (!tok.empty() && tok.back() == ',')
            tok.pop_back();
        try {
            out.push_back(parse_double(tok));
        } catch (const InvalidInput&) {
            fail(section, key, "'" + key + "' must be a list of numbers, got '" + tok + "'");
        }
    }
    return out;
}

std::map<std::string, double> Config::numeric_section(const std::string& section,
                                                      const std::set<std::string>& exclude) const
{
    std::map<std::string, double> out;
    if (const auto s = sections_.find(section); s != sections_.end())
        for (const auto& [key, entry] : s->second)
            if (!exclude.contains(key))
                out[key] = get_double(section, key);
    return out;
}

void Config::allow_keys(const std::string& section, const std::set<std::string>& allowed) const
{
    if (const auto s = sections_.find(section); s != sections_.end())
        for (const auto& [key, entry] : s->second)
            if (!allowed.contains(key))
                fail(section, key, "unknown key '" + key + "'");
}

void Config::allow_sections(const std::set<std::string>& allowed) const
{
    for (const auto& [name, line] : section_lines_)
        if (!allowed.contains(name))
            throw ConfigError(anchored(source_, line, "unknown section [" + name + "]"));
}

void Config::set(const std::string& section, const std::string& key, const std::string& value)
{
    sections_[section][key] = {value, 0};
}

}  // namespace nonloclaw
