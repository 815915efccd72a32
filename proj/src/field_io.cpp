#include "nonloclaw/field_io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace nonloclaw {

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        parts.push_back(cur);
    if (!s.empty() && s.back() == sep)
        parts.emplace_back();
    return parts;
}

std::string strip(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s)
{
    std::vector<std::string> parts;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok)
        parts.push_back(tok);
    return parts;
}

int parse_int(const std::string& text)
{
    const std::string t = strip(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw InvalidInput("expected an integer, got '" + text + "'");
    return v;
}

}  // namespace

std::string format_double(double x)
{
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc())
        throw Error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

double parse_double(const std::string& text)
{
    const std::string t = strip(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw InvalidInput("expected a number, got '" + text + "'");
    return v;
}

void write_field_csv(std::ostream& out, const GridField& u)
{
    const Grid& g = u.grid();
    out << "# dim,cells,spacing\n# " << g.dim() << ',';
    for (int a = 0; a < g.dim(); ++a)
        out << (a ? " " : "") << g.cells(a);
    out << ',';
    for (int a = 0; a < g.dim(); ++a)
        out << (a ? " " : "") << format_double(g.spacing(a));
    out << '\n';
    for (std::size_t x = 0; x < u.size(); ++x) {
        const Index idx = g.unravel(x);
        for (int a = 0; a < g.dim(); ++a)
            out << idx[a] << ',';
        out << format_double(u[x]) << '\n';
    }
}

GridField read_field_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || strip(line) != "# dim,cells,spacing")
        throw InvalidInput("field csv: missing '# dim,cells,spacing' header");
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw InvalidInput("field csv: missing grid description line");
    const auto head = split(line.substr(2), ',');
    if (head.size() != 3)
        throw InvalidInput("field csv: grid line must hold dim,cells,spacing");
    const int dim = parse_int(head[0]);
    std::vector<int> cells;
    for (const auto& t : split_ws(head[1]))
        cells.push_back(parse_int(t));
    std::vector<double> spacing;
    for (const auto& t : split_ws(head[2]))
        spacing.push_back(parse_double(t));
    if (static_cast<int>(cells.size()) != dim || static_cast<int>(spacing.size()) != dim)
        throw InvalidInput("field csv: per-axis entries do not match dim");
    Grid grid(cells, spacing);

    std::vector<double> values(grid.size());
    std::vector<bool> seen(grid.size(), false);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (strip(line).empty())
            continue;
        const auto parts = split(line, ',');
        if (static_cast<int>(parts.size()) != dim + 1)
            throw InvalidInput("field csv: row " + std::to_string(row) + " has the wrong column count");
        Index idx{0, 0};
        for (int a = 0; a < dim; ++a) {
            idx[a] = parse_int(parts[a]);
            if (idx[a] < 0 || idx[a] >= grid.cells(a))
                throw InvalidInput("field csv: index out of range in row " + std::to_string(row));
        }
        const std::size_t k = grid.linear(idx);
        values[k] = parse_double(parts[dim]);
        seen[k] = true;
        ++row;
    }
    for (std::size_t k = 0; k < seen.size(); ++k)
        if (!seen[k])
            throw InvalidInput("field csv: no value for cell " + std::to_string(k));
    return GridField(grid, std::move(values));
}

void write_field_csv(const std::filesystem::path& path, const GridField& u)
{
    std::ostringstream out;
    write_field_csv(out, u);
    write_file_atomic(path, out.str());
}

GridField read_field_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open " + path.string());
    return read_field_csv(in);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write " + tmp.string());
        out << content;
        if (!out)
            throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidInput("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string sha256_hex(const std::string& bytes)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 failed");
    std::ostringstream hex;
    hex << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i)
        hex << std::setw(2) << static_cast<int>(md[i]);
    return hex.str();
}

}  // namespace nonloclaw
