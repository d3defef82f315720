#ifndef CAVPROT_IO_HPP
#define CAVPROT_IO_HPP

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavprot {

// Fixed-format numeric CSV: one header row, then rows of equal width.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(const std::vector<double>& row)
    {
        if (row.size() != columns.size())
            throw std::invalid_argument("row width does not match header");
        rows.push_back(row);
    }

    void write(std::ostream& os) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        char buf[64];
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.12g", row[i]);
                os << buf << (i + 1 < row.size() ? "," : "\n");
            }
        }
    }

    void save(const std::string& path) const
    {
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        write(f);
    }

    static CsvTable load(std::istream& is)
    {
        CsvTable t;
        std::string line;
        if (!std::getline(is, line)) throw std::runtime_error("empty CSV");
        std::stringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) t.columns.push_back(cell);
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            std::vector<double> row;
            std::stringstream rs(line);
            while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
            t.add_row(row);
        }
        return t;
    }

    static CsvTable load_file(const std::string& path)
    {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("cannot open input file: " + path);
        return load(f);
    }
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value configuration. '#' starts a comment; unknown keys are the
// caller's problem to reject (see consume()).
struct KeyValueConfig {
    std::map<std::string, std::string> values;

    static KeyValueConfig parse(std::istream& is)
    {
        KeyValueConfig cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key");
            cfg.values[key] = val;
        }
        return cfg;
    }

    static KeyValueConfig parse_file(const std::string& path)
    {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open config file: " + path);
        return parse(f);
    }

    bool has(const std::string& k) const { return values.count(k) > 0; }

    // Fetch-and-erase, so leftover keys can be rejected as unknown.
    std::string consume(const std::string& k, const std::string& fallback)
    {
        auto it = values.find(k);
        if (it == values.end()) return fallback;
        std::string v = it->second;
        values.erase(it);
        return v;
    }

    double consume_double(const std::string& k, double fallback)
    {
        auto it = values.find(k);
        if (it == values.end()) return fallback;
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(it->second, &pos);
        } catch (const std::exception&) {
            throw ConfigError("field '" + k + "': not a number: " + it->second);
        }
        if (pos != it->second.size())
            throw ConfigError("field '" + k + "': trailing characters: " + it->second);
        values.erase(it);
        return v;
    }

    void reject_unknown() const
    {
        if (!values.empty())
            throw ConfigError("unknown config key: " + values.begin()->first);
    }
};

} // namespace cavprot

#endif // CAVPROT_IO_HPP
