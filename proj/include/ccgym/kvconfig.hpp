#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccgym {

// Flat key = value configuration text with optional [section] headers that
// prefix the keys ("section.key"). '#' starts a comment. Lists are
// space- or comma-separated values.
class KvConfig {
  public:
    KvConfig() = default;

    static KvConfig parse(std::istream& in) {
        KvConfig cfg;
        std::string line, section;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::string s = trim(line);
            if (s.empty()) continue;
            if (s.front() == '[' && s.back() == ']') {
                section = trim(s.substr(1, s.size() - 2));
                continue;
            }
            auto eq = s.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config: expected key = value, got: " + s);
            std::string key = trim(s.substr(0, eq));
            std::string value = trim(s.substr(eq + 1));
            if (key.empty()) throw std::runtime_error("config: empty key");
            if (!section.empty()) key = section + "." + key;
            cfg.values_[key] = value;
        }
        return cfg;
    }

    static KvConfig parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("config: cannot open " + path);
        return parse(in);
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string str(const std::string& key, const std::string& def = "") const {
        auto it = values_.find(key);
        return it == values_.end() ? def : it->second;
    }

    std::int64_t integer(const std::string& key, std::int64_t def) const {
        auto it = values_.find(key);
        if (it == values_.end()) return def;
        return parse_int(it->second, key);
    }

    double real(const std::string& key, double def) const {
        auto it = values_.find(key);
        if (it == values_.end()) return def;
        try {
            std::size_t pos = 0;
            double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw std::runtime_error("config: bad number for " + key + ": " + it->second);
        }
    }

    std::vector<std::string> list(const std::string& key) const {
        std::vector<std::string> out;
        auto it = values_.find(key);
        if (it == values_.end()) return out;
        std::string v = it->second;
        std::replace(v.begin(), v.end(), ',', ' ');
        std::istringstream ss(v);
        std::string tok;
        while (ss >> tok) out.push_back(tok);
        return out;
    }

    const std::map<std::string, std::string>& all() const { return values_; }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

  private:
    static std::string trim(const std::string& s) {
        std::size_t a = 0, b = s.size();
        while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
        return s.substr(a, b - a);
    }

    static std::int64_t parse_int(const std::string& v, const std::string& key) {
        try {
            std::size_t pos = 0;
            std::int64_t r = std::stoll(v, &pos, 0);
            if (pos != v.size()) throw std::invalid_argument("");
            return r;
        } catch (...) {
            throw std::runtime_error("config: bad integer for " + key + ": " + v);
        }
    }

    std::map<std::string, std::string> values_;
};

}  // namespace ccgym
