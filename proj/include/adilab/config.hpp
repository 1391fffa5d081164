// config.hpp — flat key-value configuration (section.key = value)

#pragma once

#include "adilab/expr.hpp"
#include "adilab/reservoir.hpp"
#include "adilab/system.hpp"

#include <map>
#include <string>
#include <vector>

namespace adilab {

class Config {
public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;       // "inf" allowed
    std::size_t get_size(const std::string& key, std::size_t fallback) const;
    Expr get_expr(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_list(const std::string& key, const std::string& fallback) const;
    std::vector<std::string> get_words(const std::string& key, const std::string& fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

// Builders for the documented schema.
TwoLevelSystem system_from_config(const Config& cfg);
ReservoirModel reservoir_from_config(const Config& cfg);

} // namespace adilab
