// config.cpp — config parsing and schema builders

#include "adilab/config.hpp"
#include "adilab/common.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

namespace adilab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

} // namespace

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty()) throw config_error("config line " + std::to_string(lineno) + ": empty key");
        cfg.kv_[key] = val;
    }
    return cfg;
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "inf" || v == "Inf" || v == "INF") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty()) return d;
    } catch (...) {
    }
    throw config_error("config key '" + key + "': cannot parse '" + v + "' as a number");
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) const {
    const double d = get_double(key, static_cast<double>(fallback));
    if (d < 0.0 || d != std::floor(d))
        throw config_error("config key '" + key + "': expected a nonnegative integer");
    return static_cast<std::size_t>(d);
}

Expr Config::get_expr(const std::string& key, const std::string& fallback) const {
    return Expr::parse(get(key, fallback));
}

std::vector<double> Config::get_list(const std::string& key, const std::string& fallback) const {
    std::vector<double> out;
    std::string v = get(key, fallback);
    for (auto& c : v)
        if (c == ',' || c == ';') c = ' ';
    std::istringstream ss(v);
    std::string tok;
    while (ss >> tok) {
        if (tok == "inf") {
            out.push_back(std::numeric_limits<double>::infinity());
        } else {
            try {
                out.push_back(std::stod(tok));
            } catch (...) {
                throw config_error("config key '" + key + "': cannot parse list element '" + tok + "'");
            }
        }
    }
    return out;
}

std::vector<std::string> Config::get_words(const std::string& key, const std::string& fallback) const {
    std::vector<std::string> out;
    std::string v = get(key, fallback);
    for (auto& c : v)
        if (c == ',' || c == ';') c = ' ';
    std::istringstream ss(v);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

TwoLevelSystem system_from_config(const Config& cfg) {
    TwoLevelSystem sys;
    sys.e21 = cfg.get_expr("system.e21", "1");
    sys.mean_energy = cfg.get_expr("system.mean_energy", "0");
    sys.b1 = cfg.get_expr("system.b1", "1");
    sys.b2 = cfg.get_expr("system.b2", "-1");
    sys.theta_max = cfg.get_double("system.theta_max", pi / 3.0);
    sys.delta = cfg.get_double("system.delta", 0.5);
    const std::string kind = cfg.get("system.profile", "smoothstep");
    const int order = static_cast<int>(cfg.get_size("system.profile_order", 9));
    const double t_flat = cfg.get_double("system.t_flat", 0.0);
    if (kind == "smoothstep") {
        sys.profile = DriveProfile::smoothstep(order, t_flat);
    } else if (kind == "monomial") {
        sys.profile = DriveProfile::monomial(order);
    } else if (kind == "linear") {
        sys.profile = DriveProfile::linear();
    } else {
        throw config_error("system.profile must be smoothstep|monomial|linear");
    }
    return sys;
}

ReservoirModel reservoir_from_config(const Config& cfg) {
    ReservoirModel model;
    model.g0 = cfg.get_double("reservoir.g0", 0.05);
    model.exponent = cfg.get_double("reservoir.exponent", 2.0);
    model.omega_D = cfg.get_double("reservoir.omega_D", 1.0);
    model.beta = cfg.get_double("reservoir.beta", std::numeric_limits<double>::infinity());
    const std::string disp = cfg.get("reservoir.dispersion", "photonic");
    if (disp == "photonic") {
        model.dispersion = Dispersion::Photonic;
    } else if (disp == "massive") {
        model.dispersion = Dispersion::Massive;
        model.boson_mass = cfg.get_double("reservoir.mass", 1.0);
    } else {
        throw config_error("reservoir.dispersion must be photonic|massive");
    }
    model.validate();
    return model;
}

} // namespace adilab
