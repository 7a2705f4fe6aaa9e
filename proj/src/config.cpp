#include "lppl/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "lppl/errors.hpp"

namespace lppl {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("config key \"" + key + "\": bad numeric value \"" + value + "\"");
    }
    return out;
}

long to_long(const std::string& key, const std::string& value) {
    long out = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("config key \"" + key + "\": bad integer value \"" + value + "\"");
    }
    return out;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config line " + std::to_string(line_no) +
                             ": expected key=value, got \"" + stripped + "\"");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ParseError("config line " + std::to_string(line_no) + ": empty key");
        }
        if (!kv.emplace(key, value).second) {
            throw ParseError("config line " + std::to_string(line_no) + ": duplicate key \"" +
                             key + "\"");
        }
    }
    return kv;
}

std::map<std::string, std::string> parse_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

void apply_fit_config(FitConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "tc_grid_lo_days") cfg.tc_offset_days.lo = to_double(key, value);
        else if (key == "tc_grid_hi_days") cfg.tc_offset_days.hi = to_double(key, value);
        else if (key == "tc_grid_step_days") cfg.tc_offset_days.step = to_double(key, value);
        else if (key == "m_grid_lo") cfg.m_grid.lo = to_double(key, value);
        else if (key == "m_grid_hi") cfg.m_grid.hi = to_double(key, value);
        else if (key == "m_grid_step") cfg.m_grid.step = to_double(key, value);
        else if (key == "omega_grid_lo") cfg.omega_grid.lo = to_double(key, value);
        else if (key == "omega_grid_hi") cfg.omega_grid.hi = to_double(key, value);
        else if (key == "omega_grid_step") cfg.omega_grid.step = to_double(key, value);
        else if (key == "refine_top_k") cfg.refine_top_k = static_cast<int>(to_long(key, value));
        else if (key == "min_observations")
            cfg.min_observations = static_cast<std::size_t>(to_long(key, value));
        else if (key == "simplex_max_iterations")
            cfg.simplex.max_iterations = static_cast<int>(to_long(key, value));
        else if (key == "simplex_x_tolerance") cfg.simplex.x_tolerance = to_double(key, value);
        else if (key == "simplex_f_tolerance") cfg.simplex.f_tolerance = to_double(key, value);
        else if (key == "bound_tc_lo_days") cfg.bounds.tc_lo_days = to_double(key, value);
        else if (key == "bound_tc_hi_days") cfg.bounds.tc_hi_days = to_double(key, value);
        else if (key == "bound_m_lo") cfg.bounds.m_lo = to_double(key, value);
        else if (key == "bound_m_hi") cfg.bounds.m_hi = to_double(key, value);
        else if (key == "bound_omega_lo") cfg.bounds.omega_lo = to_double(key, value);
        else if (key == "bound_omega_hi") cfg.bounds.omega_hi = to_double(key, value);
        else throw ParseError("unknown config key \"" + key + "\"");
    }
    cfg.validate();
}

}  // namespace lppl
