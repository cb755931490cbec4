// SPDX-License-Identifier: Apache-2.0
#include "cranest/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cranest {

namespace {

std::string trim(const std::string& s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_real(const std::string& key, const std::string& value)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(ConfigErrorKind::BadValue, key + ": cannot parse real '" + value + "'");
    }
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value)
{
    std::uint64_t v = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError(ConfigErrorKind::BadValue, key + ": cannot parse integer '" + value + "'");
    }
    return v;
}

std::vector<double> parse_profile(const std::string& value, std::size_t q_order, double v_h)
{
    if (value == "uniform") return uniform_profile(q_order, v_h);
    if (value == "jakes") return jakes_profile(q_order, v_h);
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_real("v_q_profile", trim(item)));
    }
    return out;
}

void check_positive(double v, const char* name)
{
    if (!(v > 0.0)) {
        throw ConfigError(ConfigErrorKind::BadValue, std::string(name) + " must be > 0");
    }
}

} // namespace

std::vector<double> uniform_profile(std::size_t q_order, double v_h)
{
    const std::size_t n = 2 * q_order + 1;
    return std::vector<double>(n, v_h / static_cast<double>(n));
}

std::vector<double> jakes_profile(std::size_t q_order, double v_h)
{
    const std::size_t n = 2 * q_order + 1;
    std::vector<double> out(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double q = static_cast<double>(i) - static_cast<double>(q_order);
        const double x = q / static_cast<double>(q_order + 1);
        out[i] = 1.0 / std::sqrt(1.0 - x * x);
        total += out[i];
    }
    for (double& v : out) v *= v_h / total;
    return out;
}

ValidatedParams validate(const SystemParams& p)
{
    if (p.n_s == 0 || p.n_p == 0 || p.n_r == 0) {
        throw ConfigError(ConfigErrorKind::BadValue, "block and training lengths must be positive");
    }
    if (p.n_s % p.n_p != 0) {
        throw ConfigError(ConfigErrorKind::IntegerDivisibility,
                          "n_s = " + std::to_string(p.n_s) + " is not a multiple of n_p = " +
                              std::to_string(p.n_p));
    }
    const std::size_t k = p.n_s / p.n_p;
    if (p.q_order >= k) {
        throw ConfigError(ConfigErrorKind::OrderTooHigh,
                          "q_order = " + std::to_string(p.q_order) + " must be < K = " +
                              std::to_string(k));
    }
    if (!(p.epsilon > 0.0) || !(p.epsilon < 1.0)) {
        throw ConfigError(ConfigErrorKind::PowerSplit, "epsilon must lie strictly inside (0, 1)");
    }
    check_positive(p.p_s, "p_s");
    check_positive(p.p_r, "p_r");
    check_positive(p.sigma_n2, "sigma_n2");
    check_positive(p.v_h, "v_h");
    check_positive(p.v_g, "v_g");
    if (p.mpsk_order < 2) {
        throw ConfigError(ConfigErrorKind::BadValue, "mpsk_order must be >= 2");
    }
    if (p.i_times == 0) {
        throw ConfigError(ConfigErrorKind::BadValue, "i_times must be >= 1");
    }

    std::vector<double> profile =
        p.v_q_profile.empty() ? uniform_profile(p.q_order, p.v_h) : p.v_q_profile;
    if (profile.size() != 2 * p.q_order + 1) {
        throw ConfigError(ConfigErrorKind::BadValue,
                          "v_q_profile needs exactly " + std::to_string(2 * p.q_order + 1) +
                              " entries");
    }
    double total = 0.0;
    for (double v : profile) {
        check_positive(v, "v_q_profile entry");
        total += v;
    }
    if (std::abs(total - p.v_h) > 1e-12 * std::abs(p.v_h)) {
        throw ConfigError(ConfigErrorKind::VarianceMismatch,
                          "sum of v_q_profile = " + std::to_string(total) + " != v_h = " +
                              std::to_string(p.v_h));
    }

    ValidatedParams out;
    out.n_s = p.n_s;
    out.n_p = p.n_p;
    out.n_r = p.n_r;
    out.q_order = p.q_order;
    out.epsilon = p.epsilon;
    out.p_s = p.p_s;
    out.p_r = p.p_r;
    out.sigma_n2 = p.sigma_n2;
    out.v_h = p.v_h;
    out.v_g = p.v_g;
    out.v_q_profile = std::move(profile);
    out.mpsk_order = p.mpsk_order;
    out.i_times = p.i_times;
    out.seed = p.seed;
    out.k = k;
    out.alpha = std::sqrt(p.p_r / (p.v_h * p.p_s + p.sigma_n2));
    out.v_n = noise_variance_vn(out);
    return out;
}

ValidatedParams validate(const ValidatedParams& p)
{
    SystemParams s;
    s.n_s = p.n_s;
    s.n_p = p.n_p;
    s.n_r = p.n_r;
    s.q_order = p.q_order;
    s.epsilon = p.epsilon;
    s.p_s = p.p_s;
    s.p_r = p.p_r;
    s.sigma_n2 = p.sigma_n2;
    s.v_h = p.v_h;
    s.v_g = p.v_g;
    s.v_q_profile = p.v_q_profile;
    s.mpsk_order = p.mpsk_order;
    s.i_times = p.i_times;
    s.seed = p.seed;
    return validate(s);
}

double noise_variance_vn(const ValidatedParams& p)
{
    const double a2 = p.alpha * p.alpha;
    return (a2 * p.v_g * p.v_h * (1.0 - p.epsilon) * p.p_s + (a2 * p.v_g + 1.0) * p.sigma_n2) /
           static_cast<double>(p.k);
}

std::map<std::string, std::string> parse_config_text(const std::string& text)
{
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(ConfigErrorKind::BadValue,
                              "line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(ConfigErrorKind::BadValue,
                              "line " + std::to_string(lineno) + ": empty key");
        }
        kv[key] = value;
    }
    return kv;
}

SystemParams params_from_kv(const std::map<std::string, std::string>& kv)
{
    SystemParams p;
    // q_order first: the profile length depends on it.
    if (auto it = kv.find("q_order"); it != kv.end()) {
        p.q_order = static_cast<std::size_t>(parse_unsigned("q_order", it->second));
    }
    if (auto it = kv.find("v_h"); it != kv.end()) {
        p.v_h = parse_real("v_h", it->second);
    }
    for (const auto& [key, value] : kv) {
        if (key == "n_s") p.n_s = static_cast<std::size_t>(parse_unsigned(key, value));
        else if (key == "n_p") p.n_p = static_cast<std::size_t>(parse_unsigned(key, value));
        else if (key == "n_r") p.n_r = static_cast<std::size_t>(parse_unsigned(key, value));
        else if (key == "q_order") continue;
        else if (key == "epsilon") p.epsilon = parse_real(key, value);
        else if (key == "p_s") p.p_s = parse_real(key, value);
        else if (key == "p_r") p.p_r = parse_real(key, value);
        else if (key == "sigma_n2") p.sigma_n2 = parse_real(key, value);
        else if (key == "v_h") continue;
        else if (key == "v_g") p.v_g = parse_real(key, value);
        else if (key == "v_q_profile") p.v_q_profile = parse_profile(value, p.q_order, p.v_h);
        else if (key == "mpsk_order") p.mpsk_order = static_cast<unsigned>(parse_unsigned(key, value));
        else if (key == "i_times") p.i_times = static_cast<std::size_t>(parse_unsigned(key, value));
        else if (key == "seed") p.seed = parse_unsigned(key, value);
        else {
            throw ConfigError(ConfigErrorKind::UnknownKey, "unknown config key '" + key + "'");
        }
    }
    return p;
}

SystemParams load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(ConfigErrorKind::Io, "cannot open config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return params_from_kv(parse_config_text(ss.str()));
}

} // namespace cranest
