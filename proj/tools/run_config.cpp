#include "run_config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "prony/error.hpp"

namespace prony::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::string cleaned = s;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream is(cleaned);
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

template <class T>
T parse(const std::string& key, const std::string& s) {
    std::istringstream is(s);
    T v{};
    is >> v;
    if (is.fail() || !is.eof()) throw ConfigError("config key '" + key + "': cannot parse '" + s + "'");
    return v;
}

// A flag or preset value may hold several whitespace- or comma-separated items.
std::vector<std::string> flatten(const std::vector<std::string>& values) {
    std::vector<std::string> out;
    for (const auto& v : values)
        for (auto& w : words(v)) out.push_back(std::move(w));
    return out;
}

template <class T>
T one(const std::string& key, const std::vector<std::string>& values) {
    const auto items = flatten(values);
    if (items.size() != 1) throw ConfigError("config key '" + key + "' takes exactly one value");
    return parse<T>(key, items[0]);
}

template <class T>
std::vector<T> many(const std::string& key, const std::vector<std::string>& values) {
    std::vector<T> out;
    for (const auto& w : flatten(values)) out.push_back(parse<T>(key, w));
    if (out.empty()) throw ConfigError("config key '" + key + "' needs a value");
    return out;
}

std::string text(const std::string& key, const std::vector<std::string>& values) {
    if (values.size() != 1) throw ConfigError("config key '" + key + "' takes exactly one value");
    return trim(values[0]);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::vector<std::string>&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        {"n", [](RunConfig& c, const auto& k, const auto& v) { c.n = many<int>(k, v); }},
        {"M", [](RunConfig& c, const auto& k, const auto& v) { c.M = one<int>(k, v); }},
        {"rank-tol",
         [](RunConfig& c, const auto& k, const auto& v) {
             c.rank_tol = one<double>(k, v);
             c.rank_tol_set = true;
         }},
        {"rank-rule",
         [](RunConfig& c, const auto& k, const auto& v) {
             c.rank_rule = text(k, v);
             c.rank_rule_set = true;
         }},
        {"gap-tol", [](RunConfig& c, const auto& k, const auto& v) { c.gap_tol = one<double>(k, v); }},
        {"retries", [](RunConfig& c, const auto& k, const auto& v) { c.max_retries = one<int>(k, v); }},
        {"seed", [](RunConfig& c, const auto& k, const auto& v) { c.seed = one<std::uint64_t>(k, v); }},
        {"b", [](RunConfig& c, const auto& k, const auto& v) { c.b = one<double>(k, v); }},
        {"P", [](RunConfig& c, const auto& k, const auto& v) { c.P = one<int>(k, v); }},
        {"snr", [](RunConfig& c, const auto& k, const auto& v) { c.snr = one<double>(k, v); }},
        {"trials", [](RunConfig& c, const auto& k, const auto& v) { c.trials = one<std::uint64_t>(k, v); }},
        {"epsilon", [](RunConfig& c, const auto& k, const auto& v) { c.epsilon = many<double>(k, v); }},
        {"d", [](RunConfig& c, const auto& k, const auto& v) { c.d = many<int>(k, v); }},
        {"q", [](RunConfig& c, const auto& k, const auto& v) { c.q = many<double>(k, v); }},
        {"mode", [](RunConfig& c, const auto& k, const auto& v) { c.mode = text(k, v); }},
        {"resolution", [](RunConfig& c, const auto& k, const auto& v) { c.resolution = one<int>(k, v); }},
        {"shift-radius", [](RunConfig& c, const auto& k, const auto& v) { c.shift_radius = one<int>(k, v); }},
        {"background", [](RunConfig& c, const auto& k, const auto& v) { c.background = text(k, v); }},
        {"offset", [](RunConfig& c, const auto& k, const auto& v) { c.offset = one<double>(k, v); }},
        {"pgm-scale", [](RunConfig& c, const auto& k, const auto& v) { c.pgm_scale = one<double>(k, v); }},
        {"min-sep", [](RunConfig& c, const auto& k, const auto& v) { c.min_sep = one<double>(k, v); }},
        {"in", [](RunConfig& c, const auto& k, const auto& v) { c.in = text(k, v); }},
        {"out", [](RunConfig& c, const auto& k, const auto& v) { c.out = text(k, v); }},
        {"source",
         [](RunConfig& c, const auto& k, const auto& v) {
             for (const auto& row : v) c.sources.push_back(many<double>(k, {row}));
         }},
    };
    return table;
}

}  // namespace

int RunConfig::order() const {
    if (n.size() != 1) throw ConfigError("--n takes a single value for '" + command + "'");
    return n[0];
}

int RunConfig::dim(int fallback) const {
    if (d.empty()) return fallback;
    if (d.size() != 1) throw ConfigError("--d takes a single value for '" + command + "'");
    return d[0];
}

std::optional<ParameterSet> RunConfig::preset_params() const {
    if (sources.empty()) return std::nullopt;
    const std::size_t width = sources[0].size();
    if (width < 3) throw ConfigError("source rows need t_1..t_d, c_re, c_im");
    const auto dd = static_cast<Eigen::Index>(width - 2);
    ParameterSet p(Eigen::MatrixXd(static_cast<Eigen::Index>(sources.size()), dd),
                   Eigen::VectorXcd(static_cast<Eigen::Index>(sources.size())));
    for (std::size_t j = 0; j < sources.size(); ++j) {
        if (sources[j].size() != width) throw ConfigError("source rows differ in length");
        const auto r = static_cast<Eigen::Index>(j);
        for (Eigen::Index l = 0; l < dd; ++l) p.locations(r, l) = sources[j][static_cast<std::size_t>(l)];
        p.coefficients(r) = cdouble(sources[j][width - 2], sources[j][width - 1]);
    }
    p.validate();
    return p;
}

void set_key(RunConfig& cfg, const std::string& key, const std::vector<std::string>& values) {
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(cfg, key, values);
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, _] : setters()) k.push_back(name);
        return k;
    }();
    return keys;
}

void apply_preset_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open preset '" + path.string() + "'");
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.filename().string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            set_key(cfg, key, {value});
        } catch (const ConfigError& e) {
            throw ConfigError(path.filename().string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

std::filesystem::path resolve_preset(const std::string& name) {
    const std::filesystem::path p(name);
    if (p.has_parent_path() || p.has_extension()) return p;
    const char* env = std::getenv("PRONY_PRESET_DIR");
    const std::filesystem::path dir = env && *env ? std::filesystem::path(env) : std::filesystem::path(PRONY_PRESET_DIR);
    return dir / (name + ".cfg");
}

void validate(const RunConfig& cfg) {
    for (int v : cfg.n)
        if (v < 0) throw ConfigError("--n must be nonnegative");
    if (cfg.M && *cfg.M < 1) throw ConfigError("--M must be positive");
    if (!(cfg.rank_tol > 0.0 && cfg.rank_tol < 1.0)) throw ConfigError("--rank-tol must lie in (0, 1)");
    if (cfg.rank_rule != "threshold" && cfg.rank_rule != "largest-drop")
        throw ConfigError("--rank-rule must be 'threshold' or 'largest-drop'");
    if (!(cfg.gap_tol >= 0.0)) throw ConfigError("--gap-tol must be nonnegative");
    if (cfg.max_retries < 0) throw ConfigError("--retries must be nonnegative");
    if (!(cfg.b > 0.0)) throw ConfigError("--b must be positive");
    if (cfg.P < 0 || cfg.P == 1) throw ConfigError("--P must be at least 2");
    if (cfg.snr && !(*cfg.snr > 0.0)) throw ConfigError("--snr must be positive");
    for (double e : cfg.epsilon)
        if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("--epsilon must lie in [0, 1]");
    for (int v : cfg.d)
        if (v < 1) throw ConfigError("--d must be positive");
    for (double v : cfg.q)
        if (!(v > 0.0 && v < 2.0)) throw ConfigError("--q must lie in (0, 2)");
    if (cfg.resolution < 2) throw ConfigError("--resolution must be at least 2");
    if (cfg.shift_radius < 0) throw ConfigError("--shift-radius must be nonnegative");
    if (cfg.background != "none" && cfg.background != "median")
        throw ConfigError("--background must be 'none' or 'median'");
    if (cfg.pgm_scale < 0.0) throw ConfigError("--pgm-scale must be nonnegative");
    if (cfg.min_sep < 0.0) throw ConfigError("--min-sep must be nonnegative");
}

}  // namespace prony::cli
