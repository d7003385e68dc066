#include "relrep/io/config.hpp"

#include "relrep/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

namespace relrep::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string key_error(std::string_view what, std::string_view text, std::string_view expected) {
    return std::string(what) + ": cannot parse '" + std::string(text) + "' as " + std::string(expected);
}

} // namespace

double parse_real(std::string_view text, std::string_view what) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError(key_error(what, text, "a number"));
    }
    return value;
}

long long parse_integer(std::string_view text, std::string_view what) {
    text = trim(text);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError(key_error(what, text, "an integer"));
    }
    return value;
}

bool parse_bool(std::string_view text, std::string_view what) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(key_error(what, text, "a boolean"));
}

void validate(const RunConfig& cfg) {
    if (!(cfg.zeta > 0.0) || !std::isfinite(cfg.zeta)) throw ConfigError("zeta must be positive");
    if (!(cfg.rho_d > 0.0) || !std::isfinite(cfg.rho_d)) throw ConfigError("rho_d must be positive");
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw ConfigError("level must lie in (0, 1)");
}

KeyValues parse_key_values(std::istream& in, std::string_view source) {
    KeyValues out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(source) + ":" + std::to_string(line_no)
                              + ": expected key=value");
        }
        const std::string_view key = trim(body.substr(0, eq));
        if (key.empty()) {
            throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": empty key");
        }
        out[std::string(key)] = std::string(trim(body.substr(eq + 1)));
    }
    return out;
}

KeyValues load_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    return parse_key_values(in, path.string());
}

RunConfig apply_run_config(RunConfig cfg, const KeyValues& values) {
    for (const auto& [key, value] : values) {
        if (key == "zeta") {
            cfg.zeta = parse_real(value, key);
        } else if (key == "rho_d") {
            cfg.rho_d = parse_real(value, key);
        } else if (key == "level") {
            cfg.level = parse_real(value, key);
        } else if (key == "df_policy") {
            try {
                cfg.df_policy = parse_df_policy(value);
            } catch (const UsageError& e) {
                throw ConfigError(e.what());
            }
        } else if (key == "sign_align") {
            cfg.sign_align = parse_bool(value, key);
        } else if (key == "bsv_formula") {
            if (value == "printed") {
                cfg.bsv_formula = BsvFormula::printed;
            } else if (value == "moment-consistent") {
                cfg.bsv_formula = BsvFormula::moment_consistent;
            } else {
                throw ConfigError("bsv_formula: expected printed or moment-consistent");
            }
        } else {
            throw ConfigError("unknown configuration key '" + key + "'");
        }
    }
    validate(cfg);
    return cfg;
}

SimConfig apply_sim_config(SimConfig cfg, const KeyValues& values) {
    auto positive_int = [](const std::string& key, const std::string& value) {
        const long long v = parse_integer(value, key);
        if (v < 2 || v > 100'000'000) throw ConfigError(key + " must lie in [2, 1e8]");
        return static_cast<int>(v);
    };
    for (const auto& [key, value] : values) {
        if (key == "n_o") {
            cfg.n_o = positive_int(key, value);
        } else if (key == "n_r") {
            cfg.n_r = positive_int(key, value);
        } else if (key == "true_eff") {
            cfg.true_eff = parse_real(value, key);
        } else if (key == "bsv") {
            cfg.bsv = parse_real(value, key);
        } else if (key == "n_sims") {
            const long long v = parse_integer(value, key);
            if (v < 1) throw ConfigError("n_sims must be at least 1");
            cfg.n_sims = static_cast<std::uint64_t>(v);
        } else if (key == "seed") {
            std::uint64_t seed = 0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
            if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
                throw ConfigError("seed: expected an unsigned 64-bit integer");
            }
            cfg.seed = seed;
        } else if (key == "alpha") {
            cfg.alpha = parse_real(value, key);
        } else if (key == "selection") {
            cfg.selection = parse_bool(value, key);
        } else if (key == "original_at_truth") {
            cfg.original_at_truth = parse_bool(value, key);
        } else if (key == "model") {
            cfg.model = parse_sim_model(value);
        } else if (key == "zeta") {
            cfg.zeta = parse_real(value, key);
        } else if (key == "rho_d") {
            cfg.rho_d = parse_real(value, key);
        } else if (key == "df_policy") {
            try {
                cfg.df_policy = parse_df_policy(value);
            } catch (const UsageError& e) {
                throw ConfigError(e.what());
            }
        } else if (key == "threads") {
            const long long v = parse_integer(value, key);
            if (v < 1 || v > 1024) throw ConfigError("threads must lie in [1, 1024]");
            cfg.threads = static_cast<unsigned>(v);
        } else {
            throw ConfigError("unknown simulation key '" + key + "'");
        }
    }
    validate(cfg);
    return cfg;
}

} // namespace relrep::io
