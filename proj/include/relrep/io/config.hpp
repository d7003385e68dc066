#pragma once

#include "relrep/heterogeneity.hpp"
#include "relrep/replication.hpp"
#include "relrep/simulate.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace relrep::io {

struct RunConfig {
    double zeta = kDefaultZeta;
    double rho_d = kDefaultRhoD;
    double level = 0.95;
    DfPolicy df_policy = DfPolicy::own;
    bool sign_align = true;
    BsvFormula bsv_formula = BsvFormula::printed;
};

void validate(const RunConfig& cfg);

/// Flat `key = value` text; blank lines and lines starting with '#' are ignored.
using KeyValues = std::map<std::string, std::string, std::less<>>;

KeyValues parse_key_values(std::istream& in, std::string_view source = "<config>");
KeyValues load_key_values(const std::filesystem::path& path);

/// Overlays recognised keys onto `base`; unknown keys raise ConfigError.
RunConfig apply_run_config(RunConfig base, const KeyValues& values);
SimConfig apply_sim_config(SimConfig base, const KeyValues& values);

double parse_real(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);
bool parse_bool(std::string_view text, std::string_view what);

} // namespace relrep::io
