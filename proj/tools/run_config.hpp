#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "prony/model.hpp"

namespace prony::cli {

/// Settings for one command. Filled from defaults, then a preset file, then
/// command-line flags, each layer overriding the one before.
struct RunConfig {
    std::string command;

    std::vector<int> n{4};  // several values only for sweep-separation
    std::optional<int> M;   // source count for synth and gap-map, forced rank otherwise
    double rank_tol = 1e-6;
    bool rank_tol_set = false;
    std::string rank_rule = "threshold";
    bool rank_rule_set = false;
    double gap_tol = 1e-6;
    int max_retries = 8;
    std::uint64_t seed = 0;

    double b = 150.0;
    int P = 0;
    std::optional<double> snr;
    std::uint64_t trials = 0;  // 0 means the command's own default
    std::vector<double> epsilon;
    std::vector<int> d;
    std::vector<double> q;
    std::string mode;
    int resolution = 200;
    int shift_radius = 1;
    std::string background = "none";
    double offset = 0.0;
    double pgm_scale = 0.0;  // 0 picks a scale that maps the brightest pixel to the max value
    double min_sep = 0.0;

    std::string in;
    std::string out = ".";

    std::vector<std::vector<double>> sources;  // rows t_1..t_d, c_re, c_im

    /// Single n; rejects lists.
    int order() const;
    /// Single d, or `fallback` when unset.
    int dim(int fallback) const;
    /// Sources given in a preset, if any.
    std::optional<ParameterSet> preset_params() const;
};

/// Sets one key from its textual values. Unknown keys and malformed values throw ConfigError.
void set_key(RunConfig& cfg, const std::string& key, const std::vector<std::string>& values);

/// Names accepted by set_key.
const std::vector<std::string>& known_keys();

/// Reads `key = value` lines; '#' starts a comment. `source` may repeat.
void apply_preset_file(RunConfig& cfg, const std::filesystem::path& path);

/// A bare name resolves to <preset dir>/<name>.cfg; anything with a slash or
/// extension is used as a path.
std::filesystem::path resolve_preset(const std::string& name);

/// Rejects values outside the preconditions of the operations they feed.
void validate(const RunConfig& cfg);

}  // namespace prony::cli
