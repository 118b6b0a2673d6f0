#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "prony/microscopy.hpp"
#include "prony/model.hpp"

namespace prony {

/// Max over sources of the torus distance to the matched recovered source,
/// minimized over matchings. Infinity when the counts differ.
double location_error(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& found);

/// Two close sources at node separation q plus one far source, d = 2.
/// The close pair differs in the first coordinate by asin(q/2)/pi.
ParameterSet separation_params(double q);

struct SweepOptions {
    int seeds = 25;
    double snr = 2.554;
    int P = 31;
    PsfModel psf{};
    std::uint64_t seed = 0;
    double failure_error = 0.05;  // a run fails on wrong source count or error above this
    LocalizeOptions localize{};
};

struct SweepCell {
    double q = 0.0;
    int n = 0;
    std::vector<double> errors;  // per seed, +inf on wrong count or stage error
    std::vector<int> ranks;      // per seed, 0 on stage error
    double median_error = 0.0;
    double max_error = 0.0;
    double failure_fraction = 0.0;
};

/// Noisy localization of `truth` over several noise realizations.
SweepCell run_sweep_cell(const ParameterSet& truth, int n, const SweepOptions& opts);

}  // namespace prony
