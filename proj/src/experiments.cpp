#include "prony/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "prony/error.hpp"
#include "prony/random.hpp"

namespace prony {

namespace {

double torus_distance(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b, Eigen::Index j) {
    double s = 0.0;
    for (Eigen::Index l = 0; l < a.cols(); ++l) {
        const double d = a(i, l) - b(j, l);
        const double w = d - std::round(d);
        s += w * w;
    }
    return std::sqrt(s);
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

}  // namespace

double location_error(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& found) {
    if (truth.rows() != found.rows() || truth.cols() != found.cols()) return std::numeric_limits<double>::infinity();
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(truth.rows()));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        for (std::size_t j = 0; j < perm.size() && worst < best; ++j)
            worst = std::max(worst, torus_distance(truth, static_cast<Eigen::Index>(j), found, perm[j]));
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

ParameterSet separation_params(double q) {
    if (!(q > 0.0 && q < 2.0)) throw ConfigError("separation: q must lie in (0, 2)");
    const double delta = std::asin(q / 2.0) / std::numbers::pi;
    Eigen::MatrixXd t(3, 2);
    t << 0.5 - delta / 2, 0.45, 0.5 + delta / 2, 0.45, 0.5, 0.62;
    ParameterSet p(t, Eigen::VectorXcd::Ones(3));
    p.validate();
    return p;
}

SweepCell run_sweep_cell(const ParameterSet& truth, int n, const SweepOptions& opts) {
    if (opts.seeds < 1) throw ConfigError("sweep: need at least one seed");
    truth.validate();
    SweepCell cell;
    cell.n = n;
    if (truth.order() >= 2) cell.q = min_separation(truth);
    const ImageGrid clean = render_image(truth, opts.psf, opts.P);
    int failures = 0;
    for (int s = 0; s < opts.seeds; ++s) {
        const std::uint64_t seed = derive_seed(opts.seed, static_cast<std::uint64_t>(s));
        LocalizeOptions lo = opts.localize;
        lo.reconstruct.seed = seed;
        double err = std::numeric_limits<double>::infinity();
        int rank = 0;
        try {
            const ReconstructionResult r = localize(add_noise(clean, opts.snr, seed), opts.psf, n, lo);
            rank = r.rank;
            err = location_error(truth.locations, r.params.locations);
        } catch (const NumericalError&) {
        }
        if (!(err <= opts.failure_error)) ++failures;
        cell.errors.push_back(err);
        cell.ranks.push_back(rank);
    }
    cell.median_error = median(cell.errors);
    cell.max_error = *std::max_element(cell.errors.begin(), cell.errors.end());
    cell.failure_fraction = static_cast<double>(failures) / opts.seeds;
    return cell;
}

}  // namespace prony
