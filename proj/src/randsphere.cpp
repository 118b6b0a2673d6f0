#include "prony/randsphere.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "prony/error.hpp"
#include "prony/kernels.hpp"
#include "prony/pencil.hpp"

namespace prony {

namespace {

constexpr double kPi = std::numbers::pi;

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double x, double a, double b) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw NumericalError("incomplete beta", "continued fraction did not converge");
}

void check_epsilon(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0,1]");
}

void check_dim(int d) {
    if (d < 1) throw ConfigError("dimension d must be at least 1");
}

GapExperimentReport finish_report(const kernels::GapTally& tally, int d, double epsilon, std::uint64_t seed) {
    GapExperimentReport r;
    r.d = d;
    r.epsilon = epsilon;
    r.trials = tally.trials;
    r.seed = seed;
    const auto N = static_cast<double>(tally.trials);
    r.empirical_freq = static_cast<double>(tally.below) / N;
    r.freq_stderr = std::sqrt(r.empirical_freq * (1.0 - r.empirical_freq) / N);
    r.mean_sq_gap = tally.sum_sq / N;
    const double var = std::max(0.0, tally.sum_sq_sq / N - r.mean_sq_gap * r.mean_sq_gap);
    r.mean_sq_stderr = std::sqrt(var / N);
    r.band = band_measure(epsilon, d);
    return r;
}

}  // namespace

Eigen::VectorXcd sample_complex_sphere(int d, Rng& rng) {
    check_dim(d);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd mu(d);
    for (;;) {
        for (int l = 0; l < d; ++l) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            mu(l) = cdouble(re, im);
        }
        const double nrm = mu.norm();
        if (nrm > 0.0) return mu / nrm;
    }
}

Eigen::VectorXcd sample_complex_sphere(int d, std::uint64_t seed) {
    Rng rng(seed);
    return sample_complex_sphere(d, rng);
}

double beta_function(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double reg_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("incomplete beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("incomplete beta: x must lie in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front =
        std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(x, a, b) / a;
    return 1.0 - front * beta_cf(1.0 - x, b, a) / b;
}

double band_measure(double epsilon, int d) {
    check_epsilon(epsilon);
    check_dim(d);
    return reg_incomplete_beta(epsilon * epsilon, 0.5, d - 0.5);
}

double band_measure_series(double epsilon, int d) {
    check_epsilon(epsilon);
    check_dim(d);
    const double one_minus = 1.0 - epsilon * epsilon;
    double sum = 0.0;
    // a_k = 4^{k-2} ((k-2)!)^2 / ((2k-3) (2k-4)!), a_2 = 1, a_{k+1} = a_k 2(k-1)/(2k-1)
    double a = 1.0;
    for (int k = 2; k <= d; ++k) {
        sum += a * std::pow(one_minus, k - 1.5);
        a *= 2.0 * (k - 1) / (2.0 * k - 1.0);
    }
    return (2.0 / kPi) * (std::asin(epsilon) + epsilon * sum);
}

double theorem_bound(double epsilon, int d) {
    check_epsilon(epsilon);
    check_dim(d);
    return 2.0 * std::sqrt(d / kPi) * epsilon;
}

double union_bound(double epsilon, int d, int M) {
    if (M < 2) return 0.0;
    return 0.5 * M * (M - 1) * theorem_bound(epsilon, d);
}

double beta_chain_bound(double epsilon, int d) {
    check_epsilon(epsilon);
    check_dim(d);
    return 2.0 * epsilon / beta_function(0.5, d - 0.5);
}

double exact_event_probability(double epsilon, int d) {
    check_epsilon(epsilon);
    check_dim(d);
    if (d == 1) return 0.0;
    return 1.0 - std::pow(1.0 - epsilon * epsilon, d - 1);
}

GapExperimentReport mc_gap_experiment(const Eigen::VectorXcd& zi, const Eigen::VectorXcd& zj, double epsilon,
                                      std::uint64_t trials, std::uint64_t seed) {
    check_epsilon(epsilon);
    if (trials < 1) throw ConfigError("mc_gap_experiment: trials must be at least 1");
    if (zi.size() != zj.size() || zi.size() < 1) throw ConfigError("mc_gap_experiment: node dimension mismatch");
    const Eigen::VectorXcd y = zi - zj;
    if (y.norm() == 0.0) throw ConfigError("mc_gap_experiment: degenerate pair (z_i == z_j)");

    const Eigen::MatrixXcd diffs = y.transpose();
    const int d = static_cast<int>(zi.size());
    GapExperimentReport r = finish_report(kernels::omp::gap_trials(diffs, epsilon, trials, seed), d, epsilon, seed);
    r.bound = theorem_bound(epsilon, d);
    r.exact_law_freq = exact_event_probability(epsilon, d);
    r.pair_distance = y.norm();
    return r;
}

GapExperimentReport mc_gap_experiment(const ParameterSet& params, double epsilon, std::uint64_t trials,
                                      std::uint64_t seed) {
    check_epsilon(epsilon);
    if (trials < 1) throw ConfigError("mc_gap_experiment: trials must be at least 1");
    const int M = params.order();
    if (M < 2) throw ConfigError("mc_gap_experiment: need at least two nodes");
    const Eigen::MatrixXcd z = params.nodes();
    Eigen::MatrixXcd diffs(M * (M - 1) / 2, z.cols());
    Eigen::Index row = 0;
    double min_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < M; ++i)
        for (int j = i + 1; j < M; ++j) {
            diffs.row(row) = z.row(i) - z.row(j);
            const double dist = diffs.row(row).norm();
            if (dist == 0.0) throw ConfigError("mc_gap_experiment: degenerate pair (z_i == z_j)");
            min_dist = std::min(min_dist, dist);
            ++row;
        }
    const int d = params.dim();
    GapExperimentReport r = finish_report(kernels::omp::gap_trials(diffs, epsilon, trials, seed), d, epsilon, seed);
    r.union_variant = true;
    r.bound = union_bound(epsilon, d, M);
    r.exact_law_freq = std::numeric_limits<double>::quiet_NaN();
    r.pair_distance = min_dist;
    return r;
}

GapMapMode parse_gap_map_mode(const std::string& name) {
    if (name == "hopf-d2") return GapMapMode::hopf_d2;
    if (name == "real-sphere-d3") return GapMapMode::real_sphere_d3;
    throw ConfigError("unknown gap map mode '" + name + "' (expected hopf-d2 or real-sphere-d3)");
}

std::string to_string(GapMapMode mode) {
    return mode == GapMapMode::hopf_d2 ? "hopf-d2" : "real-sphere-d3";
}

Eigen::VectorXcd gap_map_direction(GapMapMode mode, double theta, double phi) {
    if (mode == GapMapMode::hopf_d2) {
        Eigen::VectorXcd mu(2);
        mu(0) = std::cos(theta / 2.0);
        mu(1) = std::polar(std::sin(theta / 2.0), phi);
        return mu;
    }
    Eigen::VectorXcd mu(3);
    mu(0) = std::sin(theta) * std::cos(phi);
    mu(1) = std::sin(theta) * std::sin(phi);
    mu(2) = std::cos(theta);
    return mu;
}

namespace {

GapMap make_grid(GapMapMode mode, int d, int n_theta, int n_phi, std::vector<Eigen::VectorXcd>& directions) {
    const int expected = mode == GapMapMode::hopf_d2 ? 2 : 3;
    if (d != expected)
        throw ConfigError("gap map mode " + to_string(mode) + " requires d = " + std::to_string(expected) +
                          ", got d = " + std::to_string(d));
    if (n_theta < 2 || n_phi < 3) throw ConfigError("gap map resolution too small");
    GapMap map;
    map.mode = mode;
    map.n_theta = n_theta;
    map.n_phi = n_phi;
    for (int i = 0; i < n_theta; ++i) map.theta.push_back((i + 0.5) * kPi / n_theta);
    for (int j = 0; j < n_phi; ++j) map.phi.push_back(2.0 * kPi * j / n_phi);
    directions.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (double th : map.theta)
        for (double ph : map.phi) directions.push_back(gap_map_direction(mode, th, ph));
    return map;
}

}  // namespace

GapMap emit_gap_map(std::span<const Eigen::MatrixXcd> S, GapMapMode mode, int n_theta, int n_phi) {
    std::vector<Eigen::VectorXcd> directions;
    GapMap map = make_grid(mode, static_cast<int>(S.size()), n_theta, n_phi, directions);
    if (S.front().rows() < 2) {
        map.undefined = true;
        map.gap.assign(directions.size(), kGapUndefined);
        return map;
    }
    map.gap = kernels::omp::gap_grid(directions, [S](const Eigen::VectorXcd& mu) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(combine_pencil(S, mu), false);
        return min_pairwise_gap(solver.eigenvalues());
    });
    return map;
}

GapMap emit_gap_map(const Eigen::MatrixXcd& nodes, GapMapMode mode, int n_theta, int n_phi) {
    std::vector<Eigen::VectorXcd> directions;
    GapMap map = make_grid(mode, static_cast<int>(nodes.cols()), n_theta, n_phi, directions);
    if (nodes.rows() < 2) {
        map.undefined = true;
        map.gap.assign(directions.size(), kGapUndefined);
        return map;
    }
    map.gap = kernels::omp::gap_grid(directions, [&nodes](const Eigen::VectorXcd& mu) {
        // lambda_j = <z_j, mu> = sum_l z_{j,l} conj(mu_l)
        const Eigen::VectorXcd lambdas = nodes * mu.conjugate();
        return min_pairwise_gap(lambdas);
    });
    return map;
}

int count_local_minima(const GapMap& map, double threshold) {
    if (map.undefined) return 0;
    int count = 0;
    for (int i = 0; i < map.n_theta; ++i) {
        for (int j = 0; j < map.n_phi; ++j) {
            const double v = map.at(i, j);
            if (!(v < threshold)) continue;
            bool minimum = true;
            for (int di = -1; di <= 1 && minimum; ++di) {
                const int ii = i + di;
                if (ii < 0 || ii >= map.n_theta) continue;
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int jj = (j + dj + map.n_phi) % map.n_phi;
                    const double w = map.at(ii, jj);
                    // Ties go to the first cell in scan order so plateaus count once.
                    const bool earlier = ii < i || (ii == i && jj < j);
                    if (earlier ? !(v < w) : !(v <= w)) {
                        minimum = false;
                        break;
                    }
                }
            }
            if (minimum) ++count;
        }
    }
    return count;
}

double area_fraction_below(const GapMap& map, double threshold) {
    if (map.undefined) return 0.0;
    double below = 0.0;
    double total = 0.0;
    for (int i = 0; i < map.n_theta; ++i) {
        const double w = std::sin(map.theta[static_cast<std::size_t>(i)]);
        for (int j = 0; j < map.n_phi; ++j) {
            total += w;
            if (map.at(i, j) < threshold) below += w;
        }
    }
    return below / total;
}

}  // namespace prony
