#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "prony/model.hpp"
#include "prony/random.hpp"

namespace prony {

/// Uniform (unitarily invariant) point on the complex unit sphere in C^d:
/// 2d standard real Gaussians, normalized.
Eigen::VectorXcd sample_complex_sphere(int d, Rng& rng);
Eigen::VectorXcd sample_complex_sphere(int d, std::uint64_t seed);

/// Regularized incomplete beta I_x(a, b). Continued fraction (modified Lentz),
/// using the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) where it converges faster.
double reg_incomplete_beta(double x, double a, double b);

double beta_function(double a, double b);

/// Measure of the band |Re mu_1| <= eps on S^{2d-1}: I_{eps^2}(1/2, d - 1/2).
double band_measure(double epsilon, int d);

/// Closed form of the band measure as arcsin plus a finite sum.
double band_measure_series(double epsilon, int d);

/// 2 sqrt(d/pi) eps.
double theorem_bound(double epsilon, int d);

/// C(M,2) * 2 sqrt(d/pi) eps: probability bound for any pair violating the gap.
double union_bound(double epsilon, int d, int M);

/// 2 eps / B(1/2, d - 1/2), the intermediate step between the band measure
/// and theorem_bound.
double beta_chain_bound(double epsilon, int d);

/// Exact P(|<y, mu>| < eps) for fixed unit y: |<y,mu>|^2 ~ Beta(1, d-1),
/// so the probability is 1 - (1 - eps^2)^(d-1). For d = 1 it is 0 for eps < 1.
double exact_event_probability(double epsilon, int d);

struct GapExperimentReport {
    int d = 0;
    double epsilon = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    bool union_variant = false;
    double empirical_freq = 0.0;
    double freq_stderr = 0.0;   // binomial, from the empirical frequency
    double bound = 0.0;         // theorem bound (union bound for the union variant)
    double exact_law_freq = 0.0;  // NaN for the union variant
    double band = 0.0;          // band_measure(eps, d)
    double mean_sq_gap = 0.0;   // mean |lambda_i - lambda_j|^2 (unnormalized)
    double mean_sq_stderr = 0.0;
    double pair_distance = 0.0;  // ||z_i - z_j|| of the designated pair (min pair for union)
};

/// Monte Carlo for the gap event |<z_i - z_j, mu>| < eps ||z_i - z_j||.
/// Trials are split in fixed-size blocks seeded from (seed, block index), so the
/// result does not depend on the number of worker threads.
GapExperimentReport mc_gap_experiment(const Eigen::VectorXcd& zi, const Eigen::VectorXcd& zj, double epsilon,
                                      std::uint64_t trials, std::uint64_t seed);

/// Union variant over all pairs of `params`: the event is that any pair violates.
GapExperimentReport mc_gap_experiment(const ParameterSet& params, double epsilon, std::uint64_t trials,
                                      std::uint64_t seed);

enum class GapMapMode { hopf_d2, real_sphere_d3 };

GapMapMode parse_gap_map_mode(const std::string& name);
std::string to_string(GapMapMode mode);

/// Min pairwise eigenvalue gap of C_mu on a latitude-longitude grid.
/// Latitudes sit at cell centers so no row collapses onto a pole.
struct GapMap {
    GapMapMode mode = GapMapMode::hopf_d2;
    int n_theta = 0;
    int n_phi = 0;
    std::vector<double> theta;  // n_theta
    std::vector<double> phi;    // n_phi
    std::vector<double> gap;    // n_theta * n_phi, theta slowest; kGapUndefined if M == 1
    bool undefined = false;

    double at(int i, int j) const { return gap[static_cast<std::size_t>(i) * n_phi + j]; }
};

inline constexpr double kGapUndefined = -1.0;

/// Direction on the sphere for grid angles. hopf_d2 lifts a point of S^2 to
/// mu = (cos(theta/2), e^{i phi} sin(theta/2)); real_sphere_d3 is the real unit vector.
Eigen::VectorXcd gap_map_direction(GapMapMode mode, double theta, double phi);

/// Gap map from pencil matrices (eigenvalues of C_mu are computed numerically).
GapMap emit_gap_map(std::span<const Eigen::MatrixXcd> S, GapMapMode mode, int n_theta, int n_phi);

/// Gap map from known nodes (eigenvalues <z_j, mu> in closed form).
GapMap emit_gap_map(const Eigen::MatrixXcd& nodes, GapMapMode mode, int n_theta, int n_phi);

/// Grid-local minima (8-neighbourhood, periodic in phi) whose gap is below `threshold`.
int count_local_minima(const GapMap& map, double threshold);

/// Fraction of grid points with gap below `threshold`, weighted by cell area.
double area_fraction_below(const GapMap& map, double threshold);

}  // namespace prony
