#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "prony/error.hpp"
#include "prony/kernels.hpp"
#include "prony/pencil.hpp"
#include "prony/randsphere.hpp"

using namespace prony;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXcd basis(int d, int i) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d);
    e(i) = 1.0;
    return e;
}

}  // namespace

TEST(Sphere, UnitNorm) {
    Rng rng(1);
    for (int d = 1; d <= 6; ++d)
        for (int i = 0; i < 100; ++i) EXPECT_NEAR(sample_complex_sphere(d, rng).norm(), 1.0, 1e-12);
}

TEST(Sphere, OneDimensionalPhaseIsUniform) {
    Rng rng(2024);
    const int N = 10000;
    std::vector<double> u(N);
    for (int i = 0; i < N; ++i) {
        const Eigen::VectorXcd mu = sample_complex_sphere(1, rng);
        EXPECT_NEAR(std::abs(mu(0)), 1.0, 1e-12);
        u[static_cast<std::size_t>(i)] = (std::arg(mu(0)) + kPi) / (2.0 * kPi);
    }
    std::sort(u.begin(), u.end());
    double D = 0.0;
    for (int i = 0; i < N; ++i) {
        const double x = u[static_cast<std::size_t>(i)];
        D = std::max({D, (i + 1.0) / N - x, x - static_cast<double>(i) / N});
    }
    // Asymptotic Kolmogorov critical value at the 1% level.
    EXPECT_LT(std::sqrt(static_cast<double>(N)) * D, 1.628);
}

TEST(Sphere, ComponentSecondMoment) {
    Rng rng(3);
    const int N = 100000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < N; ++i) {
        const double v = std::norm(sample_complex_sphere(3, rng)(0));
        s += v;
        s2 += v * v;
    }
    const double mean = s / N;
    const double sd = std::sqrt((s2 / N - mean * mean) / N);
    EXPECT_NEAR(mean, 1.0 / 3.0, 3.0 * sd);
}

TEST(IncompleteBeta, EndpointsAndDomain) {
    for (double a : {0.5, 1.0, 2.5})
        for (double b : {0.5, 1.5, 7.5}) {
            EXPECT_DOUBLE_EQ(reg_incomplete_beta(1.0, a, b), 1.0);
            EXPECT_DOUBLE_EQ(reg_incomplete_beta(0.0, a, b), 0.0);
        }
    EXPECT_THROW(reg_incomplete_beta(-0.1, 1, 1), ConfigError);
    EXPECT_THROW(reg_incomplete_beta(1.1, 1, 1), ConfigError);
    EXPECT_THROW(reg_incomplete_beta(0.5, 0.0, 1), ConfigError);
    EXPECT_THROW(reg_incomplete_beta(0.5, 1, -1), ConfigError);
}

TEST(IncompleteBeta, ArcsinIdentity) {
    for (double x = 0.0; x <= 1.0; x += 0.01)
        EXPECT_NEAR(reg_incomplete_beta(x, 0.5, 0.5), 2.0 / kPi * std::asin(std::sqrt(x)), 1e-12) << x;
}

TEST(IncompleteBeta, MatchesQuadrature) {
    // With t = u^2 the integrand t^{a-1}(1-t)^{b-1} dt becomes 2 u^{2a-1} (1-u^2)^{b-1} du,
    // which is smooth for a = 1/2.
    const auto check = [](double x, double a, double b) {
        const double num = oracle::simpson(
            [&](double u) { return 2.0 * std::pow(u, 2 * a - 1) * std::pow(1 - u * u, b - 1); }, 0.0, std::sqrt(x));
        const double B = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
        EXPECT_NEAR(reg_incomplete_beta(x, a, b), num / B, 1e-10) << x << " " << a << " " << b;
    };
    check(0.25, 0.5, 1.5);
    for (double x : {0.01, 0.1, 0.5, 0.81})
        for (int d = 1; d <= 8; ++d) check(x, 0.5, d - 0.5);
    check(0.3, 2.0, 3.0);
    check(0.9, 3.5, 1.0);
}

TEST(BandMeasure, Examples) {
    for (int d = 1; d <= 6; ++d) {
        EXPECT_EQ(band_measure(0.0, d), 0.0);
        EXPECT_NEAR(band_measure(1.0, d), 1.0, 1e-15);
    }
    EXPECT_NEAR(band_measure(0.5, 1), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(band_measure(0.1, 4), band_measure_series(0.1, 4), 1e-10);
    EXPECT_THROW(band_measure(1.5, 2), ConfigError);
    EXPECT_THROW(band_measure(-0.5, 2), ConfigError);
}

TEST(BandMeasure, SeriesClosedForm) {
    for (double e = 0.0; e <= 1.0; e += 0.1) EXPECT_NEAR(band_measure_series(e, 1), 2.0 / kPi * std::asin(e), 1e-15);
    EXPECT_NEAR(band_measure_series(0.3, 2), 2.0 / kPi * (std::asin(0.3) + 0.3 * std::sqrt(1 - 0.09)), 1e-15);

    // Literal coefficient 4^{k-2}((k-2)!)^2 / ((2k-3)(2k-4)!) from factorials.
    const double eps = 0.37;
    for (int d = 1; d <= 8; ++d) {
        double sum = 0.0;
        for (int k = 2; k <= d; ++k) {
            const double coef = std::pow(4.0, k - 2) * std::pow(std::tgamma(k - 1.0), 2) /
                                ((2.0 * k - 3.0) * std::tgamma(2.0 * k - 3.0));
            sum += coef * std::pow(1 - eps * eps, k - 1.5);
        }
        EXPECT_NEAR(band_measure_series(eps, d), 2.0 / kPi * (std::asin(eps) + eps * sum), 1e-13) << d;
    }
}

TEST(BandMeasure, SeriesMatchesIncompleteBetaOnGrid) {
    for (int i = 0; i <= 20; ++i)
        for (int d = 1; d <= 8; ++d) {
            const double e = 0.05 * i;
            EXPECT_NEAR(band_measure(e, d), band_measure_series(e, d), 1e-10) << e << " " << d;
        }
    for (int i = 0; i <= 200; ++i)
        for (int d = 1; d <= 12; ++d) {
            const double e = 0.005 * i;
            EXPECT_NEAR(band_measure(e, d), band_measure_series(e, d), 1e-10) << e << " " << d;
        }
}

TEST(BandMeasure, InequalityChainAndMonotonicity) {
    for (int d = 1; d <= 10; ++d) {
        double prev = -1.0;
        for (int i = 0; i <= 100; ++i) {
            const double e = 0.01 * i;
            const double band = band_measure(e, d);
            EXPECT_LE(beta_chain_bound(e, d), theorem_bound(e, d) + 1e-15);
            if (d >= 2) EXPECT_LE(band, beta_chain_bound(e, d) + 1e-15);
            // d = 1: (2/pi) arcsin(eps) exceeds 2 eps / pi, the bound goes through 2 eps / sqrt(pi) instead.
            if (d == 1) EXPECT_LE(band, 2.0 / std::sqrt(kPi) * e + 1e-15);
            if (d == 1 && e > 0.0) EXPECT_GT(band, beta_chain_bound(e, d));
            if (d >= 2) EXPECT_LE(exact_event_probability(e, d), band + 1e-15);
            EXPECT_GE(band, prev);
            prev = band;
            if (d > 1) EXPECT_GE(band + 1e-15, band_measure(e, d - 1));
        }
    }
    EXPECT_EQ(theorem_bound(0.0, 3), 0.0);
    EXPECT_NEAR(theorem_bound(0.1, 3), 0.19544100476116796, 1e-15);
    EXPECT_NEAR(union_bound(0.1, 3, 5), 10 * theorem_bound(0.1, 3), 1e-15);
}

TEST(ExactLaw, MatchesIndependentSampler) {
    // Second generator and a direct Gaussian construction, not the library sampler.
    std::ranlux48 gen(11);
    std::normal_distribution<double> g;
    for (int d : {2, 3, 5}) {
        const double eps = 0.3;
        const int N = 20000;
        int hits = 0;
        for (int t = 0; t < N; ++t) {
            double norm2 = 0.0, first = 0.0;
            for (int l = 0; l < 2 * d; ++l) {
                const double x = g(gen);
                norm2 += x * x;
                if (l < 2) first += x * x;
            }
            if (first / norm2 < eps * eps) ++hits;
        }
        const double p = exact_event_probability(eps, d);
        EXPECT_NEAR(static_cast<double>(hits) / N, p, 4.0 * std::sqrt(p * (1 - p) / N)) << d;
    }
    EXPECT_EQ(exact_event_probability(0.5, 1), 0.0);
}

TEST(GapExperiment, ThreeDimensionalFrequency) {
    const GapExperimentReport r = mc_gap_experiment(basis(3, 0), Eigen::VectorXcd::Zero(3), 0.1, 100000, 5);
    const double p = 1.0 - 0.99 * 0.99;
    EXPECT_NEAR(r.exact_law_freq, 0.0199, 1e-12);
    const double sigma = std::sqrt(p * (1 - p) / 1e5);
    EXPECT_NEAR(r.empirical_freq, p, 3.0 * sigma);
    EXPECT_LE(r.empirical_freq, r.bound);
    EXPECT_NEAR(r.bound, 0.1954, 1e-4);
    EXPECT_GE(r.empirical_freq, 0.0);
    EXPECT_LE(r.empirical_freq, 1.0);
}

TEST(GapExperiment, OneDimensionNeverHits) {
    Eigen::VectorXcd a(1), b(1);
    a(0) = std::polar(1.0, 0.3);
    b(0) = std::polar(1.0, 2.1);
    const GapExperimentReport r = mc_gap_experiment(a, b, 0.9, 10000, 1);
    EXPECT_EQ(r.empirical_freq, 0.0);
    EXPECT_EQ(r.exact_law_freq, 0.0);
}

TEST(GapExperiment, SecondMomentIdentity) {
    const ParameterSet p = random_params(2, 2, 4);
    const Eigen::MatrixXcd z = p.nodes();
    const GapExperimentReport r = mc_gap_experiment(z.row(0).transpose(), z.row(1).transpose(), 0.1, 100000, 12);
    const double norm2 = r.pair_distance * r.pair_distance;
    EXPECT_NEAR(r.pair_distance, (z.row(0) - z.row(1)).norm(), 1e-14);
    EXPECT_NEAR(r.mean_sq_gap * 2 / norm2, 1.0, 3.0 * r.mean_sq_stderr * 2 / norm2);
}

TEST(GapExperiment, ConvergesAtMonteCarloRate) {
    for (std::uint64_t trials : {10000ull, 100000ull, 1000000ull}) {
        const GapExperimentReport r = mc_gap_experiment(basis(4, 1), Eigen::VectorXcd::Zero(4), 0.2, trials, 77);
        const double p = exact_event_probability(0.2, 4);
        EXPECT_NEAR(r.empirical_freq, p, 3.0 * std::sqrt(p * (1 - p) / static_cast<double>(trials))) << trials;
    }
}

TEST(GapExperiment, UnionVariantBelowUnionBound) {
    const ParameterSet p = random_params(5, 2, 9, {.min_sep = 0.3});
    const GapExperimentReport r = mc_gap_experiment(p, 0.05, 50000, 2);
    EXPECT_TRUE(r.union_variant);
    EXPECT_TRUE(std::isnan(r.exact_law_freq));
    EXPECT_NEAR(r.bound, union_bound(0.05, 2, 5), 1e-15);
    EXPECT_LE(r.empirical_freq, r.bound);
    EXPECT_GT(r.empirical_freq, 0.0);
}

TEST(GapExperiment, DeterministicAndThreadIndependent) {
    const GapExperimentReport a = mc_gap_experiment(basis(3, 0), basis(3, 1), 0.2, 50000, 3);
    const GapExperimentReport b = mc_gap_experiment(basis(3, 0), basis(3, 1), 0.2, 50000, 3);
    EXPECT_EQ(a.empirical_freq, b.empirical_freq);
    EXPECT_EQ(a.mean_sq_gap, b.mean_sq_gap);
}

TEST(GapExperiment, Errors) {
    EXPECT_THROW(mc_gap_experiment(basis(2, 0), basis(2, 0), 0.1, 10, 1), ConfigError);
    EXPECT_THROW(mc_gap_experiment(basis(2, 0), basis(2, 1), 0.1, 0, 1), ConfigError);
    EXPECT_THROW(mc_gap_experiment(random_params(1, 2, 1), 0.1, 10, 1), ConfigError);
}

TEST(GapMap, HopfDirectionIsUnitAndModeNames) {
    for (double th : {0.1, 1.0, 3.0})
        for (double ph : {0.0, 2.0, 6.0}) {
            EXPECT_NEAR(gap_map_direction(GapMapMode::hopf_d2, th, ph).norm(), 1.0, 1e-15);
            const Eigen::VectorXcd r = gap_map_direction(GapMapMode::real_sphere_d3, th, ph);
            EXPECT_NEAR(r.norm(), 1.0, 1e-15);
            EXPECT_EQ(r.imag().norm(), 0.0);
        }
    EXPECT_EQ(parse_gap_map_mode("hopf-d2"), GapMapMode::hopf_d2);
    EXPECT_EQ(to_string(GapMapMode::real_sphere_d3), "real-sphere-d3");
    EXPECT_THROW(parse_gap_map_mode("torus"), ConfigError);
}

TEST(GapMap, ModeDimensionMismatch) {
    EXPECT_THROW(emit_gap_map(random_params(3, 3, 1).nodes(), GapMapMode::hopf_d2, 10, 20), ConfigError);
    EXPECT_THROW(emit_gap_map(random_params(3, 2, 1).nodes(), GapMapMode::real_sphere_d3, 10, 20), ConfigError);
}

TEST(GapMap, SingleSourceIsUndefined) {
    const GapMap m = emit_gap_map(random_params(1, 2, 1).nodes(), GapMapMode::hopf_d2, 4, 8);
    EXPECT_TRUE(m.undefined);
    for (double g : m.gap) EXPECT_EQ(g, kGapUndefined);
}

TEST(GapMap, PencilAndClosedFormAgree) {
    const ParameterSet p = random_params(5, 2, 13, {.min_sep = 0.3});
    const PencilMatrices pm = assemble_pencil_matrices(sample_grid(p, 4), GridOrder(2, 4));
    const auto S = build_pencil(reduced_svd_rank(pm.T), pm.shifts);
    const GapMap a = emit_gap_map(S, GapMapMode::hopf_d2, 20, 40);
    const GapMap b = emit_gap_map(p.nodes(), GapMapMode::hopf_d2, 20, 40);
    for (std::size_t i = 0; i < a.gap.size(); ++i) EXPECT_NEAR(a.gap[i], b.gap[i], 1e-8);
}

TEST(GapMap, HopfMinimaCountedByPairs) {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
        const ParameterSet p = random_params(5, 2, seed);
        const GapMap m = emit_gap_map(p.nodes(), GapMapMode::hopf_d2, 200, 400);
        const int minima = count_local_minima(m, 1e-2);
        EXPECT_GE(minima, 1) << seed;
        EXPECT_LE(minima, 10) << seed;
    }
}

TEST(GapMap, RealModeNearZeroSetIsGreatCircles) {
    // Real nodes: each zero set {mu : <z_i - z_j, mu> = 0} is a great circle on S^2,
    // so the area of the tau-neighbourhood grows linearly in tau.
    Rng rng(8);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd z(5, 3);
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = g(rng);
    const GapMap m = emit_gap_map(z, GapMapMode::real_sphere_d3, 400, 800);
    const double f1 = area_fraction_below(m, 1e-3);
    const double f2 = area_fraction_below(m, 2e-3);
    const double f4 = area_fraction_below(m, 4e-3);
    EXPECT_GT(f1, 0.0);
    EXPECT_NEAR(f2 / f1, 2.0, 0.3);
    EXPECT_NEAR(f4 / f2, 2.0, 0.3);

    // Band of half-width tau around a great circle has relative area tau / ||y||;
    // the union over 10 circles is bounded by the sum.
    double bound = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) bound += 4e-3 / (z.row(i) - z.row(j)).norm();
    EXPECT_LE(f4, 1.3 * bound);
    EXPECT_GE(f4, 0.5 * bound);
}

TEST(GapMap, SerialAndParallelGridAgree) {
    const ParameterSet p = random_params(4, 2, 5);
    const Eigen::MatrixXcd z = p.nodes();
    std::vector<Eigen::VectorXcd> dirs;
    for (int i = 0; i < 50; ++i) dirs.push_back(sample_complex_sphere(2, static_cast<std::uint64_t>(i)));
    const kernels::GapFunction f = [&](const Eigen::VectorXcd& mu) {
        return min_pairwise_gap((z * mu.conjugate()).eval());
    };
    EXPECT_EQ(kernels::serial::gap_grid(dirs, f), kernels::omp::gap_grid(dirs, f));
}
