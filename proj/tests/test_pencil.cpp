#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "prony/error.hpp"
#include "prony/model.hpp"
#include "prony/pencil.hpp"
#include "prony/randsphere.hpp"

using namespace prony;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ParameterSet three_spot() {
    Eigen::MatrixXd t(3, 2);
    t << 0.4, 0.4, 0.4, 0.6, 0.6, 0.4;
    return ParameterSet(t, Eigen::VectorXcd::Ones(3));
}

ParameterSet spike(double t, cdouble c) {
    Eigen::MatrixXd loc(1, 1);
    loc(0, 0) = t;
    Eigen::VectorXcd coef(1);
    coef(0) = c;
    return ParameterSet(loc, coef);
}

std::vector<std::complex<double>> to_vec(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

double spectral_norm(const Eigen::MatrixXcd& A) {
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(A).singularValues()(0);
}

}  // namespace

TEST(GridOrder, LexicographicRoundTrip) {
    const GridOrder order(3, 2);
    EXPECT_EQ(order.size(), 27u);
    const auto expected = oracle::grid(3, 2);
    for (std::size_t p = 0; p < order.size(); ++p) {
        EXPECT_EQ(order.multi_index(p), expected[p]);
        EXPECT_EQ(order.position(order.multi_index(p)), p);
    }
}

TEST(Assemble, SingleSpikeSmallestGrid) {
    const SampleTable s = sample_grid(spike(0.3, 2.0), 0);
    const PencilMatrices pm = assemble_pencil_matrices(s, GridOrder(1, 0));
    ASSERT_EQ(pm.T.rows(), 1);
    EXPECT_LT(std::abs(pm.T(0, 0) - 2.0), 1e-15);
    EXPECT_LT(std::abs(pm.shifts[0](0, 0) - 2.0 * std::polar(1.0, -kTwoPi * 0.3)), 1e-15);
}

TEST(Assemble, PaperSizeAndToeplitzEntries) {
    const ParameterSet p = three_spot();
    const PencilMatrices pm = assemble_pencil_matrices(sample_grid(p, 4), GridOrder(2, 4));
    EXPECT_EQ(pm.T.rows(), 25);
    EXPECT_EQ(pm.T.cols(), 25);
    EXPECT_LT((pm.T - oracle::toeplitz(p.locations, p.coefficients, 4)).norm(), 1e-12);
    EXPECT_LT((pm.shifts[1] - oracle::toeplitz(p.locations, p.coefficients, 4, 1)).norm(), 1e-12);
}

TEST(Assemble, ConstantFunctionGivesAllOnes) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(1, 2);
    const PencilMatrices pm = assemble_pencil_matrices(sample_grid(ParameterSet(t, Eigen::VectorXcd::Ones(1)), 2),
                                                       GridOrder(2, 2));
    EXPECT_LT((pm.T - Eigen::MatrixXcd::Ones(9, 9)).norm(), 1e-14);
    EXPECT_EQ(reduced_svd_rank(pm.T).rank, 1);
}

TEST(Assemble, MissingKeyNamesMultiIndex) {
    SampleTable s = sample_grid(three_spot(), 1);
    SampleTable partial(2, 1);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const MultiIndex k = s.key(i);
        if (!(k[0] == -1 && k[1] == 1)) partial.set(k, s.values()[i]);
    }
    try {
        (void)assemble_pencil_matrices(partial, GridOrder(2, 1));
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("(-1,1)"), std::string::npos) << e.what();
    }
}

TEST(Vandermonde, OnesAndPowers) {
    const Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(1, 2);
    EXPECT_LT((vandermonde(ones, GridOrder(2, 3)) - Eigen::MatrixXcd::Ones(1, 16)).norm(), 1e-15);

    Eigen::MatrixXcd z(1, 1);
    z(0, 0) = std::polar(1.0, -kTwoPi * 0.3);
    const Eigen::MatrixXcd A = vandermonde(z, GridOrder(1, 2));
    EXPECT_LT(std::abs(A(0, 0) - 1.0), 1e-15);
    EXPECT_LT(std::abs(A(0, 1) - z(0, 0)), 1e-15);
    EXPECT_LT(std::abs(A(0, 2) - z(0, 0) * z(0, 0)), 1e-15);
}

TEST(Vandermonde, FactorizationConventionAudit) {
    // T = A^T D conj(A), shifted with D diag(z_l); checked on random complex instances.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int d = 1 + static_cast<int>(seed % 3);
        const int M = 1 + static_cast<int>(seed % 5);
        const int n = 1 + static_cast<int>(seed % 3);
        const ParameterSet p = random_params(M, d, seed, {.magnitude_min = 0.3, .magnitude_max = 2.0, .phase_max = 6.2});
        const GridOrder order(d, n);
        const Eigen::MatrixXcd A = vandermonde(p.nodes(), order);
        const PencilMatrices pm = assemble_pencil_matrices(sample_grid(p, n), order);
        const Eigen::MatrixXcd D = p.coefficients.asDiagonal();
        EXPECT_LE((pm.T - A.transpose() * D * A.conjugate()).norm(), 1e-10 * pm.T.norm());
        for (int l = 0; l < d; ++l) {
            const Eigen::MatrixXcd Dl = (p.coefficients.array() * p.nodes().col(l).array()).matrix().asDiagonal();
            EXPECT_LE((pm.shifts[static_cast<std::size_t>(l)] - A.transpose() * Dl * A.conjugate()).norm(),
                      1e-10 * pm.T.norm());
        }
    }
}

TEST(ReducedSvd, AllOnesRankOne) {
    const TruncatedSvd s = reduced_svd_rank(Eigen::MatrixXcd::Ones(4, 4));
    EXPECT_EQ(s.rank, 1);
    EXPECT_NEAR(s.sigma(0), 4.0, 1e-13);
}

TEST(ReducedSvd, PaperSyntheticRankThree) {
    const PencilMatrices pm = assemble_pencil_matrices(sample_grid(three_spot(), 4), GridOrder(2, 4));
    const TruncatedSvd s = reduced_svd_rank(pm.T);
    EXPECT_EQ(s.rank, 3);
    EXPECT_LE(s.singular_values(3) / s.singular_values(0), 1e-10);
    EXPECT_FALSE(s.full_rank_warning);

    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(3, 3);
    EXPECT_LE((s.U.adjoint() * s.U - I).norm(), 1e-10);
    EXPECT_LE((s.V.adjoint() * s.V - I).norm(), 1e-10);
    for (Eigen::Index i = 1; i < s.singular_values.size(); ++i)
        EXPECT_LE(s.singular_values(i), s.singular_values(i - 1));

    const double err = spectral_norm(pm.T - s.U * s.sigma.asDiagonal() * s.V.adjoint());
    EXPECT_LE(err, s.singular_values(3) + 25 * std::numeric_limits<double>::epsilon() * s.singular_values(0));
}

TEST(ReducedSvd, ForcedRankAndRules) {
    const PencilMatrices pm = assemble_pencil_matrices(sample_grid(three_spot(), 4), GridOrder(2, 4));
    EXPECT_EQ(reduced_svd_rank(pm.T, {.forced_rank = 2}).rank, 2);
    EXPECT_EQ(reduced_svd_rank(pm.T, {.rule = RankRule::largest_drop, .rank_tol = 1e-2}).rank, 3);
    EXPECT_THROW(reduced_svd_rank(pm.T, {.forced_rank = 26}), ConfigError);
    EXPECT_THROW(reduced_svd_rank(pm.T, {.forced_rank = 25}), NumericalError);
    EXPECT_THROW(reduced_svd_rank(pm.T, {.rank_tol = 1.5}), ConfigError);
}

TEST(ReducedSvd, ZeroDataAndFullRankWarning) {
    try {
        (void)reduced_svd_rank(Eigen::MatrixXcd::Zero(4, 4));
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("zero data"), std::string::npos);
    }
    // 5 sources but only a 4x4 T: no drop.
    const ParameterSet p = random_params(5, 2, 3, {.min_sep = 0.3});
    const PencilMatrices pm = assemble_pencil_matrices(sample_grid(p, 1), GridOrder(2, 1));
    const TruncatedSvd s = reduced_svd_rank(pm.T);
    EXPECT_EQ(s.rank, 4);
    EXPECT_TRUE(s.full_rank_warning);
}

TEST(BuildPencil, SingleSpikeConventionAudit) {
    const SampleTable s = sample_grid(spike(0.3, 2.0), 2);
    const PencilMatrices pm = assemble_pencil_matrices(s, GridOrder(1, 2));
    const auto S = build_pencil(reduced_svd_rank(pm.T), pm.shifts);
    ASSERT_EQ(S[0].rows(), 1);
    EXPECT_LT(std::abs(S[0](0, 0) - std::polar(1.0, -kTwoPi * 0.3)), 1e-12);
    EXPECT_GT(std::abs(S[0](0, 0) - std::polar(1.0, kTwoPi * 0.3)), 1.0);  // not the conjugate
}

TEST(BuildPencil, ConstantFunctionGivesIdentity) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(1, 2);
    const PencilMatrices pm = assemble_pencil_matrices(sample_grid(ParameterSet(t, Eigen::VectorXcd::Ones(1)), 3),
                                                       GridOrder(2, 3));
    for (const auto& s : build_pencil(reduced_svd_rank(pm.T), pm.shifts)) EXPECT_LT(std::abs(s(0, 0) - 1.0), 1e-13);
}

TEST(BuildPencil, EigenvaluesAreNodeCoordinates) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int d = 2 + static_cast<int>(seed % 2);
        const ParameterSet p =
            random_params(4, d, seed, {.min_sep = 0.4, .magnitude_min = 0.5, .magnitude_max = 2.0, .phase_max = 6.2});
        const int n = 3;
        const PencilMatrices pm = assemble_pencil_matrices(sample_grid(p, n), GridOrder(d, n));
        const TruncatedSvd svd = reduced_svd_rank(pm.T);
        ASSERT_EQ(svd.rank, 4);
        const auto S = build_pencil(svd, pm.shifts);
        const Eigen::MatrixXcd z = p.nodes();
        for (int l = 0; l < d; ++l) {
            const Eigensystem es = eig_general(S[static_cast<std::size_t>(l)]);
            EXPECT_LE(oracle::multiset_distance(to_vec(es.values), to_vec(z.col(l))), 1e-8);
        }
    }
}

TEST(EigGeneral, DiagonalMatrix) {
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(2, 2);
    C(0, 0) = 1.0;
    C(1, 1) = cdouble(0.0, 2.0);
    const Eigensystem es = eig_general(C);
    // sorted by real part: 2i first, then 1
    EXPECT_LT(std::abs(es.values(0) - cdouble(0.0, 2.0)), 1e-14);
    EXPECT_LT(std::abs(es.values(1) - 1.0), 1e-14);
    EXPECT_NEAR(std::abs(es.vectors(1, 0)), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(es.vectors(0, 1)), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(es.vectors(0, 0)), 0.0, 1e-14);
}

TEST(EigGeneral, DefectiveCanaryKeepsBackwardError) {
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(2, 2);
    C(0, 1) = 1.0;
    const Eigensystem es = eig_general(C);
    EXPECT_LE((C * es.vectors - es.vectors * es.values.asDiagonal()).norm(), 1e-10 * C.norm());
    const std::vector<Eigen::MatrixXcd> S{C};
    EXPECT_THROW(sample_direction_and_combine(S, 1, 1e-6, 3), NumericalError);
}

TEST(EigGeneral, RandomResidualAndOrdering) {
    Rng rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXcd C(8, 8);
        for (Eigen::Index i = 0; i < 64; ++i) C.data()[i] = cdouble(g(rng), g(rng));
        const Eigensystem es = eig_general(C);
        EXPECT_LE((C * es.vectors - es.vectors * es.values.asDiagonal()).norm() / C.norm(), 1e-10);
        for (Eigen::Index j = 0; j < 8; ++j) EXPECT_NEAR(es.vectors.col(j).norm(), 1.0, 1e-12);
        for (Eigen::Index j = 1; j < 8; ++j) EXPECT_LE(es.values(j - 1).real(), es.values(j).real());
    }
}

TEST(Direction, SingleSourceIsTrivial) {
    const PencilMatrices pm = assemble_pencil_matrices(sample_grid(random_params(1, 2, 4), 2), GridOrder(2, 2));
    const auto S = build_pencil(reduced_svd_rank(pm.T), pm.shifts);
    const RandomDirection dir = sample_direction_and_combine(S, 9);
    EXPECT_EQ(dir.W.rows(), 1);
    EXPECT_NEAR(std::abs(dir.W(0, 0)), 1.0, 1e-15);
    EXPECT_TRUE(std::isinf(dir.min_gap));
    EXPECT_NEAR(dir.mu.norm(), 1.0, 1e-12);
}

TEST(Direction, OneDimensionalGapsAreNodeDistances) {
    Eigen::MatrixXd t(3, 1);
    t << 0.1, 0.45, 0.8;
    const ParameterSet p(t, Eigen::VectorXcd::Ones(3));
    const PencilMatrices pm = assemble_pencil_matrices(sample_grid(p, 4), GridOrder(1, 4));
    const auto S = build_pencil(reduced_svd_rank(pm.T), pm.shifts);
    const RandomDirection dir = sample_direction_and_combine(S, 3);
    EXPECT_NEAR(std::abs(dir.mu(0)), 1.0, 1e-12);
    EXPECT_NEAR(dir.min_gap, min_separation(p), 1e-10);
}

TEST(Direction, LinearCombinationSpectrumAndPhaseInvariance) {
    const ParameterSet p = random_params(5, 2, 21, {.min_sep = 0.3});
    const PencilMatrices pm = assemble_pencil_matrices(sample_grid(p, 4), GridOrder(2, 4));
    const auto S = build_pencil(reduced_svd_rank(pm.T), pm.shifts);
    const Eigen::MatrixXcd z = p.nodes();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Eigen::VectorXcd mu = sample_complex_sphere(2, seed);
        const Eigen::VectorXcd expected = z * mu.conjugate();  // <z_j, mu>
        const Eigensystem es = eig_general(combine_pencil(S, mu));
        EXPECT_LE(oracle::multiset_distance(to_vec(es.values), to_vec(expected)), 1e-8);

        const cdouble xi = std::polar(1.0, 0.7 + static_cast<double>(seed));
        const Eigensystem rotated = eig_general(combine_pencil(S, (xi * mu).eval()));
        std::vector<double> g1, g2;
        for (Eigen::Index i = 0; i < 5; ++i)
            for (Eigen::Index j = i + 1; j < 5; ++j) {
                g1.push_back(std::abs(expected(i) - expected(j)));
            }
        // gaps of the rotated spectrum, matched through the closed form
        const Eigen::VectorXcd rot_expected = z * (xi * mu).conjugate();
        for (Eigen::Index i = 0; i < 5; ++i)
            for (Eigen::Index j = i + 1; j < 5; ++j) g2.push_back(std::abs(rot_expected(i) - rot_expected(j)));
        for (std::size_t k = 0; k < g1.size(); ++k) EXPECT_NEAR(g1[k], g2[k], 1e-12);
        EXPECT_NEAR(min_pairwise_gap(es.values), min_pairwise_gap(rotated.values), 1e-10);
    }
}

TEST(Direction, NoFailuresOverManySeeds) {
    const ParameterSet p = random_params(5, 2, 8);
    const PencilMatrices pm = assemble_pencil_matrices(sample_grid(p, 4), GridOrder(2, 4));
    const auto S = build_pencil(reduced_svd_rank(pm.T), pm.shifts);
    int failures = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        try {
            const RandomDirection dir = sample_direction_and_combine(S, seed, 1e-8, 0);
            if (!(dir.min_gap > 0.0)) ++failures;
        } catch (const NumericalError&) {
            ++failures;
        }
    }
    EXPECT_EQ(failures, 0);
}

TEST(SimultaneousDiagonalize, ExactDataRecoversNodes) {
    const ParameterSet p = random_params(5, 3, 2, {.min_sep = 0.4, .phase_max = 6.0});
    const PencilMatrices pm = assemble_pencil_matrices(sample_grid(p, 3), GridOrder(3, 3));
    const auto S = build_pencil(reduced_svd_rank(pm.T), pm.shifts);
    const RandomDirection dir = sample_direction_and_combine(S, 17);
    const Diagonalization diag = simultaneous_diagonalize(dir.W, S);
    EXPECT_LE(diag.offdiag_max, 1e-8);
    for (Eigen::Index i = 0; i < diag.Z.size(); ++i) EXPECT_NEAR(std::abs(diag.Z.data()[i]), 1.0, 1e-8);

    // rows of Z are the node vectors up to one permutation
    const Eigen::MatrixXcd z = p.nodes();
    std::vector<bool> used(5, false);
    for (Eigen::Index r = 0; r < 5; ++r) {
        Eigen::Index best = -1;
        double dist = 1e9;
        for (Eigen::Index j = 0; j < 5; ++j) {
            const double dd = (diag.Z.row(r) - z.row(j)).norm();
            if (dd < dist) {
                dist = dd;
                best = j;
            }
        }
        EXPECT_LE(dist, 1e-8);
        EXPECT_FALSE(used[static_cast<std::size_t>(best)]);
        used[static_cast<std::size_t>(best)] = true;
    }
}

TEST(SimultaneousDiagonalize, SingleSourceAndSingularW) {
    const std::vector<Eigen::MatrixXcd> S{Eigen::MatrixXcd::Constant(1, 1, cdouble(0.0, 1.0)),
                                          Eigen::MatrixXcd::Constant(1, 1, cdouble(1.0, 0.0))};
    const Diagonalization d = simultaneous_diagonalize(Eigen::MatrixXcd::Ones(1, 1), S);
    EXPECT_EQ(d.offdiag_max, 0.0);
    EXPECT_EQ(d.Z.cols(), 2);

    const std::vector<Eigen::MatrixXcd> S2{Eigen::MatrixXcd::Identity(2, 2)};
    EXPECT_THROW(simultaneous_diagonalize(Eigen::MatrixXcd::Ones(2, 2), S2), NumericalError);
}

TEST(PrincipalLog, BranchAndWrap) {
    Eigen::MatrixXcd Z(1, 3);
    Z(0, 0) = 1.0;
    Z(0, 1) = cdouble(0.0, -1.0);
    Z(0, 2) = std::polar(1.0, -kTwoPi * 0.999);
    const Eigen::MatrixXd t = principal_log(Z);
    EXPECT_EQ(t(0, 0), 0.0);
    EXPECT_NEAR(t(0, 1), 0.25, 1e-15);
    EXPECT_NEAR(t(0, 2), 0.999, 1e-13);

    // arg in (-pi, pi]: z = -1 maps to 0.5
    Eigen::MatrixXcd minus(1, 1);
    minus(0, 0) = -1.0;
    EXPECT_NEAR(principal_log(minus)(0, 0), 0.5, 1e-15);

    for (double v : {0.0, 1e-17, 0.5, 0.9999999999999999}) {
        Eigen::MatrixXcd z1(1, 1);
        z1(0, 0) = std::polar(1.0, -kTwoPi * v);
        const double r = principal_log(z1)(0, 0);
        EXPECT_GE(r, 0.0);
        EXPECT_LT(r, 1.0);
    }

    Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(1, 1);
    EXPECT_THROW(principal_log(zero), NumericalError);
}

TEST(SolveCoefficients, ExactSingleSource) {
    const ParameterSet p = spike(0.37, cdouble(1.5, -0.5));
    const SampleTable s = sample_grid(p, 3);
    const CoefficientFit fit = solve_coefficients(p.locations, s);
    EXPECT_LT(std::abs(fit.c(0) - p.coefficients(0)), 1e-12);
    double fnorm = 0.0;
    for (const auto& v : s.values()) fnorm += std::norm(v);
    EXPECT_LE(fit.residual, 1e-12 * std::sqrt(fnorm));
}

TEST(SolveCoefficients, PaperSyntheticAndNoisyResidual) {
    const ParameterSet p = three_spot();
    const SampleTable exact = sample_grid(p, 4);
    const CoefficientFit fit = solve_coefficients(p.locations, exact);
    for (Eigen::Index j = 0; j < 3; ++j) EXPECT_LT(std::abs(fit.c(j) - 1.0), 1e-8);

    const SampleTable noisy = add_noise(exact, 10.0, 3);
    double noise = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) noise += std::norm(noisy.values()[i] - exact.values()[i]);
    noise = std::sqrt(noise);
    const CoefficientFit nf = solve_coefficients(p.locations, noisy);
    EXPECT_GE(nf.residual, 0.5 * noise);
    EXPECT_LE(nf.residual, 2.0 * noise);
}

TEST(SolveCoefficients, CoincidentNodesRejected) {
    Eigen::MatrixXd t(2, 2);
    t << 0.3, 0.3, 0.3, 0.3;
    const SampleTable s = sample_grid(three_spot(), 2);
    EXPECT_THROW(solve_coefficients(t, s), NumericalError);
}

TEST(Reconstruct, PaperSyntheticExact) {
    const ParameterSet p = three_spot();
    const ReconstructionResult r = reconstruct(sample_grid(p, 4), {.seed = 1});
    EXPECT_EQ(r.rank, 3);
    std::vector<int> assign;
    EXPECT_LE(oracle::match_error(p.locations, r.params.locations, &assign), 1e-10);
    for (int j = 0; j < 3; ++j) EXPECT_LT(std::abs(r.params.coefficients(assign[static_cast<std::size_t>(j)]) - 1.0), 1e-8);
    EXPECT_GE(r.residual, 0.0);
    for (Eigen::Index i = 0; i < r.params.locations.size(); ++i) {
        EXPECT_GE(r.params.locations.data()[i], 0.0);
        EXPECT_LT(r.params.locations.data()[i], 1.0);
    }
}

TEST(Reconstruct, SingleSourceSmallestProblem) {
    for (double t0 : {0.0, 0.3, 0.999, 0.5}) {
        Eigen::MatrixXd t(1, 2);
        t << t0, 1.0 - t0 - (t0 == 0.0 ? 0.5 : 0.0);
        const ParameterSet p(t, Eigen::VectorXcd::Constant(1, cdouble(0.7, 0.2)));
        const ReconstructionResult r = reconstruct(sample_grid(p, 0));
        EXPECT_LE(oracle::match_error(p.locations, r.params.locations), 1e-12);
        EXPECT_LT(std::abs(r.params.coefficients(0) - p.coefficients(0)), 1e-12);
    }
}

TEST(Reconstruct, SingleSpikeRecoversLocationNotMirror) {
    const ReconstructionResult r = reconstruct(sample_grid(spike(0.3, 2.0), 2));
    EXPECT_NEAR(r.params.locations(0, 0), 0.3, 1e-12);
}

TEST(Reconstruct, DeterministicUnderSeed) {
    const SampleTable s = add_noise(sample_grid(random_params(4, 2, 6, {.min_sep = 0.5}), 4), 50.0, 2);
    const ReconstructOptions opts{.rank = {.forced_rank = 4}, .seed = 99};
    const ReconstructionResult a = reconstruct(s, opts);
    const ReconstructionResult b = reconstruct(s, opts);
    EXPECT_EQ(a.params.locations, b.params.locations);
    EXPECT_EQ(a.mu, b.mu);
}

TEST(Reconstruct, ErrorsAreStageTagged) {
    SampleTable zeros(2, 2);
    zeros.mark_all_present();
    try {
        (void)reconstruct(zeros);
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_EQ(e.stage(), "svd");
    }
}

TEST(Reconstruct, RandomInstancesExact) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const int d = 1 + static_cast<int>(seed % 3);
        const int M = 1 + static_cast<int>(seed % 6);
        const int n = d == 3 ? 3 : 5;
        const ParameterSet p =
            random_params(M, d, seed, {.min_sep = 0.5, .magnitude_min = 0.5, .magnitude_max = 2.0, .phase_max = 6.2});
        if (M > static_cast<int>(GridOrder(d, n).size())) continue;
        const ReconstructionResult r = reconstruct(sample_grid(p, n), {.seed = seed});
        ASSERT_EQ(r.rank, M) << "seed " << seed;
        EXPECT_LE(oracle::match_error(p.locations, r.params.locations), 1e-9) << "seed " << seed;
        EXPECT_LE(r.singular_values.size() > M ? r.singular_values(M) / r.singular_values(0) : 0.0, 1e-10);
    }
}
