#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "prony/model.hpp"

namespace prony {

/// Lexicographic ordering of I_n = {0,...,n}^d, first coordinate slowest.
class GridOrder {
public:
    GridOrder(int d, int n);

    int dim() const noexcept { return d_; }
    int order() const noexcept { return n_; }
    std::size_t size() const noexcept { return size_; }

    MultiIndex multi_index(std::size_t position) const;
    std::size_t position(std::span<const int> k) const;

private:
    int d_;
    int n_;
    std::size_t size_;
};

struct PencilMatrices {
    Eigen::MatrixXcd T;                    // T(k,l) = f(k - l)
    std::vector<Eigen::MatrixXcd> shifts;  // shifts[l](k,m) = f(k - m + e_l)
};

PencilMatrices assemble_pencil_matrices(const SampleTable& samples, const GridOrder& order);

/// A(j,k) = prod_l z_{j,l}^{k_l} for k in I_n, columns in grid order.
///
/// With this convention the Toeplitz data matrix factors as
/// T = A^T diag(c) conj(A), and shift l as A^T diag(c * z_{.,l}) conj(A).
Eigen::MatrixXcd vandermonde(const Eigen::MatrixXcd& z, const GridOrder& order);

enum class RankRule {
    threshold,     // largest m with sigma_m >= tol * sigma_1
    largest_drop,  // argmax sigma_m / sigma_{m+1} among the threshold survivors
};

struct RankOptions {
    RankRule rule = RankRule::threshold;
    double rank_tol = 1e-6;
    std::optional<int> forced_rank;
};

struct TruncatedSvd {
    Eigen::MatrixXcd U;                // N x M
    Eigen::VectorXd sigma;             // M, positive, nonincreasing
    Eigen::MatrixXcd V;                // N x M
    int rank = 0;
    Eigen::VectorXd singular_values;   // all N values
    bool full_rank_warning = false;    // no drop found: possibly under-sampled
};

TruncatedSvd reduced_svd_rank(const Eigen::MatrixXcd& T, const RankOptions& opts = {});

/// S_l = U^* shift_l V Sigma^{-1}.
std::vector<Eigen::MatrixXcd> build_pencil(const TruncatedSvd& svd,
                                           std::span<const Eigen::MatrixXcd> shifts);

struct Eigensystem {
    Eigen::VectorXcd values;   // sorted by real part, ties by imaginary part
    Eigen::MatrixXcd vectors;  // unit-norm columns matching `values`
};

Eigensystem eig_general(const Eigen::MatrixXcd& C);

struct RandomDirection {
    Eigen::VectorXcd mu;
    Eigen::VectorXcd lambdas;
    Eigen::MatrixXcd W;
    double min_gap = 0.0;  // +inf when M == 1
    int retries = 0;
};

/// C_mu = sum_l conj(mu_l) S_l.
Eigen::MatrixXcd combine_pencil(std::span<const Eigen::MatrixXcd> S, const Eigen::VectorXcd& mu);

double min_pairwise_gap(const Eigen::VectorXcd& lambdas);

RandomDirection sample_direction_and_combine(std::span<const Eigen::MatrixXcd> S, std::uint64_t seed,
                                             double gap_tol = 1e-6, int max_retries = 8);

struct Diagonalization {
    Eigen::MatrixXcd Z;  // M x d
    double offdiag_max = 0.0;
    double cond_W = 1.0;
};

Diagonalization simultaneous_diagonalize(const Eigen::MatrixXcd& W, std::span<const Eigen::MatrixXcd> S);

/// t = frac(-arg(z) / 2 pi) in [0,1).
Eigen::MatrixXd principal_log(const Eigen::MatrixXcd& Z, bool project_to_torus = true);

struct CoefficientFit {
    Eigen::VectorXcd c;
    double residual = 0.0;
    bool nodes_distinct = true;
};

/// Least squares over every key of `samples` via column-pivoted QR.
CoefficientFit solve_coefficients(const Eigen::MatrixXd& locations, const SampleTable& samples);

struct ReconstructOptions {
    RankOptions rank;
    double gap_tol = 1e-6;
    int max_retries = 8;
    std::uint64_t seed = 0;
    bool project_to_torus = true;
};

struct ReconstructionResult {
    ParameterSet params;
    double residual = 0.0;
    Eigen::VectorXd singular_values;
    int rank = 0;
    Eigen::VectorXcd mu;
    double min_gap = 0.0;
    double offdiag_max = 0.0;
    int retries = 0;
    double cond_W = 1.0;
    double pencil_seconds = 0.0;  // wall time of SVD through coefficient solve
    std::vector<std::string> warnings;
};

ReconstructionResult reconstruct(const SampleTable& samples, const ReconstructOptions& opts = {});

}  // namespace prony
