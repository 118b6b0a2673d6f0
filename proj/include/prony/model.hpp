#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "prony/image.hpp"

namespace prony {

using cdouble = std::complex<double>;
using MultiIndex = std::vector<int>;

/// Sparse exponential sum f(k) = sum_j c_j exp(-2 pi i <t_j, k>).
///
/// `locations` is M x d with every entry in [0,1); `coefficients` has length M.
struct ParameterSet {
    Eigen::MatrixXd locations;
    Eigen::VectorXcd coefficients;

    ParameterSet() = default;
    ParameterSet(Eigen::MatrixXd t, Eigen::VectorXcd c);

    int dim() const noexcept { return static_cast<int>(locations.cols()); }
    int order() const noexcept { return static_cast<int>(locations.rows()); }

    /// Nodes z_j = exp(-2 pi i t_j), componentwise. M x d.
    Eigen::MatrixXcd nodes() const;

    /// Throws ConfigError if any invariant is violated (distinct locations,
    /// nonzero coefficients, coordinates in [0,1)).
    void validate() const;
};

/// Samples f(k) for k in {-n, ..., n+1}^d.
///
/// Storage is dense over the full key range; entries read from files may be
/// missing, in which case `at` reports the absent multi-index.
class SampleTable {
public:
    SampleTable() = default;
    SampleTable(int d, int n);

    int dim() const noexcept { return d_; }
    int order() const noexcept { return n_; }
    int lowest() const noexcept { return -n_; }
    int highest() const noexcept { return n_ + 1; }
    int extent() const noexcept { return 2 * n_ + 2; }
    std::size_t size() const noexcept { return values_.size(); }

    bool in_range(std::span<const int> k) const noexcept;
    bool has(std::span<const int> k) const;
    bool complete() const noexcept;

    cdouble at(std::span<const int> k) const;
    void set(std::span<const int> k, cdouble value);

    std::size_t index_of(std::span<const int> k) const;
    MultiIndex key(std::size_t index) const;

    /// Raw storage in key-index order. Missing entries hold zero.
    const std::vector<cdouble>& values() const noexcept { return values_; }
    std::vector<cdouble>& values() noexcept { return values_; }
    bool present(std::size_t index) const { return present_[index] != 0; }
    void mark_all_present();

private:
    int d_ = 0;
    int n_ = 0;
    std::vector<cdouble> values_;
    std::vector<char> present_;
};

cdouble eval_exponential_sum(const ParameterSet& params, std::span<const int> k);

SampleTable sample_grid(const ParameterSet& params, int n);

/// Minimum pairwise Euclidean distance between nodes z_j.
double min_separation(const ParameterSet& params);

struct RandomParamsOptions {
    std::optional<double> min_sep;
    double magnitude_min = 1.0;
    double magnitude_max = 1.0;
    double phase_min = 0.0;
    double phase_max = 0.0;
    int max_attempts = 100000;
};

ParameterSet random_params(int M, int d, std::uint64_t seed, const RandomParamsOptions& opts = {});

/// Additive Gaussian noise with ||signal||_2 / ||noise||_2 == snr.
///
/// The realization is rescaled to hit the ratio exactly. Complex tables get
/// independent real and imaginary parts.
SampleTable add_noise(const SampleTable& target, double snr, std::uint64_t seed);
ImageGrid add_noise(const ImageGrid& target, double snr, std::uint64_t seed);

}  // namespace prony
