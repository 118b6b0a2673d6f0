#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference in
// `serial` and an OpenMP version in `omp`; the library calls the OpenMP ones
// and the tests check them against the references.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "prony/image.hpp"
#include "prony/model.hpp"

namespace prony::kernels {

struct GapTally {
    std::uint64_t trials = 0;
    std::uint64_t below = 0;  // trials with min_pairs |<y,mu>| / ||y|| < eps
    double sum_sq = 0.0;      // sum of min_pairs |<y,mu>|^2 (unnormalized)
    double sum_sq_sq = 0.0;

    GapTally& operator+=(const GapTally& o) noexcept {
        trials += o.trials;
        below += o.below;
        sum_sq += o.sum_sq;
        sum_sq_sq += o.sum_sq_sq;
        return *this;
    }
};

inline constexpr std::uint64_t kGapBlock = 8192;

/// One block of Monte Carlo trials. `diffs` holds one difference vector
/// z_i - z_j per row.
GapTally gap_block(const Eigen::MatrixXcd& diffs, double epsilon, std::uint64_t count, std::uint64_t seed);

using GapFunction = std::function<double(const Eigen::VectorXcd&)>;

namespace serial {

/// Direct sum over every pixel, shift and source.
void render_gaussians(const ParameterSet& params, double b, int shift_radius, ImageGrid& image);

/// Direct DFT: out[k] = P^-d sum_p pixels[p] e^{-2 pi i <k,p>/P} for every key of `out`.
void dft(const ImageGrid& image, SampleTable& out);

GapTally gap_trials(const Eigen::MatrixXcd& diffs, double epsilon, std::uint64_t trials, std::uint64_t seed);

std::vector<double> gap_grid(std::span<const Eigen::VectorXcd> directions, const GapFunction& gap);

}  // namespace serial

namespace omp {

/// Separable evaluation: the periodized Gaussian factors over coordinates.
void render_gaussians(const ParameterSet& params, double b, int shift_radius, ImageGrid& image);

/// Separable DFT, one axis at a time.
void dft(const ImageGrid& image, SampleTable& out);

GapTally gap_trials(const Eigen::MatrixXcd& diffs, double epsilon, std::uint64_t trials, std::uint64_t seed);

std::vector<double> gap_grid(std::span<const Eigen::VectorXcd> directions, const GapFunction& gap);

int max_threads();

}  // namespace omp

}  // namespace prony::kernels
