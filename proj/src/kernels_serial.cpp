#include <cmath>
#include <limits>
#include <numbers>

#include "prony/kernels.hpp"
#include "prony/random.hpp"
#include "prony/randsphere.hpp"

namespace prony::kernels {

GapTally gap_block(const Eigen::MatrixXcd& diffs, double epsilon, std::uint64_t count, std::uint64_t seed) {
    const auto d = static_cast<int>(diffs.cols());
    const Eigen::VectorXd norms = diffs.rowwise().norm();
    Rng rng(seed);
    GapTally tally;
    tally.trials = count;
    for (std::uint64_t t = 0; t < count; ++t) {
        const Eigen::VectorXcd mu = sample_complex_sphere(d, rng);
        double min_rel = std::numeric_limits<double>::infinity();
        double min_sq = std::numeric_limits<double>::infinity();
        for (Eigen::Index r = 0; r < diffs.rows(); ++r) {
            // |<y, mu>| = |sum_l y_l conj(mu_l)|
            const double a = std::abs(diffs.row(r).transpose().dot(mu));
            min_rel = std::min(min_rel, a / norms(r));
            min_sq = std::min(min_sq, a * a);
        }
        if (min_rel < epsilon) ++tally.below;
        tally.sum_sq += min_sq;
        tally.sum_sq_sq += min_sq * min_sq;
    }
    return tally;
}

namespace serial {

void render_gaussians(const ParameterSet& params, double b, int shift_radius, ImageGrid& image) {
    const int d = image.d;
    const int P = image.P;
    const int side = 2 * shift_radius + 1;
    std::size_t shift_count = 1;
    for (int l = 0; l < d; ++l) shift_count *= static_cast<std::size_t>(side);

    std::vector<int> p(static_cast<std::size_t>(d));
    std::vector<int> s(static_cast<std::size_t>(d));
    for (std::size_t idx = 0; idx < image.size(); ++idx) {
        std::size_t rem = idx;
        for (int l = d - 1; l >= 0; --l) {
            p[static_cast<std::size_t>(l)] = static_cast<int>(rem % static_cast<std::size_t>(P));
            rem /= static_cast<std::size_t>(P);
        }
        double value = 0.0;
        for (Eigen::Index j = 0; j < params.locations.rows(); ++j) {
            const double c = params.coefficients(j).real();
            for (std::size_t sidx = 0; sidx < shift_count; ++sidx) {
                std::size_t srem = sidx;
                for (int l = d - 1; l >= 0; --l) {
                    s[static_cast<std::size_t>(l)] = static_cast<int>(srem % static_cast<std::size_t>(side)) - shift_radius;
                    srem /= static_cast<std::size_t>(side);
                }
                double r2 = 0.0;
                for (int l = 0; l < d; ++l) {
                    const double x = static_cast<double>(p[static_cast<std::size_t>(l)]) / P - params.locations(j, l) +
                                     s[static_cast<std::size_t>(l)];
                    r2 += x * x;
                }
                value += c * std::exp(-b * r2);
            }
        }
        image.pixels[idx] = value;
    }
}

void dft(const ImageGrid& image, SampleTable& out) {
    const int d = image.d;
    const int P = image.P;
    std::vector<cdouble> twiddle(static_cast<std::size_t>(P));
    for (int m = 0; m < P; ++m) twiddle[static_cast<std::size_t>(m)] = std::polar(1.0, -2.0 * std::numbers::pi * m / P);

    const double scale = std::pow(static_cast<double>(P), -d);
    for (std::size_t key = 0; key < out.size(); ++key) {
        const MultiIndex k = out.key(key);
        cdouble sum(0.0);
        for (std::size_t idx = 0; idx < image.size(); ++idx) {
            std::size_t rem = idx;
            long phase = 0;
            for (int l = d - 1; l >= 0; --l) {
                const auto pl = static_cast<long>(rem % static_cast<std::size_t>(P));
                rem /= static_cast<std::size_t>(P);
                phase += static_cast<long>(k[static_cast<std::size_t>(l)]) * pl;
            }
            phase %= P;
            if (phase < 0) phase += P;
            sum += image.pixels[idx] * twiddle[static_cast<std::size_t>(phase)];
        }
        out.values()[key] = sum * scale;
    }
    out.mark_all_present();
}

GapTally gap_trials(const Eigen::MatrixXcd& diffs, double epsilon, std::uint64_t trials, std::uint64_t seed) {
    GapTally total;
    const std::uint64_t blocks = (trials + kGapBlock - 1) / kGapBlock;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        const std::uint64_t count = std::min(kGapBlock, trials - b * kGapBlock);
        total += gap_block(diffs, epsilon, count, derive_seed(seed, b));
    }
    return total;
}

std::vector<double> gap_grid(std::span<const Eigen::VectorXcd> directions, const GapFunction& gap) {
    std::vector<double> out(directions.size());
    for (std::size_t i = 0; i < directions.size(); ++i) out[i] = gap(directions[i]);
    return out;
}

}  // namespace serial

}  // namespace prony::kernels
