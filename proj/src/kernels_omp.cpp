#include <omp.h>

#include <cmath>
#include <numbers>

#include "prony/kernels.hpp"
#include "prony/random.hpp"

namespace prony::kernels::omp {

namespace {

// Periodized 1-D Gaussian profile of one source coordinate on the pixel grid.
std::vector<double> profile(double t, double b, int P, int shift_radius) {
    std::vector<double> out(static_cast<std::size_t>(P), 0.0);
    for (int p = 0; p < P; ++p) {
        double v = 0.0;
        for (int s = -shift_radius; s <= shift_radius; ++s) {
            const double x = static_cast<double>(p) / P - t + s;
            v += std::exp(-b * x * x);
        }
        out[static_cast<std::size_t>(p)] = v;
    }
    return out;
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

void render_gaussians(const ParameterSet& params, double b, int shift_radius, ImageGrid& image) {
    const int d = image.d;
    const int P = image.P;
    const auto M = params.locations.rows();

    // profiles[j * d + l] holds the factor of source j along axis l.
    std::vector<std::vector<double>> profiles(static_cast<std::size_t>(M * d));
    for (Eigen::Index j = 0; j < M; ++j)
        for (int l = 0; l < d; ++l)
            profiles[static_cast<std::size_t>(j * d + l)] = profile(params.locations(j, l), b, P, shift_radius);

    const auto total = static_cast<std::int64_t>(image.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t idx = 0; idx < total; ++idx) {
        std::int64_t coords[16];
        std::int64_t rem = idx;
        for (int l = d - 1; l >= 0; --l) {
            coords[l] = rem % P;
            rem /= P;
        }
        double value = 0.0;
        for (Eigen::Index j = 0; j < M; ++j) {
            double prod = params.coefficients(j).real();
            for (int l = 0; l < d; ++l) prod *= profiles[static_cast<std::size_t>(j * d + l)][static_cast<std::size_t>(coords[l])];
            value += prod;
        }
        image.pixels[static_cast<std::size_t>(idx)] = value;
    }
}

void dft(const ImageGrid& image, SampleTable& out) {
    const int d = image.d;
    const int P = image.P;
    const int K = out.extent();
    const int n = out.order();

    // twiddle(a, p) = exp(-2 pi i (k_a p mod P) / P), k_a = a - n.
    std::vector<cdouble> twiddle(static_cast<std::size_t>(K) * P);
    for (int a = 0; a < K; ++a) {
        const long k = a - n;
        for (int p = 0; p < P; ++p) {
            long m = (k * p) % P;
            if (m < 0) m += P;
            twiddle[static_cast<std::size_t>(a) * P + p] = std::polar(1.0, -2.0 * std::numbers::pi * m / P);
        }
    }

    std::vector<cdouble> cur(image.pixels.begin(), image.pixels.end());
    std::vector<std::int64_t> dims(static_cast<std::size_t>(d), P);
    for (int axis = 0; axis < d; ++axis) {
        std::int64_t outer = 1, inner = 1;
        for (int l = 0; l < axis; ++l) outer *= dims[static_cast<std::size_t>(l)];
        for (int l = axis + 1; l < d; ++l) inner *= dims[static_cast<std::size_t>(l)];
        std::vector<cdouble> next(static_cast<std::size_t>(outer * K * inner));
#pragma omp parallel for collapse(2) schedule(static)
        for (std::int64_t o = 0; o < outer; ++o) {
            for (std::int64_t a = 0; a < K; ++a) {
                const cdouble* tw = &twiddle[static_cast<std::size_t>(a) * P];
                cdouble* dst = &next[static_cast<std::size_t>((o * K + a) * inner)];
                for (std::int64_t i = 0; i < inner; ++i) dst[i] = 0.0;
                for (std::int64_t p = 0; p < P; ++p) {
                    const cdouble* src = &cur[static_cast<std::size_t>((o * P + p) * inner)];
                    const cdouble w = tw[p];
                    for (std::int64_t i = 0; i < inner; ++i) dst[i] += w * src[i];
                }
            }
        }
        dims[static_cast<std::size_t>(axis)] = K;
        cur.swap(next);
    }

    const double scale = std::pow(static_cast<double>(P), -d);
    for (std::size_t i = 0; i < cur.size(); ++i) out.values()[i] = cur[i] * scale;
    out.mark_all_present();
}

GapTally gap_trials(const Eigen::MatrixXcd& diffs, double epsilon, std::uint64_t trials, std::uint64_t seed) {
    const std::uint64_t blocks = (trials + kGapBlock - 1) / kGapBlock;
    std::vector<GapTally> parts(blocks);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        const auto ub = static_cast<std::uint64_t>(b);
        const std::uint64_t count = std::min(kGapBlock, trials - ub * kGapBlock);
        parts[ub] = gap_block(diffs, epsilon, count, derive_seed(seed, ub));
    }
    // Fixed-order reduction keeps the sums bit-identical for any thread count.
    GapTally total;
    for (const GapTally& p : parts) total += p;
    return total;
}

std::vector<double> gap_grid(std::span<const Eigen::VectorXcd> directions, const GapFunction& gap) {
    std::vector<double> out(directions.size());
    const auto count = static_cast<std::int64_t>(directions.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = gap(directions[static_cast<std::size_t>(i)]);
    return out;
}

}  // namespace prony::kernels::omp
