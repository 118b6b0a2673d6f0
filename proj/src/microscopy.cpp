#include "prony/microscopy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "prony/error.hpp"
#include "prony/kernels.hpp"

namespace prony {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxDim = 16;

void check_psf(const PsfModel& psf) {
    if (!(psf.b > 0.0)) throw ConfigError("psf: b must be positive");
    if (psf.d < 1) throw ConfigError("psf: dimension must be positive");
}

// Keys of I read by T and the shifted matrices: k - l (+ e_ell) with k, l in I_n.
// Those are exactly the keys with at most one coordinate equal to n + 1.
bool used_by_pencil(std::span<const int> k, int n) {
    int top = 0;
    for (int v : k)
        if (v == n + 1) ++top;
    return top <= 1;
}

}  // namespace

double gaussian_psf_ft(const PsfModel& psf, std::span<const double> xi) {
    check_psf(psf);
    double r2 = 0.0;
    for (double v : xi) r2 += v * v;
    return std::pow(kPi / psf.b, 0.5 * psf.d) * std::exp(-kPi * kPi * r2 / psf.b);
}

double gaussian_psf_ft(const PsfModel& psf, std::span<const int> k) {
    std::vector<double> xi(k.begin(), k.end());
    return gaussian_psf_ft(psf, xi);
}

ImageGrid render_image(const ParameterSet& params, const PsfModel& psf, int P, int shift_radius) {
    check_psf(psf);
    if (params.dim() != psf.d) throw ConfigError("render: parameter dimension does not match the PSF");
    if (psf.d > kMaxDim) throw ConfigError("render: dimension above 16 not supported");
    if (P < 2) throw ConfigError("render: need at least 2 pixels per dimension");
    if (shift_radius < 0) throw ConfigError("render: shift_radius must be nonnegative");
    ImageGrid image(psf.d, P);
    kernels::omp::render_gaussians(params, psf.b, shift_radius, image);
    return image;
}

SampleTable dft_fourier_coeffs(const ImageGrid& image, int n) {
    if (image.P < 2) throw ConfigError("dft: image must have at least 2 pixels per dimension");
    if (n < 0) throw ConfigError("dft: n must be nonnegative");
    // |k|_inf <= n + 1 must stay below P/2.
    if (!(2 * (n + 1) < image.P))
        throw ConfigError("dft: index range {-" + std::to_string(n) + ".." + std::to_string(n + 1) +
                          "} exceeds the Nyquist range of a " + std::to_string(image.P) + "-pixel image");
    SampleTable out(image.d, n);
    kernels::omp::dft(image, out);
    return out;
}

FrequencyRatio frequency_ratio(const SampleTable& coeffs, const PsfModel& psf) {
    check_psf(psf);
    if (coeffs.dim() != psf.d) throw ConfigError("frequency ratio: dimension mismatch");
    FrequencyRatio out{coeffs, 0.0, 0.0, 0.0};
    const double at_zero = gaussian_psf_ft(psf, std::vector<double>(static_cast<std::size_t>(psf.d), 0.0));
    double band = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const MultiIndex k = coeffs.key(i);
        const double ft = gaussian_psf_ft(psf, std::span<const int>(k));
        out.table.values()[i] = coeffs.values()[i] / ft;
        out.max_amplification = std::max(out.max_amplification, 1.0 / ft);
        if (used_by_pencil(k, coeffs.order())) band = std::max(band, 1.0 / ft);
    }
    out.relative_amplification = out.max_amplification * at_zero;
    out.pencil_band_amplification = band * at_zero;
    return out;
}

double median_background(const ImageGrid& image) {
    if (image.pixels.empty()) return 0.0;
    std::vector<double> v = image.pixels;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

ReconstructionResult localize(const ImageGrid& image, const PsfModel& psf, int n, const LocalizeOptions& opts) {
    if (image.d != psf.d) throw ConfigError("localize: image dimension does not match the PSF");
    ImageGrid work = image;
    if (opts.background == Background::median) {
        const double bg = median_background(work);
        for (double& v : work.pixels) v -= bg;
    }
    SampleTable coeffs = [&] {
        try {
            return dft_fourier_coeffs(work, n);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw NumericalError("dft", e.what());
        }
    }();
    const FrequencyRatio ratio = frequency_ratio(coeffs, psf);
    return reconstruct(ratio.table, opts.reconstruct);
}

}  // namespace prony
