#pragma once

#include <span>

#include "prony/image.hpp"
#include "prony/model.hpp"
#include "prony/pencil.hpp"

namespace prony {

/// Gaussian point spread function phi(x) = exp(-b ||x||^2) on R^d.
struct PsfModel {
    double b = 150.0;
    int d = 2;
};

/// Continuous Fourier transform of phi under the exp(-2 pi i <x, xi>)
/// convention: (pi/b)^{d/2} exp(-pi^2 ||xi||^2 / b).
double gaussian_psf_ft(const PsfModel& psf, std::span<const double> xi);
double gaussian_psf_ft(const PsfModel& psf, std::span<const int> k);

/// Samples the periodized blurred measurement at the grid points p/P,
/// truncating the periodization to shifts with ||l||_inf <= shift_radius.
/// Imaginary parts of the coefficients are ignored.
ImageGrid render_image(const ParameterSet& params, const PsfModel& psf, int P, int shift_radius = 1);

/// Fourier coefficients of the periodized image for k in {-n, ..., n+1}^d,
/// approximated by the normalized DFT P^{-d} sum_p g(p/P) e^{-2 pi i <k,p>/P}.
SampleTable dft_fourier_coeffs(const ImageGrid& image, int n);

struct FrequencyRatio {
    SampleTable table;
    double max_amplification = 0.0;         // max |1/F(phi)(k)| over every key
    double relative_amplification = 0.0;    // the same, relative to k = 0
    double pencil_band_amplification = 0.0; // relative, over keys read by the pencil matrices only
};

/// Divides each coefficient by F(phi)(k).
FrequencyRatio frequency_ratio(const SampleTable& coeffs, const PsfModel& psf);

enum class Background { none, median };

struct LocalizeOptions {
    ReconstructOptions reconstruct = default_reconstruct();
    Background background = Background::none;

    static ReconstructOptions default_reconstruct() {
        ReconstructOptions o;
        o.rank.rule = RankRule::largest_drop;
        o.rank.rank_tol = 1e-2;
        return o;
    }
};

double median_background(const ImageGrid& image);

ReconstructionResult localize(const ImageGrid& image, const PsfModel& psf, int n, const LocalizeOptions& opts = {});

}  // namespace prony
