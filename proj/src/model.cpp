#include "prony/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "prony/error.hpp"
#include "prony/random.hpp"

namespace prony {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string format_key(std::span<const int> k) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i) os << ',';
        os << k[i];
    }
    os << ')';
    return os.str();
}

}  // namespace

ImageGrid::ImageGrid(int dim, int pixels_per_dim) : d(dim), P(pixels_per_dim) {
    std::size_t count = 1;
    for (int i = 0; i < d; ++i) count *= static_cast<std::size_t>(P);
    pixels.assign(count, 0.0);
}

ParameterSet::ParameterSet(Eigen::MatrixXd t, Eigen::VectorXcd c)
    : locations(std::move(t)), coefficients(std::move(c)) {}

Eigen::MatrixXcd ParameterSet::nodes() const {
    Eigen::MatrixXcd z(locations.rows(), locations.cols());
    for (Eigen::Index j = 0; j < locations.rows(); ++j)
        for (Eigen::Index l = 0; l < locations.cols(); ++l)
            z(j, l) = std::polar(1.0, -kTwoPi * locations(j, l));
    return z;
}

void ParameterSet::validate() const {
    if (locations.cols() < 1) throw ConfigError("parameter set: dimension must be positive");
    if (locations.rows() < 1) throw ConfigError("parameter set: at least one source required");
    if (coefficients.size() != locations.rows())
        throw ConfigError("parameter set: coefficient count does not match location count");
    for (Eigen::Index j = 0; j < locations.rows(); ++j) {
        if (coefficients(j) == cdouble(0.0))
            throw ConfigError("parameter set: coefficient " + std::to_string(j) + " is zero");
        for (Eigen::Index l = 0; l < locations.cols(); ++l) {
            const double v = locations(j, l);
            if (!(v >= 0.0 && v < 1.0))
                throw ConfigError("parameter set: location coordinate outside [0,1)");
        }
        for (Eigen::Index i = 0; i < j; ++i)
            if (locations.row(i) == locations.row(j))
                throw ConfigError("parameter set: locations " + std::to_string(i) + " and " +
                                  std::to_string(j) + " coincide");
    }
}

SampleTable::SampleTable(int d, int n) : d_(d), n_(n) {
    if (d < 1) throw ConfigError("sample table: dimension must be positive");
    if (n < 0) throw ConfigError("sample table: order n must be nonnegative");
    std::size_t count = 1;
    for (int i = 0; i < d; ++i) count *= static_cast<std::size_t>(2 * n + 2);
    values_.assign(count, cdouble(0.0));
    present_.assign(count, 0);
}

bool SampleTable::in_range(std::span<const int> k) const noexcept {
    if (static_cast<int>(k.size()) != d_) return false;
    for (int v : k)
        if (v < lowest() || v > highest()) return false;
    return true;
}

std::size_t SampleTable::index_of(std::span<const int> k) const {
    if (!in_range(k)) throw ConfigError("sample table: multi-index " + format_key(k) + " out of range");
    std::size_t idx = 0;
    for (int v : k) idx = idx * static_cast<std::size_t>(extent()) + static_cast<std::size_t>(v + n_);
    return idx;
}

MultiIndex SampleTable::key(std::size_t index) const {
    MultiIndex k(static_cast<std::size_t>(d_));
    for (int l = d_ - 1; l >= 0; --l) {
        k[static_cast<std::size_t>(l)] = static_cast<int>(index % static_cast<std::size_t>(extent())) - n_;
        index /= static_cast<std::size_t>(extent());
    }
    return k;
}

bool SampleTable::has(std::span<const int> k) const {
    return in_range(k) && present_[index_of(k)] != 0;
}

bool SampleTable::complete() const noexcept {
    for (char p : present_)
        if (!p) return false;
    return true;
}

cdouble SampleTable::at(std::span<const int> k) const {
    if (!in_range(k)) throw ConfigError("sample table: multi-index " + format_key(k) + " out of range");
    const std::size_t idx = index_of(k);
    if (!present_[idx]) throw ConfigError("sample table: missing sample at multi-index " + format_key(k));
    return values_[idx];
}

void SampleTable::set(std::span<const int> k, cdouble value) {
    const std::size_t idx = index_of(k);
    values_[idx] = value;
    present_[idx] = 1;
}

void SampleTable::mark_all_present() {
    std::fill(present_.begin(), present_.end(), 1);
}

cdouble eval_exponential_sum(const ParameterSet& params, std::span<const int> k) {
    cdouble sum(0.0);
    for (Eigen::Index j = 0; j < params.locations.rows(); ++j) {
        double phase = 0.0;
        for (Eigen::Index l = 0; l < params.locations.cols(); ++l)
            phase += params.locations(j, l) * k[static_cast<std::size_t>(l)];
        // Reduce before scaling by 2 pi to keep large |k| accurate.
        phase -= std::round(phase);
        sum += params.coefficients(j) * std::polar(1.0, -kTwoPi * phase);
    }
    return sum;
}

SampleTable sample_grid(const ParameterSet& params, int n) {
    SampleTable table(params.dim(), n);
    for (std::size_t i = 0; i < table.size(); ++i) {
        const MultiIndex k = table.key(i);
        table.values()[i] = eval_exponential_sum(params, k);
    }
    table.mark_all_present();
    return table;
}

double min_separation(const ParameterSet& params) {
    if (params.order() < 2) throw ConfigError("separation undefined for fewer than two sources");
    const Eigen::MatrixXcd z = params.nodes();
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index j = i + 1; j < z.rows(); ++j)
            best = std::min(best, (z.row(i) - z.row(j)).norm());
    return best;
}

ParameterSet random_params(int M, int d, std::uint64_t seed, const RandomParamsOptions& opts) {
    if (M < 1) throw ConfigError("random_params: M must be at least 1");
    if (d < 1) throw ConfigError("random_params: d must be at least 1");
    if (opts.magnitude_min <= 0.0 || opts.magnitude_max < opts.magnitude_min)
        throw ConfigError("random_params: invalid coefficient magnitude range");

    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> mag(opts.magnitude_min, opts.magnitude_max);
    std::uniform_real_distribution<double> phase(opts.phase_min, opts.phase_max);

    ParameterSet p(Eigen::MatrixXd(M, d), Eigen::VectorXcd(M));
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
        for (int j = 0; j < M; ++j)
            for (int l = 0; l < d; ++l) p.locations(j, l) = unit(rng);
        bool distinct = true;
        for (int j = 0; j < M && distinct; ++j)
            for (int i = 0; i < j; ++i)
                if (p.locations.row(i) == p.locations.row(j)) distinct = false;
        if (!distinct) continue;
        if (opts.min_sep && M >= 2 && min_separation(p) < *opts.min_sep) continue;
        for (int j = 0; j < M; ++j) {
            const double r = opts.magnitude_min == opts.magnitude_max ? opts.magnitude_min : mag(rng);
            const double a = opts.phase_min == opts.phase_max ? opts.phase_min : phase(rng);
            p.coefficients(j) = std::polar(r, a);
        }
        return p;
    }
    throw ConfigError("random_params: rejection budget exhausted; min_sep too large for M");
}

SampleTable add_noise(const SampleTable& target, double snr, std::uint64_t seed) {
    if (!(snr > 0.0)) throw ConfigError("add_noise: snr must be positive");
    double signal = 0.0;
    for (const cdouble& v : target.values()) signal += std::norm(v);
    signal = std::sqrt(signal);
    if (signal == 0.0) throw ConfigError("add_noise: target is identically zero");

    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cdouble> noise(target.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < noise.size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        noise[i] = cdouble(re, im);
        norm += re * re + im * im;
    }
    const double scale = signal / (snr * std::sqrt(norm));
    SampleTable out = target;
    for (std::size_t i = 0; i < noise.size(); ++i) out.values()[i] += scale * noise[i];
    return out;
}

ImageGrid add_noise(const ImageGrid& target, double snr, std::uint64_t seed) {
    if (!(snr > 0.0)) throw ConfigError("add_noise: snr must be positive");
    double signal = 0.0;
    for (double v : target.pixels) signal += v * v;
    signal = std::sqrt(signal);
    if (signal == 0.0) throw ConfigError("add_noise: target is identically zero");

    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> noise(target.size());
    double norm = 0.0;
    for (double& e : noise) {
        e = gauss(rng);
        norm += e * e;
    }
    const double scale = signal / (snr * std::sqrt(norm));
    ImageGrid out = target;
    for (std::size_t i = 0; i < noise.size(); ++i) out.pixels[i] += scale * noise[i];
    return out;
}

}  // namespace prony
