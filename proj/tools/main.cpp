// prony: command-line front end for synthesis, reconstruction, localization
// and the random-direction experiments.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "prony/error.hpp"
#include "prony/experiments.hpp"
#include "prony/io.hpp"
#include "prony/microscopy.hpp"
#include "prony/pencil.hpp"
#include "prony/random.hpp"
#include "prony/randsphere.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace prony;
using prony::cli::RunConfig;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out);
    const fs::path path = fs::path(cfg.out) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write '" + path.string() + "'");
    return os;
}

std::ifstream open_in(const RunConfig& cfg) {
    if (cfg.in.empty()) throw ConfigError("'" + cfg.command + "' needs --in");
    std::ifstream is(cfg.in, std::ios::binary);
    if (!is) throw ConfigError("cannot open '" + cfg.in + "'");
    return is;
}

void comment(std::ostream& os, const std::string& key, const std::string& value) {
    os << "# " << key << "=" << value << "\n";
}

ReconstructOptions reconstruct_options(const RunConfig& cfg, const ReconstructOptions& base) {
    ReconstructOptions o = base;
    if (cfg.rank_rule_set) o.rank.rule = cfg.rank_rule == "largest-drop" ? RankRule::largest_drop : RankRule::threshold;
    if (cfg.rank_tol_set) o.rank.rank_tol = cfg.rank_tol;
    if (cfg.M) o.rank.forced_rank = *cfg.M;
    o.gap_tol = cfg.gap_tol;
    o.max_retries = cfg.max_retries;
    o.seed = cfg.seed;
    return o;
}

void print_warnings(const ReconstructionResult& r) {
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
}

void write_result(const RunConfig& cfg, const ReconstructionResult& r) {
    auto result = open_out(cfg, "result.csv");
    io::write_params(result, r.params);
    auto report = open_out(cfg, "report.txt");
    io::write_report(report, r);
    std::cout << "recovered " << r.rank << " source(s), residual " << io::format_double(r.residual) << "\n";
}

ImageGrid finish_image(const RunConfig& cfg, const ParameterSet& p) {
    ImageGrid img = render_image(p, {cfg.b, p.dim()}, cfg.P, cfg.shift_radius);
    if (cfg.snr) img = add_noise(img, *cfg.snr, derive_seed(cfg.seed, 1));
    for (double& v : img.pixels) v += cfg.offset;
    return img;
}

int cmd_synth(const RunConfig& cfg) {
    ParameterSet p = [&] {
        if (auto preset = cfg.preset_params()) return *preset;
        return random_params(cfg.M.value_or(1), cfg.dim(2), cfg.seed, {.min_sep = cfg.min_sep});
    }();
    {
        auto os = open_out(cfg, "params.csv");
        io::write_params(os, p);
    }
    {
        auto os = open_out(cfg, "samples.csv");
        io::write_samples(os, sample_grid(p, cfg.order()));
    }
    if (cfg.P > 0) {
        if (p.dim() > 2) throw ConfigError("images are written for d <= 2 only");
        if (p.coefficients.imag().cwiseAbs().maxCoeff() > 0.0)
            std::cerr << "warning: imaginary parts of the coefficients are not rendered\n";
        const ImageGrid img = finish_image(cfg, p);
        {
            auto os = open_out(cfg, "image.csv");
            io::write_image_csv(os, img);
        }
        if (p.dim() == 2) {
            double peak = 0.0;
            for (double v : img.pixels) peak = std::max(peak, v);
            io::PgmOptions po;
            po.scale = cfg.pgm_scale > 0.0 ? cfg.pgm_scale : (peak > 0.0 ? po.maxval / peak : 1.0);
            std::size_t clipped = 0;
            for (double v : img.pixels)
                if (v < 0.0 || std::round(v * po.scale) > po.maxval) ++clipped;
            if (clipped) std::cerr << "warning: " << clipped << " pixel(s) clipped when writing PGM\n";
            auto os = open_out(cfg, "image.pgm");
            io::write_pgm(os, img, po);
        }
    }
    std::cout << "wrote " << p.order() << " source(s) to " << cfg.out << "\n";
    return 0;
}

int cmd_reconstruct(const RunConfig& cfg) {
    auto is = open_in(cfg);
    const SampleTable samples = io::read_samples(is);
    const ReconstructionResult r = reconstruct(samples, reconstruct_options(cfg, {}));
    print_warnings(r);
    write_result(cfg, r);
    return 0;
}

int cmd_localize(const RunConfig& cfg) {
    const ImageGrid img = io::read_image(cfg.in);
    LocalizeOptions lo;
    lo.reconstruct = reconstruct_options(cfg, LocalizeOptions::default_reconstruct());
    lo.background = cfg.background == "median" ? Background::median : Background::none;
    const ReconstructionResult r = localize(img, {cfg.b, img.d}, cfg.order(), lo);
    print_warnings(r);
    std::cerr << "pencil stage: " << r.pencil_seconds * 1e3 << " ms\n";
    write_result(cfg, r);
    return 0;
}

int cmd_mc_bound(const RunConfig& cfg) {
    const std::vector<int> dims = cfg.d.empty() ? std::vector<int>{2, 3, 5} : cfg.d;
    const std::vector<double> eps = cfg.epsilon.empty() ? std::vector<double>{0.01, 0.05, 0.1} : cfg.epsilon;
    const std::uint64_t trials = cfg.trials ? cfg.trials : 100000;
    auto os = open_out(cfg, "mc_bound.csv");
    comment(os, "command", "mc-bound");
    comment(os, "seed", std::to_string(cfg.seed));
    comment(os, "trials", std::to_string(trials));
    os << "d,epsilon,empirical_freq,freq_stderr,exact_law,band_measure,beta_chain_bound,theorem_bound,"
          "mean_sq_gap_times_d,mean_sq_stderr_times_d\n";
    std::uint64_t cell = 0;
    for (int d : dims)
        for (double e : eps) {
            // Unitary invariance lets the difference vector be the first basis vector.
            Eigen::VectorXcd y = Eigen::VectorXcd::Zero(d);
            y(0) = 1.0;
            const GapExperimentReport r =
                mc_gap_experiment(y, Eigen::VectorXcd::Zero(d), e, trials, derive_seed(cfg.seed, cell++));
            os << d << "," << io::format_double(e) << "," << io::format_double(r.empirical_freq) << ","
               << io::format_double(r.freq_stderr) << "," << io::format_double(r.exact_law_freq) << ","
               << io::format_double(r.band) << "," << io::format_double(beta_chain_bound(e, d)) << ","
               << io::format_double(r.bound) << "," << io::format_double(r.mean_sq_gap * d) << ","
               << io::format_double(r.mean_sq_stderr * d) << "\n";
        }
    return 0;
}

int cmd_gap_map(const RunConfig& cfg) {
    ParameterSet p = [&] {
        if (!cfg.in.empty()) {
            auto is = open_in(cfg);
            return io::read_params(is);
        }
        if (auto preset = cfg.preset_params()) return *preset;
        return random_params(cfg.M.value_or(5), cfg.dim(2), cfg.seed, {.min_sep = cfg.min_sep});
    }();
    std::string mode_name = cfg.mode;
    if (mode_name.empty()) mode_name = p.dim() == 3 ? "real-sphere-d3" : "hopf-d2";
    const GapMapMode mode = parse_gap_map_mode(mode_name);
    const GapMap map = emit_gap_map(p.nodes(), mode, cfg.resolution, 2 * cfg.resolution);
    if (map.undefined) std::cerr << "warning: a single source has no eigenvalue gap; emitting sentinel values\n";
    auto os = open_out(cfg, "gap_map.csv");
    io::write_gap_map(os, map,
                      {"command=gap-map", "mode=" + mode_name, "seed=" + std::to_string(cfg.seed),
                       "M=" + std::to_string(p.order()), "resolution=" + std::to_string(cfg.resolution)});
    if (!map.undefined) std::cout << "local minima below 1e-2: " << count_local_minima(map, 1e-2) << "\n";
    return 0;
}

int cmd_sweep_separation(const RunConfig& cfg) {
    const std::vector<double> qs = cfg.q.empty() ? std::vector<double>{0.283, 0.057} : cfg.q;
    const std::vector<int> ns = cfg.n.empty() ? std::vector<int>{1, 4} : cfg.n;
    SweepOptions so;
    so.seeds = cfg.trials ? static_cast<int>(cfg.trials) : 25;
    so.snr = cfg.snr.value_or(2.554);
    so.P = cfg.P ? cfg.P : 31;
    so.psf = {cfg.b, 2};
    so.seed = cfg.seed;
    so.localize.reconstruct = reconstruct_options(cfg, LocalizeOptions::default_reconstruct());
    so.localize.background = cfg.background == "median" ? Background::median : Background::none;

    auto cells = open_out(cfg, "sweep.csv");
    auto runs = open_out(cfg, "sweep_runs.csv");
    for (auto* os : {&cells, &runs}) {
        comment(*os, "command", "sweep-separation");
        comment(*os, "seed", std::to_string(cfg.seed));
        comment(*os, "seeds", std::to_string(so.seeds));
        comment(*os, "snr", io::format_double(so.snr));
        comment(*os, "P", std::to_string(so.P));
        comment(*os, "b", io::format_double(cfg.b));
    }
    cells << "q,n,median_error,max_error,failure_fraction\n";
    runs << "q,n,run,rank,error\n";
    for (double q : qs)
        for (int n : ns) {
            const SweepCell c = run_sweep_cell(separation_params(q), n, so);
            cells << io::format_double(q) << "," << n << "," << io::format_double(c.median_error) << ","
                  << io::format_double(c.max_error) << "," << io::format_double(c.failure_fraction) << "\n";
            for (std::size_t s = 0; s < c.errors.size(); ++s)
                runs << io::format_double(q) << "," << n << "," << s << "," << c.ranks[s] << ","
                     << io::format_double(c.errors[s]) << "\n";
            std::cout << "q=" << q << " n=" << n << ": median " << c.median_error << ", failures "
                      << c.failure_fraction << "\n";
        }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Randomized multivariate matrix-pencil Prony method"};
    app.require_subcommand(1);

    struct Command {
        std::string name;
        std::string help;
        int (*run)(const RunConfig&);
    };
    const std::vector<Command> commands{
        {"synth", "write parameters, exact samples and optionally a rendered image", cmd_synth},
        {"reconstruct", "recover parameters from a sample table", cmd_reconstruct},
        {"localize", "locate point sources in a blurred image", cmd_localize},
        {"mc-bound", "Monte Carlo check of the eigenvalue-gap probability bound", cmd_mc_bound},
        {"gap-map", "minimal eigenvalue gap over a grid of directions", cmd_gap_map},
        {"sweep-separation", "noisy localization over separations and orders", cmd_sweep_separation},
    };

    std::map<std::string, std::map<std::string, std::vector<std::string>>> flag_values;
    std::map<std::string, std::string> preset;
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--preset", preset[c.name], "preset name or .cfg path");
        for (const auto& key : cli::known_keys()) {
            if (key == "source") continue;
            sub->add_option("--" + key, flag_values[c.name][key]);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    for (const auto& c : commands) {
        CLI::App* sub = app.get_subcommand(c.name);
        if (!sub->parsed()) continue;
        RunConfig cfg;
        cfg.command = c.name;
        cfg.n.clear();
        try {
            if (const char* env = std::getenv("PRONY_SEED"); env && *env) cli::set_key(cfg, "seed", {env});
            if (!preset[c.name].empty()) cli::apply_preset_file(cfg, cli::resolve_preset(preset[c.name]));
            for (const auto& [key, values] : flag_values[c.name])
                if (sub->count("--" + key) > 0) cli::set_key(cfg, key, values);
            if (cfg.n.empty() && c.name != "sweep-separation") cfg.n = {4};
            cli::validate(cfg);
            return c.run(cfg);
        } catch (const NumericalError& e) {
            std::cerr << "error in stage '" << e.stage() << "': " << e.what() << "\n";
            return kExitNumerical;
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return kExitConfig;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return kExitConfig;
}
