#include "prony/pencil.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "prony/error.hpp"
#include "prony/randsphere.hpp"

namespace prony {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kZeroDataFloor = 1e-14;
constexpr double kCondWarn = 1e8;

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const NumericalError&) {
        throw;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw NumericalError(stage, e.what());
    }
}

}  // namespace

GridOrder::GridOrder(int d, int n) : d_(d), n_(n), size_(1) {
    if (d < 1) throw ConfigError("grid order: dimension must be positive");
    if (n < 0) throw ConfigError("grid order: n must be nonnegative");
    for (int i = 0; i < d; ++i) size_ *= static_cast<std::size_t>(n + 1);
}

MultiIndex GridOrder::multi_index(std::size_t position) const {
    MultiIndex k(static_cast<std::size_t>(d_));
    for (int l = d_ - 1; l >= 0; --l) {
        k[static_cast<std::size_t>(l)] = static_cast<int>(position % static_cast<std::size_t>(n_ + 1));
        position /= static_cast<std::size_t>(n_ + 1);
    }
    return k;
}

std::size_t GridOrder::position(std::span<const int> k) const {
    std::size_t pos = 0;
    for (int v : k) pos = pos * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(v);
    return pos;
}

PencilMatrices assemble_pencil_matrices(const SampleTable& samples, const GridOrder& order) {
    if (samples.dim() != order.dim())
        throw ConfigError("assemble: sample table dimension does not match grid order");
    if (samples.order() < order.order())
        throw ConfigError("assemble: sample table order n is smaller than the grid order");

    const auto N = static_cast<Eigen::Index>(order.size());
    const int d = order.dim();
    PencilMatrices out{Eigen::MatrixXcd(N, N), std::vector<Eigen::MatrixXcd>(static_cast<std::size_t>(d))};
    for (auto& s : out.shifts) s.resize(N, N);

    std::vector<MultiIndex> grid(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) grid[p] = order.multi_index(p);

    MultiIndex diff(static_cast<std::size_t>(d));
    for (Eigen::Index r = 0; r < N; ++r) {
        for (Eigen::Index c = 0; c < N; ++c) {
            for (int l = 0; l < d; ++l)
                diff[static_cast<std::size_t>(l)] = grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(l)] -
                                                    grid[static_cast<std::size_t>(c)][static_cast<std::size_t>(l)];
            out.T(r, c) = samples.at(diff);
            for (int l = 0; l < d; ++l) {
                ++diff[static_cast<std::size_t>(l)];
                out.shifts[static_cast<std::size_t>(l)](r, c) = samples.at(diff);
                --diff[static_cast<std::size_t>(l)];
            }
        }
    }
    return out;
}

Eigen::MatrixXcd vandermonde(const Eigen::MatrixXcd& z, const GridOrder& order) {
    const auto N = static_cast<Eigen::Index>(order.size());
    Eigen::MatrixXcd A(z.rows(), N);
    for (Eigen::Index c = 0; c < N; ++c) {
        const MultiIndex k = order.multi_index(static_cast<std::size_t>(c));
        for (Eigen::Index j = 0; j < z.rows(); ++j) {
            cdouble v(1.0);
            for (Eigen::Index l = 0; l < z.cols(); ++l) v *= std::pow(z(j, l), k[static_cast<std::size_t>(l)]);
            A(j, c) = v;
        }
    }
    return A;
}

TruncatedSvd reduced_svd_rank(const Eigen::MatrixXcd& T, const RankOptions& opts) {
    if (T.rows() != T.cols() || T.rows() == 0) throw ConfigError("svd: T must be square and nonempty");
    if (!(opts.rank_tol > 0.0 && opts.rank_tol < 1.0)) throw ConfigError("svd: rank_tol must lie in (0,1)");

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(T, Eigen::ComputeThinU | Eigen::ComputeThinV);
    TruncatedSvd out;
    out.singular_values = svd.singularValues();
    const Eigen::Index N = T.rows();
    const double s1 = out.singular_values(0);
    if (!(s1 >= kZeroDataFloor)) throw NumericalError("svd", "zero data (largest singular value below 1e-14)");

    Eigen::Index m = 0;
    while (m < N && out.singular_values(m) >= opts.rank_tol * s1) ++m;

    if (opts.forced_rank) {
        const int forced = *opts.forced_rank;
        if (forced < 1 || forced > N)
            throw ConfigError("svd: forced rank " + std::to_string(forced) + " outside [1, " + std::to_string(N) + "]");
        if (!(out.singular_values(forced - 1) > std::numeric_limits<double>::epsilon() * s1 * static_cast<double>(N)))
            throw NumericalError("svd", "forced rank exceeds the numerical rank of T");
        m = forced;
    } else if (opts.rule == RankRule::largest_drop) {
        const Eigen::Index last = std::min<Eigen::Index>(m, N - 1);
        Eigen::Index best = m;
        double best_ratio = 0.0;
        for (Eigen::Index i = 0; i < last; ++i) {
            const double next = out.singular_values(i + 1);
            const double ratio = next > 0.0 ? out.singular_values(i) / next : std::numeric_limits<double>::infinity();
            if (ratio > best_ratio) {
                best_ratio = ratio;
                best = i + 1;
            }
        }
        m = best;
    }
    out.full_rank_warning = (m == N) && !opts.forced_rank;

    out.rank = static_cast<int>(m);
    out.U = svd.matrixU().leftCols(m);
    out.V = svd.matrixV().leftCols(m);
    out.sigma = out.singular_values.head(m);
    return out;
}

std::vector<Eigen::MatrixXcd> build_pencil(const TruncatedSvd& svd, std::span<const Eigen::MatrixXcd> shifts) {
    const Eigen::VectorXd inv_sigma = svd.sigma.cwiseInverse();
    std::vector<Eigen::MatrixXcd> S;
    S.reserve(shifts.size());
    for (const auto& shift : shifts) {
        Eigen::MatrixXcd s = svd.U.adjoint() * shift * svd.V;
        s *= inv_sigma.asDiagonal();
        S.push_back(std::move(s));
    }
    return S;
}

Eigensystem eig_general(const Eigen::MatrixXcd& C) {
    if (C.rows() != C.cols()) throw ConfigError("eig: matrix must be square");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(C, true);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eig", "QR iteration failed to converge for " + std::to_string(C.rows()) + "x" +
                                        std::to_string(C.cols()) + " matrix (norm " +
                                        std::to_string(C.norm()) + ")");

    const Eigen::VectorXcd& vals = solver.eigenvalues();
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(vals.size()));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    std::stable_sort(perm.begin(), perm.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (vals(a).real() != vals(b).real()) return vals(a).real() < vals(b).real();
        return vals(a).imag() < vals(b).imag();
    });

    Eigensystem out{Eigen::VectorXcd(vals.size()), Eigen::MatrixXcd(C.rows(), C.cols())};
    for (std::size_t i = 0; i < perm.size(); ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        out.values(idx) = vals(perm[i]);
        Eigen::VectorXcd v = solver.eigenvectors().col(perm[i]);
        const double nrm = v.norm();
        if (nrm > 0.0) v /= nrm;
        out.vectors.col(idx) = v;
    }
    return out;
}

Eigen::MatrixXcd combine_pencil(std::span<const Eigen::MatrixXcd> S, const Eigen::VectorXcd& mu) {
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(S.front().rows(), S.front().cols());
    for (std::size_t l = 0; l < S.size(); ++l) C += std::conj(mu(static_cast<Eigen::Index>(l))) * S[l];
    return C;
}

double min_pairwise_gap(const Eigen::VectorXcd& lambdas) {
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < lambdas.size(); ++i)
        for (Eigen::Index j = i + 1; j < lambdas.size(); ++j) gap = std::min(gap, std::abs(lambdas(i) - lambdas(j)));
    return gap;
}

RandomDirection sample_direction_and_combine(std::span<const Eigen::MatrixXcd> S, std::uint64_t seed, double gap_tol,
                                             int max_retries) {
    if (S.empty()) throw ConfigError("direction: need at least one pencil matrix");
    if (max_retries < 0) throw ConfigError("direction: max_retries must be nonnegative");
    const int d = static_cast<int>(S.size());
    Rng rng(seed);

    RandomDirection best;
    best.min_gap = -1.0;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        const Eigen::VectorXcd mu = sample_complex_sphere(d, rng);
        Eigensystem es = eig_general(combine_pencil(S, mu));
        const double gap = min_pairwise_gap(es.values);
        const double scale = es.values.cwiseAbs().maxCoeff() + 1.0;
        if (gap > best.min_gap) {
            best.mu = mu;
            best.lambdas = std::move(es.values);
            best.W = std::move(es.vectors);
            best.min_gap = gap;
            best.retries = attempt;
        }
        if (!(gap < gap_tol * scale)) return best;
    }
    throw NumericalError("direction", "eigenvalue clustering: sources may coincide or n too small (best gap " +
                                          std::to_string(best.min_gap) + " after " +
                                          std::to_string(max_retries + 1) + " draws)");
}

Diagonalization simultaneous_diagonalize(const Eigen::MatrixXcd& W, std::span<const Eigen::MatrixXcd> S) {
    const Eigen::Index M = W.rows();
    Diagonalization out;
    Eigen::JacobiSVD<Eigen::MatrixXcd> wsvd(W);
    const double smax = wsvd.singularValues()(0);
    const double smin = wsvd.singularValues()(M - 1);
    if (!(smin > std::numeric_limits<double>::epsilon() * smax * static_cast<double>(M)))
        throw NumericalError("diagonalize", "eigenvector matrix W is numerically singular");
    out.cond_W = smax / smin;

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(W);
    out.Z.resize(M, static_cast<Eigen::Index>(S.size()));
    for (std::size_t l = 0; l < S.size(); ++l) {
        const Eigen::MatrixXcd Y = lu.solve(S[l] * W);
        const double ynorm = Y.norm();
        for (Eigen::Index i = 0; i < M; ++i) {
            out.Z(i, static_cast<Eigen::Index>(l)) = Y(i, i);
            if (ynorm == 0.0) continue;
            for (Eigen::Index j = 0; j < M; ++j)
                if (i != j) out.offdiag_max = std::max(out.offdiag_max, std::abs(Y(i, j)) / ynorm);
        }
    }
    return out;
}

Eigen::MatrixXd principal_log(const Eigen::MatrixXcd& Z, bool project_to_torus) {
    Eigen::MatrixXd t(Z.rows(), Z.cols());
    for (Eigen::Index j = 0; j < Z.rows(); ++j) {
        for (Eigen::Index l = 0; l < Z.cols(); ++l) {
            cdouble z = Z(j, l);
            if (z == cdouble(0.0)) throw NumericalError("log", "zero node entry has no logarithm");
            if (project_to_torus) z /= std::abs(z);
            double v = -std::arg(z) / kTwoPi;  // in [-1/2, 1/2)
            if (v < 0.0) v += 1.0;
            if (v >= 1.0) v -= 1.0;
            t(j, l) = v;
        }
    }
    return t;
}

CoefficientFit solve_coefficients(const Eigen::MatrixXd& locations, const SampleTable& samples) {
    const auto M = locations.rows();
    const auto d = locations.cols();
    if (samples.dim() != d) throw ConfigError("coefficients: dimension mismatch");

    std::vector<std::size_t> rows;
    rows.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (samples.present(i)) rows.push_back(i);

    Eigen::MatrixXcd G(static_cast<Eigen::Index>(rows.size()), M);
    Eigen::VectorXcd f(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const MultiIndex k = samples.key(rows[r]);
        const auto row = static_cast<Eigen::Index>(r);
        f(row) = samples.values()[rows[r]];
        for (Eigen::Index j = 0; j < M; ++j) {
            double phase = 0.0;
            for (Eigen::Index l = 0; l < d; ++l) phase += locations(j, l) * k[static_cast<std::size_t>(l)];
            phase -= std::round(phase);
            G(row, j) = std::polar(1.0, -kTwoPi * phase);
        }
    }

    CoefficientFit out;
    for (Eigen::Index i = 0; i < M && out.nodes_distinct; ++i)
        for (Eigen::Index j = 0; j < i; ++j)
            if ((locations.row(i) - locations.row(j)).cwiseAbs().maxCoeff() < 1e-12) out.nodes_distinct = false;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(G);
    qr.setThreshold(1e-12);
    if (qr.rank() < M) throw NumericalError("coefficients", "coincident recovered nodes (rank-deficient system)");
    out.c = qr.solve(f);
    out.residual = (G * out.c - f).norm();
    return out;
}

ReconstructionResult reconstruct(const SampleTable& samples, const ReconstructOptions& opts) {
    const int d = samples.dim();
    const int n = samples.order();
    const GridOrder order(d, n);

    ReconstructionResult out;
    const PencilMatrices pm = run_stage("assemble", [&] { return assemble_pencil_matrices(samples, order); });
    const auto pencil_start = std::chrono::steady_clock::now();
    const TruncatedSvd svd = run_stage("svd", [&] { return reduced_svd_rank(pm.T, opts.rank); });
    out.singular_values = svd.singular_values;
    out.rank = svd.rank;
    if (svd.full_rank_warning)
        out.warnings.emplace_back("no singular value drop: detected rank equals N, data may be under-sampled");

    const auto S = run_stage("pencil", [&] { return build_pencil(svd, pm.shifts); });
    const RandomDirection dir =
        run_stage("direction", [&] { return sample_direction_and_combine(S, opts.seed, opts.gap_tol, opts.max_retries); });
    out.mu = dir.mu;
    out.min_gap = dir.min_gap;
    out.retries = dir.retries;

    const Diagonalization diag = run_stage("diagonalize", [&] { return simultaneous_diagonalize(dir.W, S); });
    out.offdiag_max = diag.offdiag_max;
    out.cond_W = diag.cond_W;
    if (diag.cond_W > kCondWarn) out.warnings.emplace_back("eigenvector matrix is ill-conditioned (cond > 1e8)");

    const Eigen::MatrixXd t = run_stage("log", [&] { return principal_log(diag.Z, opts.project_to_torus); });
    const CoefficientFit fit = run_stage("coefficients", [&] { return solve_coefficients(t, samples); });
    if (!fit.nodes_distinct) out.warnings.emplace_back("recovered nodes are not pairwise distinct");

    out.params = ParameterSet(t, fit.c);
    out.residual = fit.residual;
    const auto stop = std::chrono::steady_clock::now();
    out.pencil_seconds = std::chrono::duration<double>(stop - pencil_start).count();
    return out;
}

}  // namespace prony
