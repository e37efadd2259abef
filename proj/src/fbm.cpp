#include "gpx/fbm.hpp"

#include "gpx/errors.hpp"
#include "gpx/parallel.hpp"
#include "gpx/rng.hpp"
#include "gpx/special.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

namespace gpx {

namespace {

// The FFTW planner is not thread-safe; plan execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(std::complex<double>* p) {
    return reinterpret_cast<fftw_complex*>(p);
}

std::complex<double>* alloc_complex(std::size_t m) {
    auto* p = static_cast<std::complex<double>*>(fftw_malloc(sizeof(std::complex<double>) * m));
    if (p == nullptr) {
        throw std::bad_alloc();
    }
    return p;
}

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

// Auxiliary draws (e.g. the shift point of the change-of-measure estimator)
// come from a second key so they never overlap the path streams.
constexpr std::uint64_t kAuxKey = 0x5851F42D4C957F2DULL;

// Grid powers (k dt)^alpha for k = 0..n.
std::vector<double> grid_powers(double alpha, const GridSpec& grid) {
    std::vector<double> pw(grid.n + 1);
    const double dt = grid.dt();
    for (std::size_t k = 0; k <= grid.n; ++k) {
        pw[k] = std::pow(static_cast<double>(k) * dt, alpha);
    }
    return pw;
}

// Mean and standard error of exp(log_values) with a common shift so that large
// suprema do not overflow.
std::pair<double, double> mean_and_se_of_exp(std::span<const double> log_values) {
    const std::size_t n = log_values.size();
    const double shift = *std::max_element(log_values.begin(), log_values.end());
    std::vector<double> e(n);
    std::vector<double> e2(n);
    for (std::size_t i = 0; i < n; ++i) {
        e[i] = std::exp(log_values[i] - shift);
    }
    const double mean = pairwise_sum(e) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        e2[i] = (e[i] - mean) * (e[i] - mean);
    }
    const double var = n > 1 ? pairwise_sum(e2) / static_cast<double>(n - 1) : 0.0;
    const double scale = std::exp(shift);
    return {mean * scale, std::sqrt(var / static_cast<double>(n)) * scale};
}

void check_alpha(double alpha) {
    if (!(alpha > 0 && alpha <= 2)) {
        throw DomainError("fBm: alpha must lie in (0, 2]");
    }
}

}  // namespace

void GridSpec::validate() const {
    if (n < 2) {
        throw DomainError("GridSpec: need at least 2 steps");
    }
    if (!(horizon > 0)) {
        throw DomainError("GridSpec: horizon must be positive");
    }
}

double fgn_autocovariance(double alpha, std::size_t k) {
    const double kk = static_cast<double>(k);
    if (k == 0) {
        return 1.0;
    }
    return 0.5 * (std::pow(kk + 1, alpha) + std::pow(kk - 1, alpha) - 2 * std::pow(kk, alpha));
}

FbmSampler::Workspace::Workspace(std::size_t m) : in_(alloc_complex(m)), out_(alloc_complex(m)) {}

FbmSampler::Workspace::~Workspace() {
    if (in_ != nullptr) {
        fftw_free(in_);
    }
    if (out_ != nullptr) {
        fftw_free(out_);
    }
}

FbmSampler::Workspace::Workspace(Workspace&& other) noexcept : in_(other.in_), out_(other.out_) {
    other.in_ = nullptr;
    other.out_ = nullptr;
}

FbmSampler::FbmSampler(double alpha, GridSpec grid) : alpha_(alpha), grid_(grid) {
    check_alpha(alpha);
    grid.validate();
    levy_ = alpha == 1.0;
    if (levy_) {
        return;
    }
    const std::size_t n = grid.n;
    const std::size_t m = 2 * n;
    Workspace ws(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t lag = k <= n ? k : m - k;
        ws.in_[k] = fgn_autocovariance(alpha, lag);
    }
    {
        std::lock_guard lock(planner_mutex());
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(m), as_fftw(ws.in_), as_fftw(ws.out_),
                                       FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_execute(p);
        fftw_destroy_plan(p);
        plan_ = fftw_plan_dft_1d(static_cast<int>(m), as_fftw(ws.in_), as_fftw(ws.out_),
                                 FFTW_FORWARD, FFTW_ESTIMATE);
    }
    eigenvalues_.resize(m);
    scale_.resize(m);
    const double dt_scale = std::pow(grid.dt(), alpha / 2);
    for (std::size_t j = 0; j < m; ++j) {
        double lam = ws.out_[j].real();
        if (lam < -1e-9) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(static_cast<fftw_plan>(plan_));
            plan_ = nullptr;
            throw EmbeddingError("FbmSampler: negative circulant eigenvalue " + std::to_string(lam));
        }
        eigenvalues_[j] = lam;
        lam = std::max(lam, 0.0);
        scale_[j] = std::sqrt(lam / static_cast<double>(m)) * dt_scale;
    }
}

FbmSampler::~FbmSampler() {
    if (plan_ != nullptr) {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
}

bool FbmSampler::levy_construction() const {
    return levy_;
}

FbmSampler::Workspace FbmSampler::make_workspace() const {
    return Workspace(levy_ ? 1 : 2 * grid_.n);
}

void FbmSampler::sample_brownian(std::uint64_t seed, std::uint64_t stream, std::span<double> out) const {
    RandomStream rs(seed, stream);
    const std::size_t n = grid_.n;
    const double dt = grid_.dt();
    out[0] = 0.0;
    if (!is_power_of_two(n)) {
        const double sd = std::sqrt(dt);
        for (std::size_t i = 0; i < n; ++i) {
            out[i + 1] = out[i] + sd * rs.normal();
        }
        return;
    }
    out[n] = std::sqrt(grid_.horizon) * rs.normal();
    for (std::size_t step = n / 2; step >= 1; step /= 2) {
        const double sd = std::sqrt(static_cast<double>(step) * dt / 2);
        for (std::size_t i = step; i < n; i += 2 * step) {
            out[i] = 0.5 * (out[i - step] + out[i + step]) + sd * rs.normal();
        }
    }
}

void FbmSampler::sample_pair(std::uint64_t seed, std::uint64_t pair, std::span<double> a,
                             std::span<double> b, Workspace& ws) const {
    const std::size_t n = grid_.n;
    if (a.size() != n + 1 || b.size() != n + 1) {
        throw DomainError("FbmSampler: output spans must hold n + 1 values");
    }
    if (levy_) {
        sample_brownian(seed, 2 * pair, a);
        sample_brownian(seed, 2 * pair + 1, b);
        return;
    }
    const std::size_t m = 2 * n;
    RandomStream rs(seed, pair);
    for (std::size_t j = 0; j < m; ++j) {
        const double re = rs.normal();
        const double im = rs.normal();
        ws.in_[j] = {scale_[j] * re, scale_[j] * im};
    }
    fftw_execute_dft(static_cast<fftw_plan>(plan_), as_fftw(ws.in_), as_fftw(ws.out_));
    a[0] = 0.0;
    b[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a[i + 1] = a[i] + ws.out_[i].real();
        b[i + 1] = b[i] + ws.out_[i].imag();
    }
}

void FbmSampler::sample_replicate(std::uint64_t seed, std::uint64_t replicate, std::span<double> out,
                                  Workspace& ws) const {
    if (levy_) {
        if (out.size() != grid_.n + 1) {
            throw DomainError("FbmSampler: output span must hold n + 1 values");
        }
        sample_brownian(seed, replicate, out);
        return;
    }
    std::vector<double> other(grid_.n + 1);
    if (replicate % 2 == 0) {
        sample_pair(seed, replicate / 2, out, other, ws);
    } else {
        sample_pair(seed, replicate / 2, other, out, ws);
    }
}

PathSample sample_fbm_path(double alpha, const GridSpec& grid, std::uint64_t seed) {
    FbmSampler sampler(alpha, grid);
    auto ws = sampler.make_workspace();
    PathSample path;
    path.values.resize(grid.n + 1);
    path.times.resize(grid.n + 1);
    sampler.sample_replicate(seed, 0, path.values, ws);
    for (std::size_t i = 0; i <= grid.n; ++i) {
        path.times[i] = grid.horizon * static_cast<double>(i) / static_cast<double>(grid.n);
    }
    return path;
}

double path_functional_sup(std::span<const double> values, std::span<const double> times,
                           const PathTransform& transform) {
    if (values.empty() || values.size() != times.size()) {
        throw DomainError("path_functional_sup: values and times must be non-empty and aligned");
    }
    return std::visit(
        [&](const auto& tr) {
            using T = std::decay_t<decltype(tr)>;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < values.size(); ++i) {
                double v = values[i];
                if constexpr (std::is_same_v<T, DriftTransform>) {
                    v -= tr.c * std::pow(times[i], tr.theta);
                } else if constexpr (std::is_same_v<T, NormalizedTransform>) {
                    v /= 1.0 + tr.c * std::pow(times[i], tr.theta);
                }
                best = std::max(best, v);
            }
            return best;
        },
        transform);
}

double path_functional_sup(const PathSample& path, const PathTransform& transform) {
    return path_functional_sup(path.values, path.times, transform);
}

std::string method_name(PickandsMethod m) {
    return m == PickandsMethod::Plain ? "plain" : "change-of-measure";
}

ConstantEstimate estimate_pickands(double alpha, double S, std::size_t n, std::size_t grid_n,
                                   std::uint64_t seed, PickandsMethod method, unsigned workers) {
    check_alpha(alpha);
    if (!(S > 0) || n < 1) {
        throw DomainError("estimate_pickands: need S > 0 and n >= 1");
    }
    const GridSpec grid{grid_n, S};
    const FbmSampler sampler(alpha, grid);
    const std::vector<double> pw = grid_powers(alpha, grid);
    const std::size_t pairs = (n + 1) / 2;
    std::vector<double> log_values(n);
    const double sqrt2 = std::numbers::sqrt2;

    auto score = [&](std::span<const double> path, std::uint64_t replicate) {
        if (method == PickandsMethod::Plain) {
            double best = 0.0;
            for (std::size_t i = 0; i <= grid_n; ++i) {
                best = std::max(best, sqrt2 * path[i] - pw[i]);
            }
            return best;
        }
        RandomStream aux(seed + kAuxKey, replicate);
        const auto j = std::min<std::size_t>(
            static_cast<std::size_t>(aux.uniform() * static_cast<double>(grid_n + 1)), grid_n);
        const double shift = pw[j] - sqrt2 * path[j];
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i <= grid_n; ++i) {
            const std::size_t lag = i > j ? i - j : j - i;
            best = std::max(best, sqrt2 * path[i] - pw[lag] + shift);
        }
        double sum = 0.0;
        for (std::size_t i = 0; i <= grid_n; ++i) {
            const std::size_t lag = i > j ? i - j : j - i;
            sum += std::exp(sqrt2 * path[i] - pw[lag] + shift - best);
        }
        // log of (n+1)/S * exp(max) / sum exp(X_i)
        return std::log(static_cast<double>(grid_n + 1)) - std::log(sum);
    };

    const unsigned w = resolve_workers(workers);
    parallel_for(pairs, w, [&](std::size_t begin, std::size_t end, unsigned) {
        auto ws = sampler.make_workspace();
        std::vector<double> a(grid_n + 1);
        std::vector<double> b(grid_n + 1);
        for (std::size_t k = begin; k < end; ++k) {
            sampler.sample_pair(seed, k, a, b, ws);
            log_values[2 * k] = score(a, 2 * k);
            if (2 * k + 1 < n) {
                log_values[2 * k + 1] = score(b, 2 * k + 1);
            }
        }
    });
    const auto [mean, se] = mean_and_se_of_exp(log_values);
    return {mean / S, se / S, S, n, seed, grid_n};
}

ConstantEstimate estimate_piterbarg(double alpha, double R, double S, std::size_t n,
                                    std::size_t grid_n, std::uint64_t seed, unsigned workers) {
    check_alpha(alpha);
    if (!(R > 0) || !(S > 0) || n < 1) {
        throw DomainError("estimate_piterbarg: need R > 0, S > 0 and n >= 1");
    }
    if (grid_n % 2 != 0) {
        throw DomainError("estimate_piterbarg: grid_n must be even");
    }
    const GridSpec grid{grid_n, 2 * S};
    const FbmSampler sampler(alpha, grid);
    const std::vector<double> pw = grid_powers(alpha, grid);
    const std::size_t centre = grid_n / 2;
    const std::size_t pairs = (n + 1) / 2;
    std::vector<double> log_values(n);
    const double sqrt2 = std::numbers::sqrt2;

    auto score = [&](std::span<const double> path) {
        double best = 0.0;
        for (std::size_t i = 0; i <= grid_n; ++i) {
            const std::size_t lag = i > centre ? i - centre : centre - i;
            best = std::max(best, sqrt2 * (path[i] - path[centre]) - (1 + R) * pw[lag]);
        }
        return best;
    };

    parallel_for(pairs, resolve_workers(workers), [&](std::size_t begin, std::size_t end, unsigned) {
        auto ws = sampler.make_workspace();
        std::vector<double> a(grid_n + 1);
        std::vector<double> b(grid_n + 1);
        for (std::size_t k = begin; k < end; ++k) {
            sampler.sample_pair(seed, k, a, b, ws);
            log_values[2 * k] = score(a);
            if (2 * k + 1 < n) {
                log_values[2 * k + 1] = score(b);
            }
        }
    });
    const auto [mean, se] = mean_and_se_of_exp(log_values);
    return {mean, se, S, n, seed, grid_n};
}

std::vector<CovarianceCell> empirical_covariance_report(double alpha, const GridSpec& grid,
                                                        std::size_t n, std::uint64_t seed,
                                                        unsigned workers) {
    constexpr std::size_t kMesh = 8;
    if (grid.n % kMesh != 0) {
        throw DomainError("empirical_covariance_report: grid.n must be a multiple of 8");
    }
    if (n < 2) {
        throw DomainError("empirical_covariance_report: need at least 2 replicates");
    }
    const FbmSampler sampler(alpha, grid);
    const std::size_t stride = grid.n / kMesh;
    using Acc = std::vector<double>;
    const std::size_t pairs = (n + 1) / 2;
    const unsigned w = resolve_workers(workers);
    std::vector<FbmSampler::Workspace> spaces;
    std::vector<std::vector<double>> buf_a(w, std::vector<double>(grid.n + 1));
    std::vector<std::vector<double>> buf_b(w, std::vector<double>(grid.n + 1));
    for (unsigned i = 0; i < w; ++i) {
        spaces.push_back(sampler.make_workspace());
    }
    auto accumulate = [&](Acc& acc, std::span<const double> path) {
        for (std::size_t i = 0; i < kMesh; ++i) {
            for (std::size_t j = 0; j < kMesh; ++j) {
                acc[i * kMesh + j] += path[(i + 1) * stride] * path[(j + 1) * stride];
            }
        }
    };
    Acc sums = chunked_reduce<Acc>(
        pairs, 256, w, [] { return Acc(kMesh * kMesh, 0.0); },
        [&](Acc& acc, std::size_t k, unsigned worker) {
            sampler.sample_pair(seed, k, buf_a[worker], buf_b[worker], spaces[worker]);
            accumulate(acc, buf_a[worker]);
            if (2 * k + 1 < n) {
                accumulate(acc, buf_b[worker]);
            }
        },
        [](Acc& x, const Acc& y) {
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] += y[i];
            }
        });
    std::vector<CovarianceCell> cells;
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < kMesh; ++i) {
        for (std::size_t j = 0; j < kMesh; ++j) {
            const double s = grid.horizon * static_cast<double>(i + 1) / kMesh;
            const double t = grid.horizon * static_cast<double>(j + 1) / kMesh;
            const double exact = 0.5 * (std::pow(t, alpha) + std::pow(s, alpha) - std::pow(std::abs(t - s), alpha));
            const double emp = sums[i * kMesh + j] / nn;
            const double se = std::sqrt((std::pow(s, alpha) * std::pow(t, alpha) + exact * exact) / nn);
            cells.push_back({s, t, emp, exact, (emp - exact) / se});
        }
    }
    return cells;
}

}  // namespace gpx
