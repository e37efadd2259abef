#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gpx {

/// Uniform grid 0 = t_0 < ... < t_n = horizon.
struct GridSpec {
    std::size_t n;
    double horizon;

    double dt() const { return horizon / static_cast<double>(n); }
    void validate() const;
};

struct PathSample {
    std::vector<double> times;
    std::vector<double> values;
};

/// Exact sampler of fractional Brownian motion (variance t^alpha) on a uniform
/// grid. Increments are fractional Gaussian noise drawn by circulant embedding;
/// one FFT yields two independent paths (real and imaginary parts). For
/// alpha = 1 and a power-of-two grid the Brownian path is built by midpoint
/// (Levy) refinement instead, so grids that differ by powers of two share
/// their common points under the same seed.
///
/// Replicate r of a seed is path r % 2 of pair r / 2 and can be regenerated in
/// isolation.
class FbmSampler {
public:
    FbmSampler(double alpha, GridSpec grid);
    ~FbmSampler();
    FbmSampler(const FbmSampler&) = delete;
    FbmSampler& operator=(const FbmSampler&) = delete;

    /// Per-thread scratch for the FFT.
    class Workspace {
    public:
        explicit Workspace(std::size_t m);
        ~Workspace();
        Workspace(const Workspace&) = delete;
        Workspace& operator=(const Workspace&) = delete;
        Workspace(Workspace&&) noexcept;

    private:
        friend class FbmSampler;
        std::complex<double>* in_ = nullptr;
        std::complex<double>* out_ = nullptr;
    };

    Workspace make_workspace() const;

    /// Writes the two paths of pair `pair` (n + 1 values each, first value 0).
    void sample_pair(std::uint64_t seed, std::uint64_t pair, std::span<double> a,
                     std::span<double> b, Workspace& ws) const;

    void sample_replicate(std::uint64_t seed, std::uint64_t replicate, std::span<double> out,
                          Workspace& ws) const;

    double alpha() const { return alpha_; }
    const GridSpec& grid() const { return grid_; }
    /// Eigenvalues of the embedded circulant for unit grid spacing.
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }

private:
    bool levy_construction() const;
    void sample_brownian(std::uint64_t seed, std::uint64_t stream, std::span<double> out) const;

    double alpha_;
    GridSpec grid_;
    bool levy_ = false;
    std::vector<double> eigenvalues_;
    std::vector<double> scale_;  // sqrt(lambda_j / m) * dt^{alpha/2}
    void* plan_ = nullptr;
};

/// Autocovariance of unit-spacing fractional Gaussian noise at lag k.
double fgn_autocovariance(double alpha, std::size_t k);

PathSample sample_fbm_path(double alpha, const GridSpec& grid, std::uint64_t seed);

struct IdentityTransform {};
/// x, t -> x - c t^theta
struct DriftTransform {
    double c;
    double theta;
};
/// x, t -> x / (1 + c t^theta)
struct NormalizedTransform {
    double c;
    double theta;
};

using PathTransform = std::variant<IdentityTransform, DriftTransform, NormalizedTransform>;

/// Maximum of the transformed values over the grid points (a downward-biased
/// estimate of the continuous supremum).
double path_functional_sup(const PathSample& path, const PathTransform& transform);
double path_functional_sup(std::span<const double> values, std::span<const double> times,
                           const PathTransform& transform);

enum class PickandsMethod {
    // Shift the path by exp(X(tau)) at a uniformly chosen grid point tau and
    // average exp(max X) / sum_i exp(X_i); unbiased for the discrete-grid
    // quantity with bounded summands.
    ChangeOfMeasure,
    // S^{-1} mean exp(max X): the definition verbatim. Its summand has a
    // Pareto(1)-like tail, so at feasible n it is strongly biased low.
    Plain,
};

std::string method_name(PickandsMethod m);

struct ConstantEstimate {
    double value;
    double std_error;
    double S;
    std::size_t n;
    std::uint64_t seed;
    std::size_t grid_n;
};

/// Estimates S^{-1} E exp(sup_{[0,S]} (sqrt2 B_alpha(t) - t^alpha)) on a grid of
/// grid_n steps. Biased for finite S and grid.
ConstantEstimate estimate_pickands(double alpha, double S, std::size_t n, std::size_t grid_n,
                                   std::uint64_t seed,
                                   PickandsMethod method = PickandsMethod::ChangeOfMeasure,
                                   unsigned workers = 0);

/// Estimates E exp(sup_{[-S,S]} (sqrt2 B_alpha(t) - (1+R)|t|^alpha)). The
/// two-sided field is one fBm on [0, 2S] recentred at S; grid_n steps span [-S, S].
ConstantEstimate estimate_piterbarg(double alpha, double R, double S, std::size_t n,
                                    std::size_t grid_n, std::uint64_t seed, unsigned workers = 0);

struct CovarianceCell {
    double s;
    double t;
    double empirical;
    double exact;
    double z;
};

/// Empirical covariance of B(s), B(t) on the 8x8 mesh {k horizon / 8}, against
/// (t^alpha + s^alpha - |t - s|^alpha) / 2, with z-scores from the Gaussian
/// fourth-moment standard error sqrt((var_s var_t + cov^2) / n).
std::vector<CovarianceCell> empirical_covariance_report(double alpha, const GridSpec& grid,
                                                        std::size_t n, std::uint64_t seed,
                                                        unsigned workers = 0);

}  // namespace gpx
