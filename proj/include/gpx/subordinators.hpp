#pragma once

#include "gpx/asymptotics.hpp"
#include "gpx/fbm.hpp"
#include "gpx/rng.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gpx {

/// Gamma process: Y(t) ~ Gamma(shape t / nu, scale 1).
struct GammaProcess {
    double nu;
};

/// Pareto jumps with density lambda x_min^lambda x^{-(lambda+1)} on [x_min, inf),
/// where lambda = lambda_plus_one - 1.
struct ParetoJump {
    double lambda_plus_one;
    double x_min;

    double lambda() const { return lambda_plus_one - 1.0; }
};

struct CompoundPoisson {
    double mu;  // jump intensity
    ParetoJump jump;
};

/// Y(t) = rate * t.
struct DeterministicTime {
    double rate;
};

/// A time change known only through its endpoint Y(T).
struct EndpointOnly {
    std::function<double(RandomStream&)> sampler;
    std::function<double(double)> log_density;  // may be empty
    std::optional<TailModel> tail;
};

using SubordinatorSpec = std::variant<GammaProcess, CompoundPoisson, DeterministicTime, EndpointOnly>;

void validate_subordinator(const SubordinatorSpec& spec);
std::string subordinator_name(const SubordinatorSpec& spec);

/// True when Y has continuous paths, so that the supremum over t in [0, T] of a
/// functional of Y(t) equals the supremum over the whole range [0, Y(T)].
bool has_continuous_paths(const SubordinatorSpec& spec);

double sample_endpoint(const SubordinatorSpec& spec, double T, RandomStream& rs);
double sample_endpoint(const SubordinatorSpec& spec, double T, std::uint64_t seed);

/// Y at the grid times k T / n, k = 0..n; non-decreasing, first value 0.
/// EndpointOnly has no path law and raises UnsupportedSpec.
std::vector<double> sample_path(const SubordinatorSpec& spec, const GridSpec& grid, RandomStream& rs);
std::vector<double> sample_path(const SubordinatorSpec& spec, const GridSpec& grid, double T,
                                std::uint64_t seed);

/// Tail model for P(Y(T) > u). Compound Poisson uses the one-big-jump
/// approximation mu T P(jump > u).
TailModel endpoint_tail_model(const SubordinatorSpec& spec, double T);

/// Law of Y(T) as a log-density on [lower, upper], or an atom.
struct EndpointDensity {
    std::function<double(double)> log_density;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::optional<double> atom;  // Y(T) = *atom almost surely
};

EndpointDensity endpoint_density(const SubordinatorSpec& spec, double T);

EndpointDensity gamma_density(double shape);
EndpointDensity pareto_density(const ParetoJump& jump);
EndpointDensity point_mass(double y0);

}  // namespace gpx
