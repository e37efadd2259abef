#include "gpx/subordinators.hpp"

#include "gpx/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gpx {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sample_pareto(const ParetoJump& jump, RandomStream& rs) {
    return jump.x_min * std::pow(rs.uniform(), -1.0 / jump.lambda());
}

void require(bool ok, const char* what) {
    if (!ok) {
        throw DomainError(what);
    }
}

}  // namespace

void validate_subordinator(const SubordinatorSpec& spec) {
    std::visit(overloaded{
                   [](const GammaProcess& g) { require(g.nu > 0, "GammaProcess: nu must be positive"); },
                   [](const CompoundPoisson& cp) {
                       require(cp.mu > 0, "CompoundPoisson: mu must be positive");
                       require(cp.jump.lambda_plus_one > 1, "ParetoJump: lambda_plus_one must exceed 1");
                       require(cp.jump.x_min > 0, "ParetoJump: x_min must be positive");
                   },
                   [](const DeterministicTime& d) { require(d.rate > 0, "DeterministicTime: rate must be positive"); },
                   [](const EndpointOnly& e) { require(static_cast<bool>(e.sampler), "EndpointOnly: sampler required"); },
               },
               spec);
}

std::string subordinator_name(const SubordinatorSpec& spec) {
    return std::visit(overloaded{
                          [](const GammaProcess&) { return std::string("gamma"); },
                          [](const CompoundPoisson&) { return std::string("compound-poisson"); },
                          [](const DeterministicTime&) { return std::string("deterministic"); },
                          [](const EndpointOnly&) { return std::string("endpoint-only"); },
                      },
                      spec);
}

bool has_continuous_paths(const SubordinatorSpec& spec) {
    return std::holds_alternative<DeterministicTime>(spec);
}

double sample_endpoint(const SubordinatorSpec& spec, double T, RandomStream& rs) {
    require(T > 0, "sample_endpoint: T must be positive");
    return std::visit(overloaded{
                          [&](const GammaProcess& g) { return rs.gamma(T / g.nu); },
                          [&](const CompoundPoisson& cp) {
                              const std::uint64_t k = rs.poisson(cp.mu * T);
                              double sum = 0.0;
                              for (std::uint64_t i = 0; i < k; ++i) {
                                  sum += sample_pareto(cp.jump, rs);
                              }
                              return sum;
                          },
                          [&](const DeterministicTime& d) { return d.rate * T; },
                          [&](const EndpointOnly& e) {
                              const double y = e.sampler(rs);
                              require(y >= 0, "EndpointOnly: sampler returned a negative value");
                              return y;
                          },
                      },
                      spec);
}

double sample_endpoint(const SubordinatorSpec& spec, double T, std::uint64_t seed) {
    RandomStream rs(seed, 0);
    return sample_endpoint(spec, T, rs);
}

std::vector<double> sample_path(const SubordinatorSpec& spec, const GridSpec& grid, RandomStream& rs) {
    grid.validate();
    const std::size_t n = grid.n;
    const double T = grid.horizon;
    std::vector<double> y(n + 1, 0.0);
    std::visit(overloaded{
                   [&](const GammaProcess& g) {
                       const double shape = grid.dt() / g.nu;
                       for (std::size_t i = 0; i < n; ++i) {
                           y[i + 1] = y[i] + rs.gamma(shape);
                       }
                   },
                   [&](const CompoundPoisson& cp) {
                       const std::uint64_t k = rs.poisson(cp.mu * T);
                       std::vector<std::pair<double, double>> jumps(k);
                       for (auto& [time, size] : jumps) {
                           time = T * rs.uniform();
                           size = sample_pareto(cp.jump, rs);
                       }
                       std::sort(jumps.begin(), jumps.end());
                       std::size_t next = 0;
                       double level = 0.0;
                       for (std::size_t i = 1; i <= n; ++i) {
                           const double t = T * static_cast<double>(i) / static_cast<double>(n);
                           while (next < jumps.size() && jumps[next].first <= t) {
                               level += jumps[next++].second;
                           }
                           y[i] = level;
                       }
                   },
                   [&](const DeterministicTime& d) {
                       for (std::size_t i = 1; i <= n; ++i) {
                           y[i] = d.rate * T * static_cast<double>(i) / static_cast<double>(n);
                       }
                   },
                   [&](const EndpointOnly&) {
                       throw UnsupportedSpec("sample_path: EndpointOnly has no path law");
                   },
               },
               spec);
    return y;
}

std::vector<double> sample_path(const SubordinatorSpec& spec, const GridSpec& grid, double T,
                                std::uint64_t seed) {
    require(std::abs(grid.horizon - T) <= 1e-12 * T, "sample_path: grid horizon must equal T");
    RandomStream rs(seed, 0);
    return sample_path(spec, grid, rs);
}

TailModel endpoint_tail_model(const SubordinatorSpec& spec, double T) {
    require(T > 0, "endpoint_tail_model: T must be positive");
    return std::visit(overloaded{
                          [](const GammaProcess&) -> TailModel { return LogPower{1.0, 1.0}; },
                          [&](const CompoundPoisson& cp) -> TailModel {
                              const double lambda = cp.jump.lambda();
                              return RegularlyVarying{
                                  lambda, constant_slowly_varying(cp.mu * T * std::pow(cp.jump.x_min, lambda))};
                          },
                          [](const DeterministicTime&) -> TailModel {
                              throw UnsupportedSpec("endpoint_tail_model: deterministic endpoint has no tail");
                          },
                          [](const EndpointOnly& e) -> TailModel {
                              if (!e.tail) {
                                  throw UnsupportedSpec("endpoint_tail_model: no analytic tail supplied");
                              }
                              return *e.tail;
                          },
                      },
                      spec);
}

EndpointDensity gamma_density(double shape) {
    require(shape > 0, "gamma_density: shape must be positive");
    const double norm = std::lgamma(shape);
    EndpointDensity d;
    d.log_density = [shape, norm](double s) {
        return s > 0 ? (shape - 1) * std::log(s) - s - norm : -std::numeric_limits<double>::infinity();
    };
    return d;
}

EndpointDensity pareto_density(const ParetoJump& jump) {
    require(jump.lambda_plus_one > 1 && jump.x_min > 0, "pareto_density: invalid parameters");
    const double lambda = jump.lambda();
    const double log_norm = std::log(lambda) + lambda * std::log(jump.x_min);
    EndpointDensity d;
    d.lower = jump.x_min;
    d.log_density = [=](double s) {
        return s >= jump.x_min ? log_norm - jump.lambda_plus_one * std::log(s)
                               : -std::numeric_limits<double>::infinity();
    };
    return d;
}

EndpointDensity point_mass(double y0) {
    require(y0 > 0, "point_mass: location must be positive");
    EndpointDensity d;
    d.atom = y0;
    return d;
}

EndpointDensity endpoint_density(const SubordinatorSpec& spec, double T) {
    require(T > 0, "endpoint_density: T must be positive");
    return std::visit(overloaded{
                          [&](const GammaProcess& g) { return gamma_density(T / g.nu); },
                          [](const CompoundPoisson&) -> EndpointDensity {
                              throw UnsupportedSpec("endpoint_density: compound Poisson endpoint has no closed form");
                          },
                          [&](const DeterministicTime& d) { return point_mass(d.rate * T); },
                          [](const EndpointOnly& e) -> EndpointDensity {
                              if (!e.log_density) {
                                  throw UnsupportedSpec("endpoint_density: no density supplied");
                              }
                              EndpointDensity d;
                              d.log_density = e.log_density;
                              return d;
                          },
                      },
                      spec);
}

}  // namespace gpx
