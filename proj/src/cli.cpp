#include "gpx/cli.hpp"

#include "gpx/asymptotics.hpp"
#include "gpx/config.hpp"
#include "gpx/errors.hpp"
#include "gpx/fbm.hpp"
#include "gpx/mc_engine.hpp"
#include "gpx/risk_model.hpp"
#include "gpx/subordinators.hpp"
#include "gpx/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>

namespace gpx {

bool known_pickands(double alpha, double& value) {
    if (alpha == 1.0) {
        value = 1.0;
        return true;
    }
    if (alpha == 2.0) {
        value = 1.0 / std::sqrt(std::numbers::pi);
        return true;
    }
    return false;
}

bool known_piterbarg(double alpha, double R, double& value) {
    if (!(R > 0)) {
        return false;
    }
    if (alpha == 1.0) {
        // Maximum of two independent Exp(1 + R) suprema.
        value = 2 * (1 + R) * (1 + R) / (R * (1 + 2 * R));
        return true;
    }
    if (alpha == 2.0) {
        value = std::sqrt((1 + R) / R);
        return true;
    }
    return false;
}

namespace {

enum class OutFormat { Text, Csv, Json };

OutFormat parse_out_format(const std::string& s) {
    if (s == "text") {
        return OutFormat::Text;
    }
    if (s == "csv") {
        return OutFormat::Csv;
    }
    if (s == "json") {
        return OutFormat::Json;
    }
    throw ConfigError("unknown format '" + s + "' (expected text, csv or json)");
}

/// Ordered named scalars.
class Record {
public:
    void add(const std::string& key, double v) { fields_.push_back({key, format_double(v), v}); }
    void add_int(const std::string& key, std::uint64_t v) { fields_.push_back({key, std::to_string(v), v}); }
    void add(const std::string& key, const std::string& v) { fields_.push_back({key, v, v}); }
    void add(const std::string& key, const char* v) { add(key, std::string(v)); }

    std::string render(OutFormat format) const {
        std::ostringstream out;
        if (format == OutFormat::Json) {
            nlohmann::ordered_json doc = nlohmann::ordered_json::object();
            for (const auto& f : fields_) {
                doc[f.key] = f.json;
            }
            out << doc.dump(2) << "\n";
        } else if (format == OutFormat::Csv) {
            for (std::size_t i = 0; i < fields_.size(); ++i) {
                out << (i ? "," : "") << fields_[i].key;
            }
            out << "\n";
            for (std::size_t i = 0; i < fields_.size(); ++i) {
                out << (i ? "," : "") << fields_[i].value;
            }
            out << "\n";
        } else {
            for (const auto& f : fields_) {
                out << f.key << "=" << f.value << "\n";
            }
        }
        return out.str();
    }

private:
    struct Field {
        std::string key;
        std::string value;
        nlohmann::ordered_json json;
    };
    std::vector<Field> fields_;
};

/// Rows of numbers under a header.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(const std::vector<double>& row) {
        std::vector<std::string> cells;
        for (double v : row) {
            cells.push_back(format_double(v));
        }
        rows_.push_back(std::move(cells));
        values_.push_back(row);
    }

    std::string render(OutFormat format) const {
        std::ostringstream out;
        if (format == OutFormat::Json) {
            nlohmann::ordered_json doc = nlohmann::ordered_json::array();
            for (const auto& row : values_) {
                nlohmann::ordered_json item = nlohmann::ordered_json::object();
                for (std::size_t c = 0; c < header_.size(); ++c) {
                    item[header_[c]] = row[c];
                }
                doc.push_back(std::move(item));
            }
            return doc.dump(2) + "\n";
        }
        for (std::size_t c = 0; c < header_.size(); ++c) {
            out << (c ? "," : "") << header_[c];
        }
        out << "\n";
        for (const auto& row : rows_) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out << (c ? "," : "") << row[c];
            }
            out << "\n";
        }
        return out.str();
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::vector<double>> values_;
};

struct OptionSpec {
    std::string flag;  // without leading dashes
    std::string key;   // config key
    std::string help;
};

struct Command {
    std::string group;
    std::string name;
    std::string description;
    std::vector<OptionSpec> options;
    bool stochastic;
    std::function<std::string(const Config&, OutFormat)> run;
};

// ---------------------------------------------------------------- option sets

std::vector<OptionSpec> operator+(std::vector<OptionSpec> a, const std::vector<OptionSpec>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

const std::vector<OptionSpec> kLocalStructure = {
    {"t0", "ls.t0", "location of the maximal standard deviation (default 1)"},
    {"a", "ls.a", "coefficient of the standard deviation near t0 (default 1)"},
    {"beta", "ls.beta", "exponent of the standard deviation near t0 (default 2)"},
    {"d", "ls.d", "coefficient of the correlation near t0 (default 1)"},
    {"alpha", "ls.alpha", "exponent of the correlation near t0 (default 1)"},
    {"r", "ls.r", "Hoelder exponent of the increments (default alpha)"},
};

const std::vector<OptionSpec> kConstants = {
    {"pickands", "constants.pickands", "Pickands constant (known values used for alpha = 1, 2)"},
    {"piterbarg", "constants.piterbarg", "Piterbarg constant (known values used for alpha = 1, 2)"},
};

const std::vector<OptionSpec> kTail = {
    {"tail", "tail.type", "endpoint tail: rv, weibull or logpower"},
    {"lambda", "tail.lambda", "regularly varying index"},
    {"p", "tail.p", "exponent of the exponential tail"},
    {"L", "tail.L", "rate of the exponential tail"},
    {"delta", "tail.delta", "polynomial exponent of the Weibullian tail (default 0)"},
};

const std::vector<OptionSpec> kRisk = {
    {"alpha", "risk.alpha", "fBm variance exponent in (0, 2]"},
    {"theta", "risk.theta", "drift exponent, above alpha/2"},
    {"c", "risk.c", "drift coefficient"},
};

const std::vector<OptionSpec> kU = {{"u", "u", "threshold or comma-separated thresholds"}};

const std::vector<OptionSpec> kSubordinator = {
    {"subordinator", "subordinator.type", "gamma, compound-poisson, deterministic or pareto-endpoint"},
    {"nu", "subordinator.nu", "Gamma process scale (default 1)"},
    {"mu", "subordinator.mu", "compound Poisson intensity"},
    {"lambda-plus-one", "subordinator.lambda_plus_one", "Pareto density index"},
    {"x-min", "subordinator.x_min", "Pareto lower bound (default 1)"},
    {"rate", "subordinator.rate", "deterministic time rate (default 1)"},
};

const std::vector<OptionSpec> kExperiment = {
    {"T", "experiment.T", "time horizon (default 1)"},
    {"u", "experiment.u", "comma-separated thresholds"},
    {"n", "experiment.n", "replicates"},
    {"grid-n", "experiment.grid_n", "grid steps"},
    {"estimator", "experiment.estimator", "PlainMC, ConditionalMC or QuadratureBM"},
    {"confidence", "experiment.confidence", "confidence level of intervals (default 0.95)"},
};

// ---------------------------------------------------------------- builders

LocalStructure local_structure(const Config& cfg) {
    LocalStructure ls;
    ls.t0 = cfg.get_double("ls.t0", 1.0);
    ls.a = cfg.get_double("ls.a", 1.0);
    ls.beta = cfg.get_double("ls.beta", 2.0);
    ls.d = cfg.get_double("ls.d", 1.0);
    ls.alpha = cfg.get_double("ls.alpha", 1.0);
    ls.r = cfg.get_double("ls.r", ls.alpha);
    ls.validate();
    return ls;
}

RiskParams risk_params(const Config& cfg) {
    return RiskParams(cfg.get_double("risk.alpha"), cfg.get_double("risk.theta", 1.0), cfg.get_double("risk.c"));
}

TailModel tail_model(const Config& cfg) {
    const std::string type = cfg.get_string("tail.type");
    TailModel tail;
    if (type == "rv") {
        tail = RegularlyVarying{cfg.get_double("tail.lambda")};
    } else if (type == "weibull") {
        tail = Weibullian{cfg.get_double("tail.p"), cfg.get_double("tail.L"), cfg.get_double("tail.delta", 0.0)};
    } else if (type == "logpower") {
        tail = LogPower{cfg.get_double("tail.p"), cfg.get_double("tail.L")};
    } else {
        throw ConfigError("unknown tail type '" + type + "' (expected rv, weibull or logpower)");
    }
    validate_tail(tail);
    return tail;
}

struct ResolvedConstant {
    double value = 0.0;
    std::string source;
};

ResolvedConstant resolve_pickands(const Config& cfg, double alpha, bool required) {
    if (cfg.has("constants.pickands")) {
        return {cfg.get_double("constants.pickands"), "user"};
    }
    double v = 0.0;
    if (known_pickands(alpha, v)) {
        return {v, "known"};
    }
    if (required) {
        throw ConfigError("no known Pickands constant for this alpha; pass --pickands");
    }
    return {0.0, "unused"};
}

ResolvedConstant resolve_piterbarg(const Config& cfg, double alpha, double R, bool required) {
    if (cfg.has("constants.piterbarg")) {
        return {cfg.get_double("constants.piterbarg"), "user"};
    }
    double v = 0.0;
    if (known_piterbarg(alpha, R, v)) {
        return {v, "known"};
    }
    if (required) {
        throw ConfigError("no known Piterbarg constant for this alpha; pass --piterbarg");
    }
    return {0.0, "unused"};
}

SubordinatorSpec subordinator(const Config& cfg) {
    const std::string type = cfg.get_string("subordinator.type", "deterministic");
    SubordinatorSpec spec;
    if (type == "gamma") {
        spec = GammaProcess{cfg.get_double("subordinator.nu", 1.0)};
    } else if (type == "compound-poisson") {
        spec = CompoundPoisson{cfg.get_double("subordinator.mu"),
                               ParetoJump{cfg.get_double("subordinator.lambda_plus_one"),
                                          cfg.get_double("subordinator.x_min", 1.0)}};
    } else if (type == "deterministic") {
        spec = DeterministicTime{cfg.get_double("subordinator.rate", 1.0)};
    } else if (type == "pareto-endpoint") {
        const ParetoJump jump{cfg.get_double("subordinator.lambda_plus_one"), cfg.get_double("subordinator.x_min", 1.0)};
        if (!(jump.lambda_plus_one > 1) || !(jump.x_min > 0)) {
            throw ConfigError("pareto-endpoint: need lambda_plus_one > 1 and x_min > 0");
        }
        EndpointOnly e;
        e.sampler = [jump](RandomStream& rs) { return jump.x_min * std::pow(rs.uniform(), -1.0 / jump.lambda()); };
        e.log_density = pareto_density(jump).log_density;
        e.tail = RegularlyVarying{jump.lambda(), constant_slowly_varying(std::pow(jump.x_min, jump.lambda()))};
        spec = e;
    } else {
        throw ConfigError("unknown subordinator '" + type + "'");
    }
    validate_subordinator(spec);
    return spec;
}

ExperimentConfig experiment(const Config& cfg) {
    ExperimentConfig e;
    e.risk = risk_params(cfg);
    e.subordinator = subordinator(cfg);
    e.T = cfg.get_double("experiment.T", 1.0);
    e.u_list = cfg.get_doubles("experiment.u");
    e.n = cfg.get_uint("experiment.n", 10000);
    e.grid_n = cfg.get_uint("experiment.grid_n", 1024);
    e.seed = cfg.get_uint("seed");
    e.estimator = parse_estimator(cfg.get_string("experiment.estimator", "PlainMC"));
    e.confidence = cfg.get_double("experiment.confidence", 0.95);
    e.workers = static_cast<unsigned>(cfg.get_uint("workers", 0));
    e.validate();
    return e;
}

SigmaProfile thmlog_profile(const Config& cfg, double t0) {
    SigmaProfile profile;
    if (cfg.has("profile.sigma0")) {
        const double s0 = cfg.get_double("profile.sigma0");
        if (!(s0 > 0 && s0 <= 1)) {
            throw ConfigError("sigma0 must lie in (0, 1]");
        }
        profile.sigma = [s0, t0](double s) { return s0 + (1 - s0) * std::min(s / t0, 1.0); };
        profile.origin = PositiveOrigin{s0};
    } else if (cfg.has("profile.D") || cfg.has("profile.eta")) {
        const double D = cfg.get_double("profile.D");
        const double eta = cfg.get_double("profile.eta");
        if (!(D > 0 && eta > 0)) {
            throw ConfigError("D and eta must be positive");
        }
        profile.sigma = [D, eta](double s) { return std::min(D * std::pow(s, eta), 1.0); };
        profile.origin = PowerLawOrigin{D, eta};
    } else {
        profile.sigma = [t0](double s) { return std::min(s / t0, 1.0); };
    }
    profile.sigma_hat = profile.sigma;
    return profile;
}

void add_regime(Record& rec, const RegimeResult& r) {
    rec.add("regime", regime_name(r.regime));
    rec.add("q", r.u_exponent);
    rec.add("K", r.constant);
}

void add_expression(Record& rec, const AsymptoticExpression& e, const Config& cfg) {
    rec.add("prefactor", e.prefactor);
    rec.add("poly_exponent", e.poly_exponent);
    rec.add("constant_factor", e.constant_factor);
    if (cfg.has("u")) {
        for (double u : cfg.get_doubles("u")) {
            if (!(u > 0)) {
                throw ConfigError("u must be positive");
            }
            rec.add("u", u);
            rec.add("value", e.evaluate(u));
            rec.add("log_value", e.log_evaluate(u));
        }
    }
}

// ---------------------------------------------------------------- commands

std::vector<Command> commands() {
    std::vector<Command> cmds;

    cmds.push_back({"asym", "k1", "exact asymptotics over a fixed interval",
                    kLocalStructure + kConstants + kU, false, [](const Config& cfg, OutFormat f) {
                        const LocalStructure ls = local_structure(cfg);
                        const auto H = resolve_pickands(cfg, ls.alpha, ls.alpha < ls.beta);
                        const auto P = resolve_piterbarg(cfg, ls.alpha, ls.a / ls.d, ls.alpha == ls.beta);
                        Record rec;
                        rec.add("pickands_source", H.source);
                        rec.add("piterbarg_source", P.source);
                        add_expression(rec, k1_asymptotic(ls, H.value, P.value), cfg);
                        return rec.render(f);
                    }});

    cmds.push_back({"asym", "thmT", "exact asymptotics over a random interval [0, T / u^gamma]",
                    kLocalStructure + kConstants + kTail + kU +
                        std::vector<OptionSpec>{{"gamma", "gamma", "interval shrinkage exponent"}},
                    false, [](const Config& cfg, OutFormat f) {
                        const LocalStructure ls = local_structure(cfg);
                        const auto H = resolve_pickands(cfg, ls.alpha, ls.alpha < ls.beta);
                        const auto P = resolve_piterbarg(cfg, ls.alpha, ls.a / ls.d, ls.alpha == ls.beta);
                        const TailModel tail = tail_model(cfg);
                        Record rec;
                        rec.add("tail", tail_name(tail));
                        rec.add("pickands_source", H.source);
                        rec.add("piterbarg_source", P.source);
                        add_expression(rec, thmT_asymptotic(ls, tail, cfg.get_double("gamma"), H.value, P.value), cfg);
                        return rec.render(f);
                    }});

    cmds.push_back({"asym", "thmlog", "logarithmic asymptotics over a random interval",
                    std::vector<OptionSpec>{{"gamma", "gamma", "interval shrinkage exponent"},
                                            {"p", "tail.p", "log-power tail exponent"},
                                            {"L", "tail.L", "log-power tail rate"},
                                            {"t0", "profile.t0", "location of the maximum (default 1)"},
                                            {"sigma0", "profile.sigma0", "standard deviation at the origin"},
                                            {"D", "profile.D", "power-law origin coefficient"},
                                            {"eta", "profile.eta", "power-law origin exponent"}},
                    false, [](const Config& cfg, OutFormat f) {
                        const double t0 = cfg.get_double("profile.t0", 1.0);
                        const SigmaProfile profile = thmlog_profile(cfg, t0);
                        Record rec;
                        add_regime(rec, thmlog_rate(profile, cfg.get_double("gamma"), cfg.get_double("tail.p"),
                                                    cfg.get_double("tail.L"), t0));
                        return rec.render(f);
                    }});

    cmds.push_back({"risk", "constants", "constants of the risk process", kRisk, false,
                    [](const Config& cfg, OutFormat f) {
                        const RiskConstants rc = risk_constants(risk_params(cfg));
                        Record rec;
                        rec.add("s0", rc.s0);
                        rec.add("V0", rc.V0);
                        rec.add("Q", rc.Q);
                        return rec.render(f);
                    }});

    cmds.push_back({"risk", "prop1", "exact ruin asymptotics for a continuous time change",
                    kRisk + kTail + kU + kConstants, false, [](const Config& cfg, OutFormat f) {
                        const RiskParams rp = risk_params(cfg);
                        const TailModel tail = tail_model(cfg);
                        const auto H = resolve_pickands(cfg, rp.alpha, true);
                        Record rec;
                        rec.add("tail", tail_name(tail));
                        rec.add("pickands_source", H.source);
                        for (double u : cfg.get_doubles("u")) {
                            rec.add("u", u);
                            rec.add("value", prop1_asymptotic(rp, tail, u, H.value));
                            rec.add("log_value", prop1_log_asymptotic(rp, tail, u, H.value));
                        }
                        return rec.render(f);
                    }});

    cmds.push_back({"risk", "prop2", "logarithmic ruin asymptotics for a log-power endpoint tail",
                    kRisk + std::vector<OptionSpec>{{"p", "tail.p", "log-power tail exponent"},
                                                    {"L", "tail.L", "log-power tail rate"}},
                    false, [](const Config& cfg, OutFormat f) {
                        const RiskParams rp = risk_params(cfg);
                        const double L = cfg.get_double("tail.L");
                        const RegimeResult r = prop2_lograte(rp, cfg.get_double("tail.p"), L);
                        Record rec;
                        add_regime(rec, r);
                        if (r.regime == Regime::Critical) {
                            rec.add("A0", prop2_A0(rp, L));
                        }
                        return rec.render(f);
                    }});

    cmds.push_back({"risk", "prop34", "logarithmic ruin asymptotics from the endpoint density",
                    kRisk + std::vector<OptionSpec>{{"density", "density.type", "rv or logpower"},
                                                    {"lambda", "density.lambda", "density index minus one"},
                                                    {"p", "density.p", "log-power exponent"},
                                                    {"L", "density.L", "log-power rate"}},
                    false, [](const Config& cfg, OutFormat f) {
                        const RiskParams rp = risk_params(cfg);
                        const std::string type = cfg.get_string("density.type");
                        EndpointDensityTail density;
                        if (type == "rv") {
                            density = RegularlyVaryingDensity{cfg.get_double("density.lambda")};
                        } else if (type == "logpower") {
                            density = LogPowerDensity{cfg.get_double("density.p"), cfg.get_double("density.L")};
                        } else {
                            throw ConfigError("unknown density type '" + type + "' (expected rv or logpower)");
                        }
                        Record rec;
                        add_regime(rec, prop34_lograte(rp, density));
                        return rec.render(f);
                    }});

    cmds.push_back({"risk", "laplace", "fractional Laplace motion ruin rates",
                    std::vector<OptionSpec>{{"alpha", "risk.alpha", "fBm variance exponent"},
                                            {"c", "risk.c", "drift coefficient"}},
                    false, [](const Config& cfg, OutFormat f) {
                        Record rec;
                        add_regime(rec, laplace_motion_rates(cfg.get_double("risk.alpha"), cfg.get_double("risk.c")));
                        return rec.render(f);
                    }});

    cmds.push_back({"sim", "fbm", "sample a fractional Brownian path or its covariance report",
                    std::vector<OptionSpec>{{"alpha", "fbm.alpha", "variance exponent in (0, 2]"},
                                            {"grid-n", "fbm.grid_n", "grid steps (default 1024)"},
                                            {"horizon", "fbm.horizon", "right endpoint (default 1)"},
                                            {"replicates", "fbm.replicates", "replicates for a covariance report"}},
                    true, [](const Config& cfg, OutFormat f) {
                        const double alpha = cfg.get_double("fbm.alpha");
                        const GridSpec grid{cfg.get_uint("fbm.grid_n", 1024), cfg.get_double("fbm.horizon", 1.0)};
                        grid.validate();
                        const std::uint64_t seed = cfg.get_uint("seed");
                        if (cfg.has("fbm.replicates")) {
                            Table t({"s", "t", "empirical", "exact", "z"});
                            for (const auto& cell : empirical_covariance_report(
                                     alpha, grid, cfg.get_uint("fbm.replicates"), seed,
                                     static_cast<unsigned>(cfg.get_uint("workers", 0)))) {
                                t.add_row({cell.s, cell.t, cell.empirical, cell.exact, cell.z});
                            }
                            return t.render(f);
                        }
                        const PathSample path = sample_fbm_path(alpha, grid, seed);
                        Table t({"t", "value"});
                        for (std::size_t i = 0; i < path.values.size(); ++i) {
                            t.add_row({path.times[i], path.values[i]});
                        }
                        return t.render(f);
                    }});

    cmds.push_back({"sim", "pickands", "Monte-Carlo estimate of the Pickands constant",
                    std::vector<OptionSpec>{{"alpha", "fbm.alpha", "variance exponent in (0, 2]"},
                                            {"S", "fbm.S", "truncation horizon (default 64)"},
                                            {"n", "fbm.n", "replicates (default 20000)"},
                                            {"grid-n", "fbm.grid_n", "grid steps (default 16384)"},
                                            {"method", "fbm.method", "change-of-measure (default) or plain"}},
                    true, [](const Config& cfg, OutFormat f) {
                        const std::string m = cfg.get_string("fbm.method", "change-of-measure");
                        PickandsMethod method = PickandsMethod::ChangeOfMeasure;
                        if (m == "plain") {
                            method = PickandsMethod::Plain;
                        } else if (m != "change-of-measure") {
                            throw ConfigError("unknown method '" + m + "'");
                        }
                        const ConstantEstimate e = estimate_pickands(
                            cfg.get_double("fbm.alpha"), cfg.get_double("fbm.S", 64.0), cfg.get_uint("fbm.n", 20000),
                            cfg.get_uint("fbm.grid_n", 16384), cfg.get_uint("seed"), method,
                            static_cast<unsigned>(cfg.get_uint("workers", 0)));
                        Record rec;
                        rec.add("value", e.value);
                        rec.add("std_error", e.std_error);
                        rec.add("S", e.S);
                        rec.add_int("n", e.n);
                        rec.add_int("grid_n", e.grid_n);
                        rec.add_int("seed", e.seed);
                        rec.add("method", method_name(method));
                        return rec.render(f);
                    }});

    cmds.push_back({"sim", "piterbarg", "Monte-Carlo estimate of the Piterbarg constant",
                    std::vector<OptionSpec>{{"alpha", "fbm.alpha", "variance exponent in (0, 2]"},
                                            {"R", "fbm.R", "penalty excess R > 0"},
                                            {"S", "fbm.S", "half-width of the window (default 16)"},
                                            {"n", "fbm.n", "replicates (default 20000)"},
                                            {"grid-n", "fbm.grid_n", "grid steps over [-S, S] (default 4096)"}},
                    true, [](const Config& cfg, OutFormat f) {
                        const ConstantEstimate e = estimate_piterbarg(
                            cfg.get_double("fbm.alpha"), cfg.get_double("fbm.R"), cfg.get_double("fbm.S", 16.0),
                            cfg.get_uint("fbm.n", 20000), cfg.get_uint("fbm.grid_n", 4096), cfg.get_uint("seed"),
                            static_cast<unsigned>(cfg.get_uint("workers", 0)));
                        Record rec;
                        rec.add("value", e.value);
                        rec.add("std_error", e.std_error);
                        rec.add("S", e.S);
                        rec.add_int("n", e.n);
                        rec.add_int("grid_n", e.grid_n);
                        rec.add_int("seed", e.seed);
                        return rec.render(f);
                    }});

    cmds.push_back({"sim", "ruin", "finite-horizon ruin probability estimates",
                    kRisk + kSubordinator + kExperiment, true, [](const Config& cfg, OutFormat f) {
                        const ExperimentConfig e = experiment(cfg);
                        Table t({"u", "p_hat", "std_error", "ci_low", "ci_high", "log_p_hat", "successes", "n",
                                 "seed", "grid_n"});
                        const auto estimates = mc_ruin_curve(e);
                        for (std::size_t i = 0; i < estimates.size(); ++i) {
                            const MCEstimate& m = estimates[i];
                            t.add_row({e.u_list[i], m.p_hat, m.std_error, m.ci_low, m.ci_high, m.log_p_hat,
                                       static_cast<double>(m.successes), static_cast<double>(m.n),
                                       static_cast<double>(m.seed), static_cast<double>(m.grid_n)});
                        }
                        return t.render(f);
                    }});

    cmds.push_back({"validate", "ratio", "observed against predicted ruin probabilities",
                    kRisk + kSubordinator + kExperiment + kConstants +
                        std::vector<OptionSpec>{{"predictor", "predictor", "prop1 (default) or exact-bm"}},
                    true, [](const Config& cfg, OutFormat f) {
                        const ExperimentConfig e = experiment(cfg);
                        const std::string which = cfg.get_string("predictor", "prop1");
                        Predictor predicted;
                        if (which == "prop1") {
                            const TailModel tail = endpoint_tail_model(e.subordinator, e.T);
                            const double H = resolve_pickands(cfg, e.risk.alpha, true).value;
                            const RiskParams rp = e.risk;
                            predicted = [rp, tail, H](double u) { return prop1_asymptotic(rp, tail, u, H); };
                        } else if (which == "exact-bm") {
                            const EndpointDensity density = endpoint_density(e.subordinator, e.T);
                            const RiskParams rp = e.risk;
                            predicted = [rp, density](double u) { return std::exp(quadrature_ruin_bm(rp, density, u)); };
                        } else {
                            throw ConfigError("unknown predictor '" + which + "'");
                        }
                        const auto rows = run_ratio_experiment(e, predicted);
                        return render_report(rows, f == OutFormat::Json ? ReportFormat::Json : ReportFormat::Csv);
                    }});

    cmds.push_back({"validate", "logslope", "fitted log-probability slope against the predicted rate",
                    kRisk + kSubordinator + kExperiment +
                        std::vector<OptionSpec>{{"rate-model", "rate_model", "auto (default), prop2, prop34 or laplace"},
                                                {"p", "tail.p", "log-power tail exponent for prop2"},
                                                {"L", "tail.L", "log-power tail rate for prop2"}},
                    true, [](const Config& cfg, OutFormat f) {
                        const ExperimentConfig e = experiment(cfg);
                        std::string which = cfg.get_string("rate_model", "auto");
                        if (which == "auto") {
                            if (std::holds_alternative<GammaProcess>(e.subordinator)) {
                                which = "prop2";
                            } else if (std::holds_alternative<CompoundPoisson>(e.subordinator) ||
                                       std::holds_alternative<EndpointOnly>(e.subordinator)) {
                                which = "prop34";
                            } else {
                                throw ConfigError("no rate applies to a deterministic time change; pass --rate-model");
                            }
                        }
                        RegimeResult regime{};
                        if (which == "prop2") {
                            regime = prop2_lograte(e.risk, cfg.get_double("tail.p", 1.0), cfg.get_double("tail.L", 1.0));
                        } else if (which == "prop34") {
                            const TailModel tail = endpoint_tail_model(e.subordinator, e.T);
                            const auto* rv = std::get_if<RegularlyVarying>(&tail);
                            if (rv == nullptr) {
                                throw ConfigError("prop34 rate needs a regularly varying endpoint");
                            }
                            regime = prop34_lograte(e.risk, RegularlyVaryingDensity{rv->lambda});
                        } else if (which == "laplace") {
                            regime = laplace_motion_rates(e.risk.alpha, e.risk.c);
                        } else {
                            throw ConfigError("unknown rate '" + which + "'");
                        }
                        const SlopeReport r = run_logslope_experiment(e, regime);
                        return render_slope_report(r, f == OutFormat::Json ? ReportFormat::Json : ReportFormat::Csv);
                    }});
    return cmds;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaussian extremes over random intervals and ruin of time-changed fBm risk models", "gpx"};
    app.require_subcommand(1);
    const std::vector<Command> cmds = commands();

    std::map<std::string, CLI::App*> groups;
    struct Leaf {
        const Command* cmd;
        CLI::App* app;
        std::map<std::string, std::string> values;
        std::vector<std::pair<const OptionSpec*, CLI::Option*>> options;
        std::string config_path;
        std::string out_path;
        std::string format = "text";
        std::string seed;
        std::string workers;
    };
    std::vector<std::unique_ptr<Leaf>> leaves;
    for (const Command& cmd : cmds) {
        if (!groups.count(cmd.group)) {
            groups[cmd.group] = app.add_subcommand(cmd.group)->require_subcommand(1);
        }
        auto leaf = std::make_unique<Leaf>();
        leaf->cmd = &cmd;
        leaf->app = groups[cmd.group]->add_subcommand(cmd.name, cmd.description);
        for (const OptionSpec& o : cmd.options) {
            CLI::Option* opt = leaf->app->add_option("--" + o.flag, leaf->values[o.key], o.help);
            leaf->options.push_back({&o, opt});
        }
        leaf->app->add_option("--config", leaf->config_path, "key=value configuration file");
        leaf->app->add_option("--out", leaf->out_path, "write the report to this path");
        leaf->app->add_option("--format", leaf->format, "text, csv or json");
        if (cmd.stochastic) {
            leaf->app->add_option("--seed", leaf->seed, "random seed (required)");
            leaf->app->add_option("--workers", leaf->workers, "worker threads (0 = all cores)");
        }
        leaves.push_back(std::move(leaf));
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        for (const auto& leaf : leaves) {
            if (leaf->app->parsed()) {
                err << leaf->app->help();
                return kExitConfig;
            }
        }
        err << app.help();
        return kExitConfig;
    }

    const Leaf* chosen = nullptr;
    for (const auto& leaf : leaves) {
        if (leaf->app->parsed()) {
            chosen = leaf.get();
        }
    }
    if (chosen == nullptr) {
        err << app.help();
        return kExitConfig;
    }

    try {
        Config cfg = chosen->config_path.empty() ? Config{} : Config::load(chosen->config_path);
        for (const auto& [spec, opt] : chosen->options) {
            if (opt->count() > 0) {
                cfg.set(spec->key, chosen->values.at(spec->key));
            }
        }
        if (!chosen->seed.empty()) {
            cfg.set("seed", chosen->seed);
        }
        if (!chosen->workers.empty()) {
            cfg.set("workers", chosen->workers);
        }
        if (chosen->cmd->stochastic && !cfg.has("seed")) {
            throw ConfigError("--seed is required for stochastic commands");
        }
        const OutFormat format = parse_out_format(chosen->format);
        const std::string report = chosen->cmd->run(cfg, format);
        if (chosen->out_path.empty()) {
            out << report;
        } else {
            std::ofstream file(chosen->out_path, std::ios::binary);
            if (!file) {
                throw ConfigError("cannot open output file '" + chosen->out_path + "'");
            }
            file << report;
        }
        return kExitOk;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace gpx
