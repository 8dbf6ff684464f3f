// Copyright 2026 The qsld Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsld_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "qsld/autoparallel.hpp"
#include "qsld/catalog.hpp"
#include "qsld/error.hpp"
#include "qsld/estimation.hpp"
#include "qsld/io.hpp"
#include "qsld/qubit.hpp"
#include "qsld/random.hpp"
#include "qsld/version.hpp"

namespace qsld::cli {

namespace {

[[noreturn]] void bad_input(const std::string &what) {
    throw Error(ErrorKind::InvalidArgument, what);
}

std::string command_help(Command c) {
    switch (c) {
    case Command::Geodesic:
        return "trace a qubit e-geodesic as a semi-ellipse in the Bloch ball";
    case Command::Surface:
        return "sample a two-dimensional e-autoparallel qubit surface";
    case Command::CheckAutoparallel:
        return "test whether a model is e-autoparallel in m-affine coordinates";
    case Command::Involutivity:
        return "check closure of an operator subspace under [[A,B],rho]";
    case Command::FiltrationSweep:
        return "variance of the filtration estimator against eps";
    case Command::Counterexample:
        return "non-involutivity residual of the real subspace for d >= 3";
    case Command::ScalarEstimate:
        return "efficient estimator of a scalar function at a point";
    case Command::IidExtend:
        return "geometry of the n-copy extension of a model";
    }
    return {};
}

const std::vector<std::pair<Command, std::string>> &command_names() {
    static const std::vector<std::pair<Command, std::string>> names = {
        {Command::Geodesic, "geodesic"},
        {Command::Surface, "surface"},
        {Command::CheckAutoparallel, "check-autoparallel"},
        {Command::Involutivity, "involutivity"},
        {Command::FiltrationSweep, "filtration-sweep"},
        {Command::Counterexample, "counterexample"},
        {Command::ScalarEstimate, "scalar-estimate"},
        {Command::IidExtend, "iid-extend"},
    };
    return names;
}

struct Flag {
    std::string name;
    std::string help;
    std::vector<Command> commands; ///< empty: every command
};

const std::vector<Flag> &flags() {
    using C = Command;
    static const std::vector<Flag> table = {
        {"model", "catalog model, e.g. bloch-ellipsoid(c=0.3)",
         {C::CheckAutoparallel, C::FiltrationSweep, C::ScalarEstimate, C::IidExtend}},
        {"tol", "decision tolerance (> 0)", {}},
        {"grid", "grid points per coordinate axis",
         {C::Surface, C::CheckAutoparallel, C::FiltrationSweep, C::IidExtend}},
        {"eps-list", "comma-separated, strictly decreasing eps schedule", {C::FiltrationSweep}},
        {"seed", "RNG seed (required for stochastic commands)", {}},
        {"out", "report path (stdout when omitted)", {}},
        {"format", "csv or json", {}},
        {"fd-step", "use finite differences with this relative step",
         {C::CheckAutoparallel, C::FiltrationSweep, C::ScalarEstimate, C::IidExtend}},
        {"r0", "start Bloch vector x,y,z", {C::Geodesic}},
        {"u", "direction x,y,z of F = u.sigma", {C::Geodesic}},
        {"samples", "number of xi samples", {C::Geodesic}},
        {"c", "surface offset along v, |c| < 1", {C::Surface}},
        {"xi", "comma-separated coordinates of the evaluation point",
         {C::FiltrationSweep, C::ScalarEstimate, C::IidExtend}},
        {"grad", "gradient of f at xi", {C::ScalarEstimate}},
        {"f-value", "value of f at xi", {C::ScalarEstimate}},
        {"eps", "off-diagonal strength", {C::Counterexample}},
        {"dim", "Hilbert-space dimension", {C::Counterexample, C::Involutivity}},
        {"copies", "number of i.i.d. copies N", {C::IidExtend}},
        {"shots", "Monte-Carlo shots per (u, eps); 0 disables sampling", {C::FiltrationSweep}},
        {"states", "number of random states", {C::Involutivity}},
        {"basis", "computational or random", {C::Involutivity}},
    };
    return table;
}

bool flag_applies(const Flag &f, Command c) {
    return f.commands.empty() || std::find(f.commands.begin(), f.commands.end(), c) != f.commands.end();
}

double parse_double(const std::string &key, const std::string &text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != text.size() || text.empty() || !std::isfinite(v)) {
        bad_input("--" + key + ": not a number: '" + text + "'");
    }
    return v;
}

std::uint64_t parse_uint(const std::string &key, const std::string &text) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        bad_input("--" + key + ": not a non-negative integer: '" + text + "'");
    }
    try {
        return std::stoull(text);
    } catch (const std::exception &) {
        bad_input("--" + key + ": integer out of range");
    }
}

std::vector<double> parse_list(const std::string &key, const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        out.push_back(parse_double(key, b == std::string::npos ? "" : item.substr(b, e - b + 1)));
    }
    if (out.empty()) {
        bad_input("--" + key + ": empty list");
    }
    return out;
}

double default_tol(Command c) {
    switch (c) {
    case Command::Geodesic:
        return 1e-9;
    case Command::Surface:
        return 1e-10;
    case Command::Involutivity:
        return 1e-10;
    case Command::ScalarEstimate:
        return 1e-9;
    default:
        return 1e-8;
    }
}

Json list_json(const std::vector<double> &v) {
    Json j = Json::array();
    for (double x : v) {
        j.push_back(x);
    }
    return j;
}

RVector to_rvector(const std::vector<double> &v) {
    return Eigen::Map<const RVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

qubit::Vec3 to_vec3(const std::string &key, const std::vector<double> &v, qubit::Vec3 fallback) {
    if (v.empty()) {
        return fallback;
    }
    if (v.size() != 3) {
        bad_input("--" + key + " needs three components");
    }
    return {v[0], v[1], v[2]};
}

} // namespace

std::string to_string(Command c) {
    for (const auto &[cmd, name] : command_names()) {
        if (cmd == c) {
            return name;
        }
    }
    return "unknown";
}

std::optional<Command> command_from_string(const std::string &name) {
    for (const auto &[cmd, n] : command_names()) {
        if (n == name) {
            return cmd;
        }
    }
    return std::nullopt;
}

RunConfig RunConfig::from_values(Command command, const std::map<std::string, std::string> &values) {
    RunConfig cfg;
    cfg.command = command;
    for (const auto &[key, text] : values) {
        const auto it = std::find_if(flags().begin(), flags().end(),
                                     [&](const Flag &f) { return f.name == key; });
        if (it == flags().end() || !flag_applies(*it, command)) {
            bad_input("option '" + key + "' does not apply to " + to_string(command));
        }
        if (key == "model") {
            cfg.model = text;
        } else if (key == "tol") {
            cfg.tol = parse_double(key, text);
            if (!(cfg.tol > 0.0)) {
                bad_input("--tol must be positive");
            }
        } else if (key == "grid") {
            cfg.grid = parse_uint(key, text);
        } else if (key == "eps-list") {
            cfg.eps_list = parse_list(key, text);
        } else if (key == "seed") {
            cfg.seed = parse_uint(key, text);
        } else if (key == "out") {
            cfg.out = text;
        } else if (key == "format") {
            if (text == "csv") {
                cfg.format = Format::Csv;
            } else if (text == "json") {
                cfg.format = Format::Json;
            } else {
                bad_input("--format must be csv or json");
            }
        } else if (key == "fd-step") {
            cfg.fd_step = parse_double(key, text);
            if (!(*cfg.fd_step > 0.0)) {
                bad_input("--fd-step must be positive");
            }
        } else if (key == "r0") {
            cfg.r0 = parse_list(key, text);
        } else if (key == "u") {
            cfg.u = parse_list(key, text);
        } else if (key == "samples") {
            cfg.samples = parse_uint(key, text);
        } else if (key == "c") {
            cfg.c = parse_double(key, text);
        } else if (key == "xi") {
            cfg.xi = parse_list(key, text);
        } else if (key == "grad") {
            cfg.grad = parse_list(key, text);
        } else if (key == "f-value") {
            cfg.f_value = parse_double(key, text);
        } else if (key == "eps") {
            cfg.eps = parse_double(key, text);
        } else if (key == "dim") {
            cfg.dim = parse_uint(key, text);
        } else if (key == "copies") {
            cfg.copies = static_cast<int>(std::min<std::uint64_t>(parse_uint(key, text), 64));
        } else if (key == "shots") {
            cfg.shots = parse_uint(key, text);
        } else if (key == "states") {
            cfg.states = parse_uint(key, text);
        } else if (key == "basis") {
            cfg.basis = text;
        }
    }
    if (cfg.stochastic() && !cfg.seed) {
        bad_input(to_string(command) + " is stochastic: --seed is required");
    }
    return cfg;
}

double RunConfig::resolved_tol() const { return tol > 0.0 ? tol : default_tol(command); }

Format RunConfig::resolved_format() const {
    if (format) {
        return *format;
    }
    switch (command) {
    case Command::Geodesic:
    case Command::Surface:
    case Command::FiltrationSweep:
        return Format::Csv;
    default:
        return Format::Json;
    }
}

bool RunConfig::stochastic() const {
    return command == Command::Involutivity ||
           (command == Command::FiltrationSweep && shots > 0);
}

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct Outcome {
    bool pass = true;
    Json results = Json::object();
    Json tolerances = Json::object();
    std::optional<Table> table;
};

Json config_json(const RunConfig &cfg) {
    Json j{{"command", to_string(cfg.command)}, {"tol", cfg.resolved_tol()},
           {"format", cfg.resolved_format() == Format::Csv ? "csv" : "json"}};
    if (!cfg.model.empty()) {
        j["model"] = cfg.model;
    }
    if (cfg.seed) {
        j["seed"] = *cfg.seed;
    }
    if (cfg.fd_step) {
        j["fd_step"] = *cfg.fd_step;
    }
    switch (cfg.command) {
    case Command::Geodesic:
        j["r0"] = list_json(cfg.r0.empty() ? std::vector<double>{0, 0, 0} : cfg.r0);
        j["u"] = list_json(cfg.u.empty() ? std::vector<double>{0, 0, 1} : cfg.u);
        j["samples"] = cfg.samples;
        break;
    case Command::Surface:
        j["c"] = cfg.c;
        j["grid"] = cfg.grid;
        break;
    case Command::Involutivity:
        j["dim"] = cfg.dim;
        j["states"] = cfg.states;
        j["basis"] = cfg.basis;
        break;
    case Command::Counterexample:
        j["eps"] = cfg.eps;
        j["dim"] = cfg.dim;
        break;
    case Command::FiltrationSweep:
        j["shots"] = cfg.shots;
        j["eps_list"] = list_json(cfg.eps_list);
        [[fallthrough]];
    default:
        j["grid"] = cfg.grid;
        j["xi"] = list_json(cfg.xi);
        j["grad"] = list_json(cfg.grad);
        j["f_value"] = cfg.f_value;
        j["copies"] = cfg.copies;
        break;
    }
    return j;
}

ParametricModel resolve_model(const RunConfig &cfg, const std::string &fallback) {
    ParametricModel m = make_model(cfg.model.empty() ? fallback : cfg.model);
    if (cfg.fd_step) {
        m = m.finite_difference_only().with_fd_step(*cfg.fd_step);
    }
    return m;
}

RVector resolve_xi(const RunConfig &cfg, const ParametricModel &m, double position) {
    if (!cfg.xi.empty()) {
        if (cfg.xi.size() != m.n()) {
            bad_input("--xi needs " + std::to_string(m.n()) + " coordinates");
        }
        return to_rvector(cfg.xi);
    }
    RVector xi(static_cast<Eigen::Index>(m.n()));
    for (std::size_t i = 0; i < m.n(); ++i) {
        const Interval iv = m.domain()[i];
        xi[static_cast<Eigen::Index>(i)] = iv.lo + position * (iv.hi - iv.lo);
    }
    return xi;
}

std::size_t default_grid(std::size_t n) { return n <= 2 ? 15 : (n == 3 ? 5 : 2); }

Json operators_json(const std::vector<HermitianOperator> &ops) {
    Json j = Json::array();
    for (const auto &op : ops) {
        j.push_back(operator_to_json(op));
    }
    return j;
}

Json verdict_json(const AutoparallelVerdict &v) {
    Json j{{"verdict", v.verdict},
           {"max_residual", v.certificate.max_residual},
           {"max_pairwise", v.max_pairwise},
           {"tol", v.tol},
           {"grid_points", v.certificate.grid.size()},
           {"certificate", operators_json(v.certificate.observables)},
           {"witness", nullptr}};
    if (v.witness) {
        j["witness"] = Json{{"component", v.witness->component},
                            {"xi_a", vector_to_json(v.witness->xi_a)},
                            {"xi_b", vector_to_json(v.witness->xi_b)},
                            {"distance", v.witness->distance}};
    }
    return j;
}

Outcome run_geodesic(const RunConfig &cfg) {
    const double tol = cfg.resolved_tol();
    const qubit::Vec3 r0 = to_vec3("r0", cfg.r0, qubit::Vec3::Zero());
    qubit::Vec3 u = to_vec3("u", cfg.u, qubit::Vec3::UnitZ());
    if (u.norm() < 1e-12) {
        bad_input("--u must be nonzero");
    }
    u.normalize();
    if (cfg.samples < 2) {
        bad_input("--samples must be at least 2");
    }
    const qubit::BlochVector start(r0);
    const auto params = qubit::GeodesicParams::from_start(start, u);
    const DensityOperator rho0 = qubit::bloch_to_density(start);
    const HermitianOperator f = qubit::dot_sigma(u);

    Outcome o;
    o.table = Table{{"xi", "theta", "r1", "r2", "r3"}, {}};
    double worst = 0.0;
    for (std::size_t k = 0; k < cfg.samples; ++k) {
        const double xi = -0.99 + 1.98 * static_cast<double>(k) / static_cast<double>(cfg.samples - 1);
        const double theta = qubit::xi_to_theta(params.a, xi);
        const qubit::Vec3 r = qubit::qubit_geodesic_point(params, xi).r();
        const qubit::Vec3 exact = qubit::density_to_bloch(e_geodesic(rho0, f, theta)).r();
        worst = std::max(worst, (r - exact).norm());
        o.table->rows.push_back({xi, theta, r[0], r[1], r[2]});
    }
    o.pass = worst <= tol;
    o.results = Json{{"a", params.a}, {"b", params.b}, {"c", params.c},
                     {"u", vector_to_json(params.u)}, {"v", vector_to_json(params.v)},
                     {"max_deviation_from_matrix_exponential", worst}};
    o.tolerances = Json{{"max_deviation_from_matrix_exponential", tol}};
    return o;
}

Outcome run_surface(const RunConfig &cfg) {
    const double tol = cfg.resolved_tol();
    const std::size_t grid = cfg.grid ? cfg.grid : 21;
    if (grid < 2) {
        bad_input("--grid must be at least 2");
    }
    const qubit::Vec3 u1 = qubit::Vec3::UnitX();
    const qubit::Vec3 u2 = qubit::Vec3::UnitY();
    const qubit::Vec3 v = qubit::Vec3::UnitZ();
    Outcome o;
    o.table = Table{{"xi1", "xi2", "r1", "r2", "r3"}, {}};
    double worst = 0.0;
    for (std::size_t a = 0; a < grid; ++a) {
        for (std::size_t b = 0; b < grid; ++b) {
            const Eigen::Vector2d xi(-0.95 + 1.9 * static_cast<double>(a) / static_cast<double>(grid - 1),
                                     -0.95 + 1.9 * static_cast<double>(b) / static_cast<double>(grid - 1));
            if (xi.norm() >= 0.99) {
                continue;
            }
            const qubit::BlochVector r = qubit::qubit_autoparallel_surface_point(u1, u2, v, cfg.c, xi);
            const DensityOperator rho = qubit::bloch_to_density(r);
            worst = std::max({worst, std::abs(expectation(rho, qubit::dot_sigma(u1)) - xi[0]),
                              std::abs(expectation(rho, qubit::dot_sigma(u2)) - xi[1])});
            o.table->rows.push_back({xi[0], xi[1], r.r()[0], r.r()[1], r.r()[2]});
        }
    }
    o.pass = worst <= tol;
    o.results = Json{{"points", o.table->rows.size()}, {"max_expectation_deviation", worst}};
    o.tolerances = Json{{"max_expectation_deviation", tol}};
    return o;
}

Outcome run_check_autoparallel(const RunConfig &cfg) {
    const double tol = cfg.resolved_tol();
    const ParametricModel m = resolve_model(cfg, "bloch-ellipsoid(c=0.3)");
    const auto grid = domain_grid(m, cfg.grid ? cfg.grid : default_grid(m.n()));
    const AutoparallelVerdict v = check_e_autoparallel_m_affine(m, grid, tol);
    Outcome o;
    o.pass = v.verdict;
    o.results = verdict_json(v);
    o.results["model"] = m.name();
    o.tolerances = Json{{"max_pairwise", tol}};
    return o;
}

Outcome run_involutivity(const RunConfig &cfg) {
    const double tol = cfg.resolved_tol();
    if (cfg.dim < 2 || cfg.dim > 16) {
        bad_input("--dim must lie in [2, 16]");
    }
    CMatrix basis = CMatrix::Identity(static_cast<Eigen::Index>(cfg.dim),
                                      static_cast<Eigen::Index>(cfg.dim));
    if (cfg.basis == "random") {
        CounterRng rng(*cfg.seed, 1);
        basis = random_unitary(cfg.dim, rng);
    } else if (cfg.basis != "computational") {
        bad_input("--basis must be computational or random");
    }
    const auto states = default_state_sample(cfg.dim, cfg.states, *cfg.seed);
    const InvolutivityResult r = involutivity_check(real_subspace(basis), states, tol);
    Outcome o;
    o.pass = r.involutive;
    o.results = Json{{"involutive", r.involutive},
                     {"worst_relative_residual", r.worst_residual},
                     {"states_checked", r.states_checked},
                     {"witness", nullptr}};
    if (r.witness) {
        o.results["witness"] = Json{{"state_index", r.witness->state_index},
                                    {"a", r.witness->a},
                                    {"b", r.witness->b},
                                    {"residual", r.witness->residual}};
    }
    o.tolerances = Json{{"worst_relative_residual", tol}};
    return o;
}

Outcome run_counterexample(const RunConfig &cfg, std::ostream &err) {
    const double tol = cfg.resolved_tol();
    const Counterexample ce = counterexample_dim_ge3(cfg.eps, cfg.dim);
    Json scan = Json::array();
    for (double e = cfg.eps; e > cfg.eps / 100.0; e /= 2.0) {
        scan.push_back(Json{{"eps", e}, {"residual", counterexample_dim_ge3(e, cfg.dim).residual}});
    }
    scan.push_back(Json{{"eps", 0.0}, {"residual", counterexample_dim_ge3(0.0, cfg.dim).residual}});
    err << "counterexample residual = " << format_double(ce.residual) << " (eps " << cfg.eps
        << ", d " << cfg.dim << ")\n";
    Outcome o;
    o.pass = ce.residual <= tol;
    o.results = Json{{"involutive", o.pass},
                     {"residual", ce.residual},
                     {"A", operator_to_json(ce.a)},
                     {"B", operator_to_json(ce.b)},
                     {"rho", operator_to_json(ce.rho.op())},
                     {"eps_scan", scan}};
    o.tolerances = Json{{"residual", tol}};
    return o;
}

Outcome run_filtration(const RunConfig &cfg) {
    const double tol = cfg.resolved_tol();
    const ParametricModel m = resolve_model(cfg, "bloch-ellipsoid(c=0.3)");
    const auto grid = domain_grid(m, cfg.grid ? cfg.grid : 5);
    const AutoparallelVerdict v = check_e_autoparallel_m_affine(m, grid, tol);
    Outcome o;
    o.table = Table{{"eps", "u_index", "uTVu_analytic", "uTVu_mc", "stderr", "cr_bound"}, {}};
    o.tolerances = Json{{"certificate_max_pairwise", tol},
                        {"analytic_vs_closed_form_relative", tol},
                        {"monte_carlo_standard_errors", 4.0}};
    if (!v.verdict) {
        o.pass = false;
        o.results = Json{{"certificate", verdict_json(v)}};
        return o;
    }
    const std::vector<double> eps_list =
        cfg.eps_list.empty() ? FiltrationSpec{}.eps_schedule : cfg.eps_list;
    const RVector xi = resolve_xi(cfg, m, 0.6);
    const PointGeometry geo = evaluate(m, xi);
    const std::size_t n = m.n();

    FiltrationSpec probe;
    probe.f_ops = v.certificate.observables;
    probe.eps_schedule = eps_list;
    probe.u_basis = RMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    probe.validate();

    const CounterRng root(cfg.seed.value_or(0));
    Json rows = Json::array();
    double worst_rel = 0.0;
    double worst_z = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        RMatrix u_basis = RMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        u_basis(0, static_cast<Eigen::Index>(k)) = 1.0;
        for (std::size_t r = 1, col = 0; r < n; ++r, ++col) {
            col += (col == k) ? 1 : 0;
            u_basis(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = 1.0;
        }
        const RVector u = u_basis.row(0).transpose();
        const double bound = u.dot(geo.fisher.inverse() * u);
        for (std::size_t e = 0; e < eps_list.size(); ++e) {
            const double eps = eps_list[e];
            const DiscreteEstimator pi = filtration_estimator(u_basis, v.certificate.observables, eps);
            const Moments mom = estimator_moments(*geo.state, pi, xi);
            const double analytic = u.dot(mom.mse * u);
            const double closed = filtration_variance(geo.fisher, xi, u, eps);
            const double rel = std::abs(analytic - closed) / std::max(1.0, std::abs(closed));
            worst_rel = std::max(worst_rel, rel);
            double mc = std::numeric_limits<double>::quiet_NaN();
            double se = std::numeric_limits<double>::quiet_NaN();
            if (cfg.shots > 0) {
                const std::uint64_t sub = root.substream(k * eps_list.size() + e).next_u64();
                const MonteCarloMoments sample = monte_carlo_moments(*geo.state, pi, cfg.shots, sub, xi);
                const ScalarEstimate q = quadratic_form_estimate(pi, sample.counts, xi, u);
                mc = q.value;
                se = q.std_error;
                const double z = se > 0.0 ? std::abs(mc - analytic) / se
                                          : (std::abs(mc - analytic) <= tol ? 0.0 : INFINITY);
                worst_z = std::max(worst_z, z);
            }
            o.table->rows.push_back({eps, static_cast<double>(k), analytic, mc, se, bound});
            rows.push_back(Json{{"eps", eps}, {"u_index", k}, {"uTVu_analytic", analytic},
                                {"uTVu_closed_form", closed}, {"uTVu_mc", cfg.shots ? Json(mc) : Json()},
                                {"stderr", cfg.shots ? Json(se) : Json()}, {"cr_bound", bound}});
        }
    }
    o.pass = worst_rel <= tol && worst_z <= 4.0;
    o.results = Json{{"xi", vector_to_json(xi)},
                     {"fisher", matrix_to_json(geo.fisher.matrix())},
                     {"certificate", verdict_json(v)},
                     {"rows", rows},
                     {"worst_relative_closed_form_deviation", worst_rel},
                     {"worst_monte_carlo_z", worst_z}};
    return o;
}

Outcome run_scalar_estimate(const RunConfig &cfg) {
    const double tol = cfg.resolved_tol();
    const ParametricModel m = resolve_model(cfg, "bloch-full");
    const RVector xi = resolve_xi(cfg, m, 0.5);
    if (cfg.grad.size() != m.n()) {
        bad_input("--grad needs " + std::to_string(m.n()) + " components");
    }
    const RVector grad = to_rvector(cfg.grad);
    const HermitianOperator f = scalar_efficient_estimator(m, xi, cfg.f_value, grad);
    const DensityOperator rho = m.state(xi);
    const double var = variance(rho, f);
    const double bound = scalar_cr_bound(m, xi, grad);
    const double mean_dev = std::abs(expectation(rho, f) - cfg.f_value);
    Outcome o;
    o.pass = std::abs(var - bound) <= tol * std::max(1.0, bound) && mean_dev <= tol;
    o.results = Json{{"estimator", operator_to_json(f)},
                     {"variance", var},
                     {"cramer_rao_bound", bound},
                     {"mean_deviation", mean_dev}};
    o.tolerances = Json{{"variance_vs_bound_relative", tol}, {"mean_deviation", tol}};
    return o;
}

Outcome run_iid_extend(const RunConfig &cfg) {
    const double tol = cfg.resolved_tol();
    const ParametricModel m = resolve_model(cfg, "bloch-ellipsoid(c=0.3)");
    if (cfg.copies < 1) {
        bad_input("--copies must be at least 1");
    }
    const ParametricModel ext = iid_extension(m, cfg.copies);
    const RVector xi = resolve_xi(cfg, m, 0.6);
    const PointGeometry base = evaluate(m, xi);
    const PointGeometry lifted = evaluate(ext, xi);
    const double fisher_res =
        (lifted.fisher.matrix() - cfg.copies * base.fisher.matrix()).cwiseAbs().maxCoeff();
    double sld_res = 0.0;
    for (std::size_t i = 0; i < m.n(); ++i) {
        sld_res = std::max(sld_res, hs_distance(lifted.tangents[i].sld(),
                                                tensor_power_operator(base.tangents[i].sld(), cfg.copies)));
    }
    const auto grid = domain_grid(m, cfg.grid ? cfg.grid : 3);
    const AutoparallelVerdict vb = check_e_autoparallel_m_affine(m, grid, tol);
    const AutoparallelVerdict ve = check_e_autoparallel_m_affine(ext, grid, tol);
    Outcome o;
    o.pass = fisher_res <= tol && sld_res <= tol && vb.verdict == ve.verdict;
    o.results = Json{{"copies", cfg.copies},
                     {"hilbert_dim", ext.hilbert_dim()},
                     {"fisher_residual", fisher_res},
                     {"sld_residual", sld_res},
                     {"base_autoparallel", vb.verdict},
                     {"extended_autoparallel", ve.verdict},
                     {"base_max_pairwise", vb.max_pairwise},
                     {"extended_max_pairwise", ve.max_pairwise}};
    o.tolerances = Json{{"fisher_residual", tol}, {"sld_residual", tol}, {"max_pairwise", tol}};
    return o;
}

void write_csv(std::ostream &os, const Table &t) {
    CsvWriter w(os, t.header);
    for (const auto &r : t.rows) {
        w.row(r);
    }
}

} // namespace

int run(const RunConfig &config, std::ostream &out, std::ostream &err) {
    Outcome o;
    try {
        switch (config.command) {
        case Command::Geodesic:
            o = run_geodesic(config);
            break;
        case Command::Surface:
            o = run_surface(config);
            break;
        case Command::CheckAutoparallel:
            o = run_check_autoparallel(config);
            break;
        case Command::Involutivity:
            o = run_involutivity(config);
            break;
        case Command::FiltrationSweep:
            o = run_filtration(config);
            break;
        case Command::Counterexample:
            o = run_counterexample(config, err);
            break;
        case Command::ScalarEstimate:
            o = run_scalar_estimate(config);
            break;
        case Command::IidExtend:
            o = run_iid_extend(config);
            break;
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const nlohmann::json::exception &e) {
        err << "error: malformed JSON: " << e.what() << '\n';
        return kExitInputError;
    }

    const Json body{{"command", to_string(config.command)},
                    {"config", config_json(config)},
                    {"verdict", o.pass},
                    {"results", o.results},
                    {"tolerances", o.tolerances}};
    const Format fmt = config.resolved_format();
    if (fmt == Format::Csv && !o.table) {
        err << "error: " << to_string(config.command) << " has no tabular output; use --format json\n";
        return kExitInputError;
    }

    std::ofstream file;
    if (!config.out.empty()) {
        file.open(config.out);
        if (!file) {
            err << "error: cannot write " << config.out << '\n';
            return kExitInputError;
        }
    }
    std::ostream &sink = config.out.empty() ? out : file;
    if (fmt == Format::Csv) {
        write_csv(sink, *o.table);
        if (!config.out.empty()) {
            std::ofstream meta(config.out + ".meta.json");
            meta << make_report(body).dump(2) << '\n';
        }
    } else {
        sink << make_report(body).dump(2) << '\n';
    }
    err << to_string(config.command) << ": " << (o.pass ? "pass" : "verdict false") << '\n';
    return o.pass ? kExitPass : kExitVerdictFalse;
}

namespace {

std::string json_scalar_text(const Json &v) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number_integer() || v.is_number_unsigned()) {
        return v.dump();
    }
    if (v.is_number()) {
        return format_double(v.get<double>());
    }
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += (i ? "," : "") + json_scalar_text(v[i]);
        }
        return s;
    }
    bad_input("unsupported config value " + v.dump());
}

} // namespace

int main_entry(int argc, char **argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"qsld: SLD information geometry and quantum estimation toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    struct Sub {
        Command command;
        CLI::App *app;
        std::map<std::string, std::string> raw;
        std::map<std::string, CLI::Option *> options;
        std::string config;
    };
    std::vector<Sub> subs;
    subs.reserve(command_names().size());
    for (const auto &[cmd, name] : command_names()) {
        subs.push_back(Sub{cmd, app.add_subcommand(name, command_help(cmd)), {}, {}, {}});
    }
    for (auto &s : subs) {
        for (const auto &f : flags()) {
            if (flag_applies(f, s.command)) {
                s.options[f.name] = s.app->add_option("--" + f.name, s.raw[f.name], f.help);
            }
        }
        s.app->add_option("--config", s.config, "JSON file of option values; flags take precedence");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitInputError;
    }

    for (auto &s : subs) {
        if (!s.app->parsed()) {
            continue;
        }
        try {
            std::map<std::string, std::string> values;
            if (!s.config.empty()) {
                const Json j = load_json_file(s.config);
                if (!j.is_object()) {
                    bad_input("config file must hold a JSON object");
                }
                for (const auto &[k, v] : j.items()) {
                    values[k] = json_scalar_text(v);
                }
            }
            for (const auto &[name, opt] : s.options) {
                if (opt->count() > 0) {
                    values[name] = s.raw[name];
                }
            }
            return run(RunConfig::from_values(s.command, values), out, err);
        } catch (const Error &e) {
            err << "error: " << e.what() << '\n';
            return kExitInputError;
        }
    }
    return kExitInputError;
}

} // namespace qsld::cli
