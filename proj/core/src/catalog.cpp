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

#include "qsld/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "qsld/autoparallel.hpp"
#include "qsld/error.hpp"
#include "qsld/io.hpp"
#include "qsld/qubit.hpp"

namespace qsld {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_spec(const std::string &what) {
    throw Error(ErrorKind::InvalidArgument, "model spec: " + what);
}

} // namespace

ModelSpec ModelSpec::parse(const std::string &text) {
    ModelSpec spec;
    const std::string t = trim(text);
    const auto open = t.find('(');
    if (open == std::string::npos) {
        spec.id_ = t;
    } else {
        if (t.back() != ')') {
            bad_spec("missing ')' in '" + text + "'");
        }
        spec.id_ = trim(t.substr(0, open));
        std::stringstream body(t.substr(open + 1, t.size() - open - 2));
        std::string item;
        while (std::getline(body, item, ',')) {
            item = trim(item);
            if (item.empty()) {
                continue;
            }
            const auto eq = item.find('=');
            if (eq == std::string::npos) {
                bad_spec("expected key=value, got '" + item + "'");
            }
            const std::string key = trim(item.substr(0, eq));
            if (key.empty() || !spec.params_.emplace(key, trim(item.substr(eq + 1))).second) {
                bad_spec("empty or repeated key '" + key + "'");
            }
        }
    }
    if (spec.id_.empty()) {
        bad_spec("empty model id");
    }
    return spec;
}

double ModelSpec::number(const std::string &key, double fallback) const {
    const auto it = params_.find(key);
    if (it == params_.end()) {
        return fallback;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(it->second, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != it->second.size() || !std::isfinite(v)) {
        bad_spec("'" + key + "' is not a number: " + it->second);
    }
    return v;
}

int ModelSpec::integer(const std::string &key, int fallback) const {
    const double v = number(key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e6) {
        bad_spec("'" + key + "' must be an integer");
    }
    return static_cast<int>(v);
}

std::string ModelSpec::text(const std::string &key, const std::string &fallback) const {
    const auto it = params_.find(key);
    return it == params_.end() ? fallback : it->second;
}

void ModelSpec::require_keys(const std::vector<std::string> &allowed) const {
    for (const auto &[k, v] : params_) {
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
            bad_spec("unknown parameter '" + k + "' for model " + id_);
        }
    }
}

std::string ModelSpec::str() const {
    if (params_.empty()) {
        return id_;
    }
    std::string out = id_ + "(";
    bool first = true;
    for (const auto &[k, v] : params_) {
        out += (first ? "" : ",") + k + "=" + v;
        first = false;
    }
    return out + ")";
}

const std::vector<CatalogEntry> &catalog_entries() {
    static const std::vector<CatalogEntry> entries = {
        {"bloch-full", "", "full qubit manifold in Bloch coordinates, domain (-0.55, 0.55)^3"},
        {"full", "d=2", "full state space around I/d in Gell-Mann coordinates"},
        {"bloch-ellipsoid", "c=0.3",
         "semi-ellipsoid surface xi1 e_x + xi2 e_y + c sqrt(1-|xi|^2) e_z"},
        {"bloch-geodesic", "a=0,c=0.4,coords=xi|theta",
         "e-geodesic semi-ellipse through a e_z + c sqrt(1-a^2) e_x along sigma_z"},
        {"quasi-exp", "d=3,n=2[,config=path.json]",
         "quasi-classical exponential family with diagonal F^i = |i><i|"},
        {"latitude-band", "R=0.8",
         "sphere patch of radius R in (phi, z); not e-autoparallel"},
    };
    return entries;
}

std::vector<HermitianOperator> gell_mann(std::size_t dim) {
    if (dim < 2) {
        throw Error(ErrorKind::InvalidArgument, "Gell-Mann basis needs d >= 2");
    }
    const auto d = static_cast<Eigen::Index>(dim);
    std::vector<HermitianOperator> out;
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = j + 1; k < d; ++k) {
            CMatrix s = CMatrix::Zero(d, d);
            s(j, k) = 1.0;
            s(k, j) = 1.0;
            out.emplace_back(s);
            CMatrix a = CMatrix::Zero(d, d);
            a(j, k) = Complex(0.0, -1.0);
            a(k, j) = Complex(0.0, 1.0);
            out.emplace_back(a);
        }
    }
    for (Eigen::Index l = 1; l < d; ++l) {
        RVector diag = RVector::Zero(d);
        diag.head(l).setOnes();
        diag[l] = -static_cast<double>(l);
        diag *= std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
        out.push_back(HermitianOperator::diagonal(diag));
    }
    return out;
}

namespace {

using qubit::Vec3;

ParametricModel bloch_full(const ModelSpec &spec) {
    spec.require_keys({});
    auto state = [](const RVector &xi) {
        return qubit::bloch_to_density(qubit::BlochVector(Vec3(xi[0], xi[1], xi[2])));
    };
    auto partials = [](const RVector &) {
        return std::vector<HermitianOperator>{pauli(0) * 0.5, pauli(1) * 0.5, pauli(2) * 0.5};
    };
    return {2, std::vector<Interval>(3, {-0.55, 0.55}), state, partials, spec.str()};
}

ParametricModel full_space(const ModelSpec &spec) {
    spec.require_keys({"d"});
    const int d = spec.integer("d", 2);
    if (d < 2 || d > 8) {
        bad_spec("full(d) needs 2 <= d <= 8");
    }
    const auto dim = static_cast<std::size_t>(d);
    const auto basis = gell_mann(dim);
    // keeps the smallest eigenvalue above 0.8 / d: |l_a|_op <= 1
    const double w = 0.4 / (static_cast<double>(d) * static_cast<double>(basis.size()));
    std::vector<HermitianOperator> halves;
    for (const auto &b : basis) {
        halves.push_back(b * 0.5);
    }
    auto state = [dim, halves](const RVector &xi) {
        HermitianOperator rho = HermitianOperator::identity(dim) * (1.0 / static_cast<double>(dim));
        for (std::size_t a = 0; a < halves.size(); ++a) {
            rho += halves[a] * xi[static_cast<Eigen::Index>(a)];
        }
        return DensityOperator(rho);
    };
    auto partials = [halves](const RVector &) { return halves; };
    return {dim, std::vector<Interval>(basis.size(), {-w, w}), state, partials, spec.str()};
}

ParametricModel bloch_ellipsoid(const ModelSpec &spec) {
    spec.require_keys({"c"});
    const double c = spec.number("c", 0.3);
    if (!(std::abs(c) < 1.0)) {
        bad_spec("bloch-ellipsoid needs |c| < 1");
    }
    const Vec3 u1 = Vec3::UnitX();
    const Vec3 u2 = Vec3::UnitY();
    const Vec3 v = Vec3::UnitZ();
    auto state = [=](const RVector &xi) {
        return qubit::bloch_to_density(
            qubit::qubit_autoparallel_surface_point(u1, u2, v, c, Eigen::Vector2d(xi[0], xi[1])));
    };
    auto partials = [=](const RVector &xi) {
        const double alpha = std::sqrt(1.0 - xi.squaredNorm());
        return std::vector<HermitianOperator>{
            qubit::dot_sigma(u1 - c * xi[0] / alpha * v) * 0.5,
            qubit::dot_sigma(u2 - c * xi[1] / alpha * v) * 0.5};
    };
    return {2, std::vector<Interval>(2, {-0.65, 0.65}), state, partials, spec.str()};
}

ParametricModel bloch_geodesic(const ModelSpec &spec) {
    spec.require_keys({"a", "c", "coords"});
    const double a = spec.number("a", 0.0);
    const double c = spec.number("c", 0.4);
    const std::string coords = spec.text("coords", "xi");
    if (!(std::abs(a) < 0.95) || !(std::abs(c) < 1.0)) {
        bad_spec("bloch-geodesic needs |a| < 0.95 and |c| < 1");
    }
    const auto params = qubit::GeodesicParams::from_axes(Vec3::UnitZ(), Vec3::UnitX(), a, c);
    auto dr_dxi = [params](double xi) {
        return Vec3(params.u - params.c * xi / std::sqrt(1.0 - xi * xi) * params.v);
    };
    if (coords == "xi") {
        auto state = [params](const RVector &xi) {
            return qubit::bloch_to_density(qubit::qubit_geodesic_point(params, xi[0]));
        };
        auto partials = [dr_dxi](const RVector &xi) {
            return std::vector<HermitianOperator>{qubit::dot_sigma(dr_dxi(xi[0])) * 0.5};
        };
        return {2, {{-0.95, 0.95}}, state, partials, spec.str()};
    }
    if (coords == "theta") {
        auto state = [params, a](const RVector &theta) {
            return qubit::bloch_to_density(
                qubit::qubit_geodesic_point(params, qubit::theta_to_xi(a, theta[0])));
        };
        auto partials = [dr_dxi, a](const RVector &theta) {
            const double xi = qubit::theta_to_xi(a, theta[0]);
            return std::vector<HermitianOperator>{qubit::dot_sigma(dr_dxi(xi)) *
                                                  (0.5 * (1.0 - xi * xi))};
        };
        return {2, {{-1.0, 1.0}}, state, partials, spec.str()};
    }
    bad_spec("bloch-geodesic coords must be xi or theta");
}

DensityOperator default_reference(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    CMatrix p = CMatrix::Identity(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = j + 1; k < d; ++k) {
            p(j, k) = Complex(0.25, 0.1);
            p(k, j) = Complex(0.25, -0.1);
        }
    }
    return DensityOperator::normalized(HermitianOperator(p));
}

ParametricModel quasi_exp(const ModelSpec &spec) {
    spec.require_keys({"d", "n", "config"});
    const std::string config = spec.text("config", "");
    if (!config.empty()) {
        const auto j = load_json_file(config);
        std::vector<HermitianOperator> f;
        for (const auto &diag : j.at("diagonals")) {
            const auto values = diag.get<std::vector<double>>();
            f.push_back(HermitianOperator::diagonal(
                Eigen::Map<const RVector>(values.data(), static_cast<Eigen::Index>(values.size()))));
        }
        if (f.empty()) {
            bad_spec("quasi-exp config needs at least one diagonal");
        }
        const DensityOperator p = j.contains("reference")
                                      ? DensityOperator(operator_from_json(j.at("reference")))
                                      : default_reference(f.front().dim());
        std::vector<Interval> domain;
        for (const auto &iv : j.at("domain")) {
            domain.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
        }
        return QuasiExponentialFamily(p, f).model(domain, spec.str());
    }
    const int d = spec.integer("d", 3);
    const int n = spec.integer("n", 2);
    if (d < 2 || d > 8 || n < 1 || n > d - 1) {
        bad_spec("quasi-exp needs 2 <= d <= 8 and 1 <= n <= d - 1");
    }
    const auto dim = static_cast<std::size_t>(d);
    std::vector<HermitianOperator> f;
    for (int i = 0; i < n; ++i) {
        RVector diag = RVector::Zero(d);
        diag[i] = 1.0;
        f.push_back(HermitianOperator::diagonal(diag));
    }
    const std::vector<Interval> domain(static_cast<std::size_t>(n),
                                       {0.05, 0.9 / static_cast<double>(d)});
    return QuasiExponentialFamily(default_reference(dim), f).model(domain, spec.str());
}

ParametricModel latitude_band(const ModelSpec &spec) {
    spec.require_keys({"R"});
    const double radius = spec.number("R", 0.8);
    if (!(radius > 0.2 && radius < 1.0)) {
        bad_spec("latitude-band needs 0.2 < R < 1");
    }
    const double z_max = 0.5 * radius;
    auto bloch = [radius](const RVector &x) {
        const double rho = std::sqrt(radius * radius - x[1] * x[1]);
        return Vec3(rho * std::cos(x[0]), rho * std::sin(x[0]), x[1]);
    };
    auto state = [bloch](const RVector &x) {
        return qubit::bloch_to_density(qubit::BlochVector(bloch(x)));
    };
    auto partials = [radius](const RVector &x) {
        const double rho = std::sqrt(radius * radius - x[1] * x[1]);
        const Vec3 d_phi(-rho * std::sin(x[0]), rho * std::cos(x[0]), 0.0);
        const Vec3 d_z(-x[1] / rho * std::cos(x[0]), -x[1] / rho * std::sin(x[0]), 1.0);
        return std::vector<HermitianOperator>{qubit::dot_sigma(d_phi) * 0.5,
                                              qubit::dot_sigma(d_z) * 0.5};
    };
    return {2, {{-0.6, 0.6}, {-z_max, z_max}}, state, partials, spec.str()};
}

} // namespace

ParametricModel make_model(const ModelSpec &spec) {
    const std::string &id = spec.id();
    if (id == "bloch-full") {
        return bloch_full(spec);
    }
    if (id == "full") {
        return full_space(spec);
    }
    if (id == "bloch-ellipsoid") {
        return bloch_ellipsoid(spec);
    }
    if (id == "bloch-geodesic") {
        return bloch_geodesic(spec);
    }
    if (id == "quasi-exp") {
        return quasi_exp(spec);
    }
    if (id == "latitude-band") {
        return latitude_band(spec);
    }
    bad_spec("unknown model id '" + id + "'");
}

ParametricModel make_model(const std::string &spec) { return make_model(ModelSpec::parse(spec)); }

RVector domain_center(const ParametricModel &model) {
    RVector xi(static_cast<Eigen::Index>(model.n()));
    for (std::size_t i = 0; i < model.n(); ++i) {
        xi[static_cast<Eigen::Index>(i)] = 0.5 * (model.domain()[i].lo + model.domain()[i].hi);
    }
    return xi;
}

std::vector<RVector> domain_grid(const ParametricModel &model, std::size_t per_axis,
                                 double fraction) {
    if (per_axis == 0 || !(fraction > 0.0 && fraction < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "grid needs per_axis >= 1 and fraction in (0,1)");
    }
    const std::size_t n = model.n();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= per_axis;
        if (total > 1'000'000) {
            throw Error(ErrorKind::DimensionGuard, "grid would exceed 10^6 points");
        }
    }
    std::vector<RVector> grid;
    grid.reserve(total);
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t g = 0; g < total; ++g) {
        RVector xi(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            const Interval iv = model.domain()[i];
            const double mid = 0.5 * (iv.lo + iv.hi);
            const double half = 0.5 * (iv.hi - iv.lo) * fraction;
            const double t = per_axis == 1 ? 0.5
                                           : static_cast<double>(idx[i]) /
                                                 static_cast<double>(per_axis - 1);
            xi[static_cast<Eigen::Index>(i)] = mid - half + 2.0 * half * t;
        }
        grid.push_back(std::move(xi));
        for (std::size_t i = 0; i < n; ++i) {
            if (++idx[i] < per_axis) {
                break;
            }
            idx[i] = 0;
        }
    }
    return grid;
}

std::vector<RVector> domain_samples(const ParametricModel &model, std::size_t count,
                                    CounterRng &rng, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "fraction must lie in (0,1)");
    }
    std::vector<RVector> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        RVector xi(static_cast<Eigen::Index>(model.n()));
        for (std::size_t i = 0; i < model.n(); ++i) {
            const Interval iv = model.domain()[i];
            const double half = 0.5 * (iv.hi - iv.lo) * fraction;
            xi[static_cast<Eigen::Index>(i)] =
                0.5 * (iv.lo + iv.hi) + half * (2.0 * rng.uniform() - 1.0);
        }
        out.push_back(std::move(xi));
    }
    return out;
}

} // namespace qsld
