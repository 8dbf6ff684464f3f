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

/**
 * @file
 * Named, parameterized models used as reproducible fixtures.
 *
 * | id              | n      | m-affine coordinates                   |
 * |-----------------|--------|----------------------------------------|
 * | bloch-full      | 3      | yes (Bloch vector)                     |
 * | full            | d^2-1  | yes (Gell-Mann coefficients)           |
 * | bloch-ellipsoid | 2      | yes (xi^i = <u_i . sigma>)             |
 * | bloch-geodesic  | 1      | yes for coords=xi, no for coords=theta |
 * | quasi-exp       | n      | yes (xi^i = <F^i>)                     |
 * | latitude-band   | 2      | no; not e-autoparallel                 |
 */

#pragma once

#include <map>
#include <string>
#include <vector>

#include "qsld/model.hpp"
#include "qsld/random.hpp"

namespace qsld {

/// Parsed `id(key=value, ...)`.
class ModelSpec {
  public:
    static ModelSpec parse(const std::string &text);

    [[nodiscard]] const std::string &id() const noexcept { return id_; }
    [[nodiscard]] const std::map<std::string, std::string> &params() const noexcept {
        return params_;
    }
    [[nodiscard]] double number(const std::string &key, double fallback) const;
    [[nodiscard]] int integer(const std::string &key, int fallback) const;
    [[nodiscard]] std::string text(const std::string &key, const std::string &fallback) const;

    /// Throws InvalidArgument naming the first key not in `allowed`.
    void require_keys(const std::vector<std::string> &allowed) const;

    /// Canonical form with keys sorted.
    [[nodiscard]] std::string str() const;

  private:
    std::string id_;
    std::map<std::string, std::string> params_;
};

struct CatalogEntry {
    std::string id;
    std::string params;
    std::string description;
};

const std::vector<CatalogEntry> &catalog_entries();

/// Builds a catalog model; throws InvalidArgument for unknown ids or keys.
ParametricModel make_model(const ModelSpec &spec);
ParametricModel make_model(const std::string &spec);

/// Point inside the model domain: the box centre.
RVector domain_center(const ParametricModel &model);

/// Tensor grid with `per_axis` points per coordinate spanning the central
/// `fraction` of each domain interval.
std::vector<RVector> domain_grid(const ParametricModel &model, std::size_t per_axis,
                                 double fraction = 0.8);

/// `count` points drawn uniformly from the central `fraction` of the domain.
std::vector<RVector> domain_samples(const ParametricModel &model, std::size_t count,
                                    CounterRng &rng, double fraction = 0.8);

/// Generalized Gell-Mann matrices, normalized to Tr(l_a l_b) = 2 delta_ab.
std::vector<HermitianOperator> gell_mann(std::size_t dim);

} // namespace qsld
