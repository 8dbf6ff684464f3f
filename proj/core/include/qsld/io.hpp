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
 * JSON and CSV serialization.
 *
 * Operators are {"dim": d, "re": [[...]], "im": [[...]]}. Estimators are
 * {"elements": [operator...], "values": [[...]...]}. Reports wrap a body in
 * {"metadata": {...}, "body": {...}} so that the body alone is a pure
 * function of the inputs.
 */

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsld/estimation.hpp"
#include "qsld/hermitian.hpp"
#include "qsld/model.hpp"

namespace qsld {

using Json = nlohmann::ordered_json;

Json operator_to_json(const HermitianOperator &a);
/// Throws InvalidArgument on malformed input and NotHermitian when the
/// matrix is not Hermitian within 1e-9.
HermitianOperator operator_from_json(const Json &j);

Json estimator_to_json(const DiscreteEstimator &pi);
DiscreteEstimator estimator_from_json(const Json &j);

Json vector_to_json(const RVector &v);
Json matrix_to_json(const RMatrix &m);
RVector vector_from_json(const Json &j);

/// {"xi", "state", "slds", "fisher"}
Json geometry_to_json(const PointGeometry &geo);

Json load_json_file(const std::string &path);

/// ISO-8601 UTC, second resolution.
std::string utc_timestamp();

/// {"metadata": {"version", "timestamp"}, "body": body}
Json make_report(Json body);

/// CSV writer; numbers use the shortest text that round-trips exactly.
class CsvWriter {
  public:
    CsvWriter(std::ostream &out, const std::vector<std::string> &header);
    void row(const std::vector<double> &values);

  private:
    std::ostream &out_;
    std::size_t columns_;
};

std::string format_double(double v);

} // namespace qsld
