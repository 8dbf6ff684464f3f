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

#include "qsld/io.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qsld/error.hpp"
#include "qsld/version.hpp"

namespace qsld {

namespace {

[[noreturn]] void malformed(const std::string &what) {
    throw Error(ErrorKind::InvalidArgument, "malformed JSON: " + what);
}

RMatrix rows_from_json(const Json &j, const char *field) {
    if (!j.is_array() || j.empty()) {
        malformed(std::string("'") + field + "' must be a non-empty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    RMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json &row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            malformed(std::string("ragged rows in '") + field + "'");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const Json &x = row[static_cast<std::size_t>(c)];
            if (!x.is_number()) {
                malformed(std::string("non-numeric entry in '") + field + "'");
            }
            m(r, c) = x.get<double>();
        }
    }
    return m;
}

} // namespace

Json vector_to_json(const RVector &v) {
    Json j = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        j.push_back(v[i]);
    }
    return j;
}

Json matrix_to_json(const RMatrix &m) {
    Json j = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        j.push_back(vector_to_json(m.row(r).transpose()));
    }
    return j;
}

RVector vector_from_json(const Json &j) {
    if (!j.is_array()) {
        malformed("expected an array of numbers");
    }
    RVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            malformed("expected an array of numbers");
        }
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

Json operator_to_json(const HermitianOperator &a) {
    return Json{{"dim", a.dim()},
                {"re", matrix_to_json(a.matrix().real())},
                {"im", matrix_to_json(a.matrix().imag())}};
}

HermitianOperator operator_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("re")) {
        malformed("operator needs 'dim' and 're'");
    }
    if (!j.at("dim").is_number_integer() || j.at("dim").get<long long>() < 1) {
        malformed("'dim' must be a positive integer");
    }
    const auto d = static_cast<Eigen::Index>(j.at("dim").get<long long>());
    const RMatrix re = rows_from_json(j.at("re"), "re");
    const RMatrix im = j.contains("im") ? rows_from_json(j.at("im"), "im") : RMatrix::Zero(d, d);
    if (re.rows() != d || re.cols() != d || im.rows() != d || im.cols() != d) {
        malformed("operator entries do not match 'dim'");
    }
    CMatrix m(d, d);
    m.real() = re;
    m.imag() = im;
    return HermitianOperator::checked(m);
}

Json estimator_to_json(const DiscreteEstimator &pi) {
    Json elements = Json::array();
    Json values = Json::array();
    for (std::size_t w = 0; w < pi.size(); ++w) {
        elements.push_back(operator_to_json(pi.elements()[w]));
        values.push_back(vector_to_json(pi.values()[w]));
    }
    return Json{{"elements", elements}, {"values", values}};
}

DiscreteEstimator estimator_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("elements") || !j.contains("values")) {
        malformed("estimator needs 'elements' and 'values'");
    }
    std::vector<HermitianOperator> elements;
    std::vector<RVector> values;
    for (const auto &e : j.at("elements")) {
        elements.push_back(operator_from_json(e));
    }
    for (const auto &v : j.at("values")) {
        values.push_back(vector_from_json(v));
    }
    return {std::move(elements), std::move(values)};
}

Json geometry_to_json(const PointGeometry &geo) {
    Json slds = Json::array();
    for (const auto &t : geo.tangents) {
        slds.push_back(operator_to_json(t.sld()));
    }
    return Json{{"xi", vector_to_json(geo.xi)},
                {"state", operator_to_json(geo.state->op())},
                {"slds", slds},
                {"fisher", matrix_to_json(geo.fisher.matrix())}};
}

Json load_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        malformed(path + ": " + e.what());
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

Json make_report(Json body) {
    return Json{{"metadata", {{"library", "qsld"}, {"version", kVersion}, {"timestamp", utc_timestamp()}}},
                {"body", std::move(body)}};
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

CsvWriter::CsvWriter(std::ostream &out, const std::vector<std::string> &header)
    : out_(out), columns_(header.size()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
        out_ << (c ? "," : "") << header[c];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double> &values) {
    if (values.size() != columns_) {
        throw Error(ErrorKind::DimensionMismatch, "CSV row width differs from header");
    }
    for (std::size_t c = 0; c < values.size(); ++c) {
        out_ << (c ? "," : "") << format_double(values[c]);
    }
    out_ << '\n';
}

} // namespace qsld
