#pragma once

// Machine-readable result records, one JSON object per line.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubicvs/core.hpp"

namespace cubicvs {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolkitVersion = "1.0.0";

// Method tags attached to every emitted number.
inline constexpr const char* kExactCount = "exact-count";
inline constexpr const char* kQuadrature = "quadrature";
inline constexpr const char* kMonteCarlo = "monte-carlo";
inline constexpr const char* kTruncatedSeries = "truncated-series";

// Finite doubles as numbers; inf and nan as the strings "inf", "-inf", "nan".
Json number(double v);
double number_from(const Json& j);

// {"value": v, "method": tag}
Json tagged(double v, const char* method);
Json tagged(u64 v, const char* method);
Json tagged_u128(u128 v, const char* method);

Json to_json(const Offset& h);
Offset offset_from_json(const Json& j);

struct ResultRecord {
    std::string command;
    Json inputs = Json::object();
    Json outputs = Json::object();
    std::vector<std::string> methods;
    std::optional<double> elapsed;  // only written when timing is requested
    std::string version = kToolkitVersion;

    Json to_json() const;
    std::string to_line() const;
    static ResultRecord from_json(const Json& j);
    static ResultRecord from_line(const std::string& line);

    friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

std::string to_decimal(u128 v);

}  // namespace cubicvs
