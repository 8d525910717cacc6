#include "cubicvs/record.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cubicvs {

Json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double number_from(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw std::invalid_argument("not a number: " + s);
    }
    return j.get<double>();
}

Json tagged(double v, const char* method) { return Json{{"value", number(v)}, {"method", method}}; }

Json tagged(u64 v, const char* method) { return Json{{"value", v}, {"method", method}}; }

Json tagged_u128(u128 v, const char* method) {
    // Values beyond 64 bits are written as decimal strings.
    if (v <= std::numeric_limits<u64>::max()) return tagged(static_cast<u64>(v), method);
    return Json{{"value", to_decimal(v)}, {"method", method}};
}

Json to_json(const Offset& h) { return Json::array({h.h1, h.h2, h.h3}); }

Offset offset_from_json(const Json& j) {
    return {j.at(0).get<i64>(), j.at(1).get<i64>(), j.at(2).get<i64>()};
}

Json ResultRecord::to_json() const {
    Json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["methods"] = methods;
    if (elapsed) j["elapsed"] = *elapsed;
    j["version"] = version;
    return j;
}

std::string ResultRecord::to_line() const { return to_json().dump(); }

ResultRecord ResultRecord::from_json(const Json& j) {
    ResultRecord r;
    r.command = j.at("command").get<std::string>();
    r.inputs = j.at("inputs");
    r.outputs = j.at("outputs");
    r.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("elapsed")) r.elapsed = j.at("elapsed").get<double>();
    r.version = j.at("version").get<std::string>();
    return r;
}

ResultRecord ResultRecord::from_line(const std::string& line) {
    return from_json(Json::parse(line));
}

std::string to_decimal(u128 v) {
    if (v == 0) return "0";
    std::string out;
    while (v > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace cubicvs
