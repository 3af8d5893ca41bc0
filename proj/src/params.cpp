#include "rollup/params.hpp"
#include "rollup/common.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace rollup {

namespace {

void check_field(const char* name, double v) {
    if (!std::isfinite(v) || v < 0.0)
        throw ValidationError(std::string(name) + " must be finite and nonnegative");
}

}  // namespace

void ProtocolParams::validate() const {
    check_field("f", f);
    check_field("w", w);
    check_field("s_A", s_A);
    check_field("s_V", s_V);
    check_field("x", x);
    check_field("z", z);
    check_field("y", y);
    if (u_T) check_field("u_T", *u_T);
    if (p) {
        check_field("p", *p);
        if (*p > 1.0) throw ValidationError("p must not exceed 1");
    }
}

OrdinalReport ordinal_check(const ProtocolParams& params, double multiplier) {
    OrdinalReport report;
    report.ordered = params.x < params.s_V && params.s_V <= params.s_A &&
                     params.s_A < params.z;
    report.z_over_s_A = params.s_A > 0.0
                            ? params.z / params.s_A
                            : std::numeric_limits<double>::infinity();
    report.z_dominant = params.z >= multiplier * params.s_A;
    if (!report.ordered)
        report.warnings.push_back(
            "parameters break the expected ordering x < s_V <= s_A < z");
    if (!report.z_dominant)
        report.warnings.push_back("attack value z = " + full_precision(params.z) +
                                  " does not dominate the stake s_A (ratio " +
                                  full_precision(report.z_over_s_A) + " < " +
                                  full_precision(multiplier) + ")");
    return report;
}

void MixPoint::validate() const {
    for (auto [name, v] : {std::pair{"b", b}, {"g", g}, {"h", h}}) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw ValidationError(std::string(name) + " = " + full_precision(v) +
                                  " is not a probability");
    }
}

namespace {

void assign_field(ProtocolParams& params, const std::string& key, double value) {
    if (key == "f") params.f = value;
    else if (key == "w") params.w = value;
    else if (key == "s_A") params.s_A = value;
    else if (key == "s_V") params.s_V = value;
    else if (key == "x") params.x = value;
    else if (key == "z") params.z = value;
    else if (key == "y") params.y = value;
    else if (key == "u_T") params.u_T = value;
    else if (key == "p") params.p = value;
    else throw ValidationError("unknown parameter '" + key + "'");
}

std::string strip(const std::string& s) {
    auto lo = s.find_first_not_of(" \t\r\n");
    if (lo == std::string::npos) return "";
    auto hi = s.find_last_not_of(" \t\r\n");
    return s.substr(lo, hi - lo + 1);
}

ProtocolParams from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad parameter JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("parameter JSON must be an object");
    ProtocolParams params;
    for (const auto& [key, value] : j.items()) {
        if (value.is_number()) {
            assign_field(params, key, value.get<double>());
        } else if (value.is_string()) {
            assign_field(params, key, parse_number(value.get<std::string>()));
        } else {
            throw ValidationError("parameter '" + key + "' is not a number");
        }
    }
    return params;
}

ProtocolParams from_key_value_text(const std::string& text) {
    ProtocolParams params;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": expected key=value");
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        assign_field(params, key, parse_number(value));
    }
    return params;
}

}  // namespace

ProtocolParams load_params(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ValidationError("cannot open parameter file '" + path + "'");
    std::ostringstream buf;
    buf << file.rdbuf();
    std::string text = buf.str();
    std::string body = strip(text);
    ProtocolParams params = !body.empty() && body.front() == '{'
                                ? from_json_text(text)
                                : from_key_value_text(text);
    params.validate();
    return params;
}

}  // namespace rollup
