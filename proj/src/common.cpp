#include "rollup/common.hpp"
#include "rollup/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace rollup {

std::string full_precision(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string trimmed(const std::string& text) {
    std::size_t lo = 0;
    std::size_t hi = text.size();
    while (lo < hi && std::isspace(static_cast<unsigned char>(text[lo]))) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(text[hi - 1]))) --hi;
    return text.substr(lo, hi - lo);
}

double parse_plain(const std::string& text) {
    const std::string t = trimmed(text);
    if (t.empty()) throw ValidationError("empty number");
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw ValidationError("not a number: '" + text + "'");
    return v;
}

}  // namespace

double parse_number(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return parse_plain(text);
    double num = parse_plain(text.substr(0, slash));
    double den = parse_plain(text.substr(slash + 1));
    if (den == 0.0) throw ValidationError("zero denominator in '" + text + "'");
    return num / den;
}

std::vector<double> parse_grid(const std::string& spec) {
    auto c1 = spec.find(':');
    auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw ValidationError("grid must be lo:hi:step, got '" + spec + "'");
    double lo = parse_number(spec.substr(0, c1));
    double hi = parse_number(spec.substr(c1 + 1, c2 - c1 - 1));
    double step = parse_number(spec.substr(c2 + 1));
    if (!(step > 0.0)) throw ValidationError("grid step must be positive");
    if (lo > hi) throw ValidationError("grid lo exceeds hi");

    // Tolerate the usual lo + n*step overshoot at the top end.
    double span = std::max({1.0, std::fabs(lo), std::fabs(hi)});
    double tol = 1e-9 * span;
    std::vector<double> out;
    for (long long i = 0;; ++i) {
        double v = lo + static_cast<double>(i) * step;
        if (v > hi + tol) break;
        out.push_back(std::min(v, hi));
        if (out.size() > 100'000'000) throw ValidationError("grid too large");
    }
    return out;
}

namespace {

using BigInt = boost::multiprecision::cpp_int;

BigInt parse_integer(const std::string& text) {
    const std::string t = trimmed(text);
    if (t.empty()) throw ValidationError("empty number");
    try {
        return BigInt(t);
    } catch (const std::exception&) {
        throw ValidationError("not an integer: '" + text + "'");
    }
}

BigInt pow10(std::size_t n) {
    BigInt r = 1;
    for (std::size_t i = 0; i < n; ++i) r *= 10;
    return r;
}

// Sign, digits, optional fraction, optional exponent.
Rational parse_decimal(const std::string& text) {
    std::string t = trimmed(text);
    if (t.empty()) throw ValidationError("empty number");
    bool negative = false;
    std::size_t i = 0;
    if (t[i] == '+' || t[i] == '-') {
        negative = t[i] == '-';
        ++i;
    }
    std::string digits;
    long long exponent = 0;
    bool any = false;
    for (; i < t.size() && std::isdigit(static_cast<unsigned char>(t[i])); ++i) {
        digits += t[i];
        any = true;
    }
    if (i < t.size() && t[i] == '.') {
        ++i;
        for (; i < t.size() && std::isdigit(static_cast<unsigned char>(t[i])); ++i) {
            digits += t[i];
            --exponent;
            any = true;
        }
    }
    if (!any) throw ValidationError("not a number: '" + text + "'");
    if (i < t.size() && (t[i] == 'e' || t[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < t.size() && (t[i] == '+' || t[i] == '-')) {
            eneg = t[i] == '-';
            ++i;
        }
        if (i == t.size()) throw ValidationError("bad exponent in '" + text + "'");
        long long e = 0;
        for (; i < t.size() && std::isdigit(static_cast<unsigned char>(t[i])); ++i)
            e = e * 10 + (t[i] - '0');
        exponent += eneg ? -e : e;
    }
    if (i != t.size()) throw ValidationError("not a number: '" + text + "'");

    BigInt mantissa(digits.empty() ? "0" : digits);
    if (negative) mantissa = -mantissa;
    if (exponent >= 0) return Rational(mantissa * pow10(exponent));
    return Rational(mantissa, pow10(static_cast<std::size_t>(-exponent)));
}

}  // namespace

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return parse_decimal(text);
    BigInt num = parse_integer(text.substr(0, slash));
    BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw ValidationError("zero denominator in '" + text + "'");
    return Rational(num, den);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace rollup
