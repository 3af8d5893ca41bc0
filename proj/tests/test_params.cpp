#include <doctest.h>

#include <rollup/common.hpp>
#include <rollup/params.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

using namespace rollup;

namespace {

int g_file_counter = 0;

std::string write_temp(const std::string& contents) {
    std::string path = "params_test_" + std::to_string(g_file_counter++) + ".tmp";
    std::ofstream out(path);
    out << contents;
    out.close();
    return path;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) : path(write_temp(contents)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("key=value configs parse with comments and fractions") {
    TempFile file(
        "# protocol constants\n"
        "f = 1\n"
        "w = 0.5\n"
        "s_A = 1\n"
        "s_V = 1\n"
        "x = 1/24   # fractional reward\n"
        "z = 24\n"
        "\n"
        "u_T = 1.05\n");
    ProtocolParams p = load_params(file.path);
    CHECK(p.f == 1.0);
    CHECK(p.w == 0.5);
    CHECK(p.x == 1.0 / 24.0);
    CHECK(p.z == 24.0);
    CHECK(p.y == 0.0);
    REQUIRE(p.u_T.has_value());
    CHECK(*p.u_T == 1.05);
    CHECK_FALSE(p.p.has_value());
}

TEST_CASE("JSON configs parse numbers and fraction strings") {
    TempFile file(R"({"f": 1, "w": 0.5, "s_A": 1, "s_V": 1, "x": "1/24", "z": 24, "p": 0.75})");
    ProtocolParams p = load_params(file.path);
    CHECK(p.x == 1.0 / 24.0);
    REQUIRE(p.p.has_value());
    CHECK(*p.p == 0.75);
    CHECK_FALSE(p.u_T.has_value());
}

TEST_CASE("unknown keys are rejected in both formats") {
    TempFile kv("f = 1\nbogus = 3\n");
    CHECK_THROWS_AS(load_params(kv.path), ValidationError);
    TempFile js(R"({"f": 1, "bogus": 3})");
    CHECK_THROWS_AS(load_params(js.path), ValidationError);
}

TEST_CASE("malformed values and missing files are rejected") {
    TempFile bad_number("f = abc\n");
    CHECK_THROWS_AS(load_params(bad_number.path), ValidationError);
    TempFile bad_line("f(1)\n");
    CHECK_THROWS_AS(load_params(bad_line.path), ValidationError);
    TempFile bad_json(R"({"f": [1]})");
    CHECK_THROWS_AS(load_params(bad_json.path), ValidationError);
    CHECK_THROWS_AS(load_params("no_such_file.cfg"), Error);
}

TEST_CASE("parameter validation enforces ranges") {
    ProtocolParams p;
    p.f = 1.0;
    p.w = 0.5;
    p.s_A = 1.0;
    p.s_V = 1.0;
    p.x = 1.0 / 24.0;
    p.z = 24.0;
    CHECK_NOTHROW(p.validate());

    SUBCASE("negative values") {
        p.s_A = -1.0;
        CHECK_THROWS_AS(p.validate(), ValidationError);
    }
    SUBCASE("non-finite values") {
        p.z = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(p.validate(), ValidationError);
    }
    SUBCASE("probability above one") {
        p.p = 1.5;
        CHECK_THROWS_AS(p.validate(), ValidationError);
    }
    SUBCASE("probability in range") {
        p.p = 1.0;
        CHECK_NOTHROW(p.validate());
    }
}

TEST_CASE("mix points validate their coordinates") {
    CHECK_NOTHROW(MixPoint{0.0, 1.0, 0.5}.validate());
    CHECK_THROWS_AS((MixPoint{-0.1, 0.5, 0.5}.validate()), ValidationError);
    CHECK_THROWS_AS((MixPoint{0.5, 1.1, 0.5}.validate()), ValidationError);
    CHECK_THROWS_AS((MixPoint{0.5, 0.5, std::nan("")}.validate()), ValidationError);
}

TEST_CASE("ordinal check flags surprising parameter orderings") {
    ProtocolParams good;
    good.f = 1.0;
    good.w = 0.5;
    good.s_A = 1.0;
    good.s_V = 1.0;
    good.x = 1.0 / 24.0;
    good.z = 24.0;
    OrdinalReport ok = ordinal_check(good);
    CHECK(ok.ordered);
    CHECK(ok.z_dominant);
    CHECK(ok.z_over_s_A == 24.0);
    CHECK(ok.warnings.empty());

    ProtocolParams weird = good;
    weird.x = 5.0;
    weird.z = 2.0;
    OrdinalReport report = ordinal_check(weird);
    CHECK_FALSE(report.ordered);
    CHECK_FALSE(report.z_dominant);
    CHECK_FALSE(report.warnings.empty());
}

TEST_CASE("number parsing accepts decimals, exponents, and fractions") {
    CHECK(parse_number("0.5") == 0.5);
    CHECK(parse_number("1e-3") == 1e-3);
    CHECK(parse_number("1/24") == 1.0 / 24.0);
    CHECK(parse_number("-3/4") == -0.75);
    CHECK_THROWS_AS(parse_number(""), ValidationError);
    CHECK_THROWS_AS(parse_number("1/"), ValidationError);
    CHECK_THROWS_AS(parse_number("x12"), ValidationError);
    CHECK_THROWS_AS(parse_number("1/0"), ValidationError);
}

TEST_CASE("grid parsing is inclusive and tolerates rounding at the top") {
    auto g = parse_grid("0.05:1.0:0.05");
    REQUIRE(g.size() == 20);
    CHECK(g.front() == 0.05);
    CHECK(g.back() <= 1.0);
    CHECK(g.back() == doctest::Approx(1.0).epsilon(1e-12));

    auto single = parse_grid("0.3:0.3:0.1");
    REQUIRE(single.size() == 1);
    CHECK(single[0] == 0.3);

    CHECK_THROWS_AS(parse_grid("1:0:0.1"), ValidationError);
    CHECK_THROWS_AS(parse_grid("0:1:0"), ValidationError);
    CHECK_THROWS_AS(parse_grid("0:1"), ValidationError);
    CHECK_THROWS_AS(parse_grid("a:b:c"), ValidationError);
}

TEST_CASE("full precision formatting round-trips doubles") {
    for (double v : {1.0 / 3.0, 67.0 / 96.0, 1e-300, -0.0, 12345.6789}) {
        std::string s = full_precision(v);
        CHECK(std::stod(s) == v);
    }
}
