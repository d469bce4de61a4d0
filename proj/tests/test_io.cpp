#include "doctest.h"

#include "svev/errors.hpp"
#include "svev/io.hpp"

#include <clocale>
#include <cmath>
#include <filesystem>

using namespace svev;
namespace fs = std::filesystem;

TEST_CASE("doubles round trip through text") {
    for (double v : {0.1, -2.5e-300, 1.0 / 3.0, 6.02214076e23, 0.0}) CHECK(parse_double(format_double(v), "v") == v);
    CHECK(format_double(0.5).find(',') == std::string::npos);
    CHECK_THROWS_AS(parse_double("1.5x", "v"), ConfigError);
    CHECK_THROWS_AS(parse_long("3.5", "n"), ConfigError);
    CHECK(parse_long("42", "n") == 42);
}

TEST_CASE("key=value parsing") {
    const auto kv = parse_key_values("# header\nn=3\n\n family = jacobi \nalpha=0.5 # trailing\n");
    CHECK(kv.at("n") == "3");
    CHECK(kv.at("family") == "jacobi");
    CHECK(kv.at("alpha") == "0.5");
    CHECK_THROWS_AS(parse_key_values("no equals sign\n"), ConfigError);
}

TEST_CASE("csv and key=value files round trip") {
    const fs::path dir = fs::temp_directory_path() / "svev_test_io";
    fs::create_directories(dir);
    CsvTable t;
    t.header = {"x", "value"};
    t.rows = {{0.1, 1.0 / 7.0}, {0.2, -3e-17}};
    write_csv((dir / "t.csv").string(), t);
    const auto u = read_csv((dir / "t.csv").string());
    CHECK(u.header == t.header);
    CHECK(u.rows == t.rows);
    write_key_value_file((dir / "m.meta").string(), {{"seed", "7"}, {"draws", "100"}});
    const auto kv = read_key_value_file((dir / "m.meta").string());
    CHECK(kv.at("seed") == "7");
    CHECK_THROWS_AS(read_csv((dir / "missing.csv").string()), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("grids") {
    const auto lin = make_grid({0.0, 1.0, 5, false});
    REQUIRE(lin.size() == 5);
    CHECK(lin.front() == 0.0);
    CHECK(lin.back() == 1.0);
    CHECK(lin[2] == doctest::Approx(0.5));
    const auto lg = make_grid({0.01, 100.0, 5, true});
    CHECK(lg[2] == doctest::Approx(1.0));
    CHECK(lg.back() == 100.0);
    CHECK_THROWS_AS(make_grid({0.0, 1.0, 1, false}), ConfigError);
    CHECK_THROWS_AS(make_grid({0.0, 1.0, 4, true}), ConfigError);
    CHECK_THROWS_AS(make_grid({1.0, 1.0, 4, false}), ConfigError);
}
