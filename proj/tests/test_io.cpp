#include "doctest.h"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lznoise/io.hpp"

using namespace lzn;

TEST_CASE("fnv1a64 reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
    CHECK(fnv1a64("hello world") == 0x779a65e7023cd2e7ull);
}

TEST_CASE("fnv1a64 chains across fragments") {
    CHECK(fnv1a64("world", fnv1a64("hello ")) == fnv1a64("hello world"));
}

TEST_CASE("g17 formatting round-trips doubles exactly") {
    const double values[] = {0.0,
                             -0.0,
                             0.1,
                             1.0 / 3.0,
                             -2.7182818284590452,
                             1e300,
                             -1e-300,
                             5e-324,
                             1.5440618722340038,
                             123456789.123456789};
    for (double x : values) {
        const std::string s = format_g17(x);
        char* end = nullptr;
        const double back = std::strtod(s.c_str(), &end);
        CHECK(*end == '\0');
        CHECK(back == x);
    }
    CHECK(format_g17(1.0) == "1");
    CHECK(format_g17(0.5) == "0.5");
}

TEST_CASE("csv writer pins schema bytes and hashes content") {
    const auto path =
        (std::filesystem::temp_directory_path() / "lznoise_io_test.csv").string();

    CsvWriter w(path, "lznoise.test.v1", "x,y");
    w.row("1,2");
    w.row("3,4");
    const CsvSummary s = w.close();

    CHECK(s.rows == 2);
    CHECK(s.path == path);

    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    CHECK(bytes == "# schema: lznoise.test.v1\nx,y\n1,2\n3,4\n");
    CHECK(s.file_fnv == fnv1a64(bytes));
    CHECK(s.row_fnv == fnv1a64("1,2\n3,4\n"));

    std::filesystem::remove(path);
}

TEST_CASE("csv writer reports unwritable paths") {
    CHECK_THROWS_AS(CsvWriter("/nonexistent-dir/out.csv", "s", "h"),
                    std::runtime_error);
}
