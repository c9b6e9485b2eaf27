#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>
#include <string>

#include "srlab/io.hpp"
#include "srlab/numeric.hpp"

using namespace srlab;

TEST_CASE("hex-float text is bit-exact") {
    const double vals[] = {0.0,
                           -0.0,
                           1.0,
                           1.0 / 3.0,
                           1e-300,
                           5e-324,                                    // smallest denormal
                           std::numeric_limits<double>::denorm_min(),
                           std::numeric_limits<double>::max(),
                           -std::numeric_limits<double>::min(),
                           M_PI};
    for (double v : vals) {
        double back = io::parse_double(io::hex_double(v));
        CHECK(std::memcmp(&back, &v, sizeof v) == 0);
    }
    auto rng = num::make_rng(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        double v = gauss(rng) * std::pow(10.0, int(gauss(rng) * 60));
        CHECK(io::parse_double(io::hex_double(v)) == v);
        CHECK(io::parse_double(io::fmt_double(v)) == v);  // shortest decimal round trip
    }
    CHECK(io::parse_double("0.25") == 0.25);
    CHECK(io::parse_double("-3e2") == -300.0);
}

TEST_CASE("key-value text parsing") {
    const std::string text =
        "# experiment setup\n"
        "structure = \"heisenberg\"  # catalogue name\n"
        "grid = 256\n"
        "alpha = 0.5\n"
        "regime = W\n"
        "M_list = [0.25, 1, 4]\n"
        "grid = 128\n"           // duplicate: last one wins
        "empty_list = []\n";
    io::KVFile kv = io::KVFile::parse_text(text);

    CHECK(kv.has("structure"));
    CHECK(!kv.has("missing"));
    CHECK(kv.get_string("structure") == "heisenberg");
    CHECK(kv.get_string("regime") == "W");
    CHECK(kv.get_string("missing", "fallback") == "fallback");
    CHECK(kv.get_number("alpha") == 0.5);
    CHECK(kv.get_number("missing", 2.5) == 2.5);
    CHECK(kv.get_int("grid", 0) == 128);
    CHECK(kv.get_int("missing", 7) == 7);

    std::vector<double> M = kv.get_list("M_list");
    REQUIRE(M.size() == 3);
    CHECK(M[0] == 0.25);
    CHECK(M[1] == 1.0);
    CHECK(M[2] == 4.0);
    CHECK(kv.get_list("empty_list").empty());

    // file order is preserved, duplicates iterable
    const auto& p = kv.pairs();
    REQUIRE(p.size() == 7);
    CHECK(p.front().first == "structure");
    CHECK(p[1].first == "grid");
    CHECK(p[5].first == "grid");
    CHECK(p[1].second != p[5].second);

    CHECK_THROWS(kv.get_number("structure"));  // not a number
    CHECK_THROWS(kv.get_string("nope"));       // no default given
}

TEST_CASE("key-value file round trip") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "srlab-io-test";
    fs::create_directories(dir);
    std::string path = (dir / "cfg.txt").string();
    io::write_text_file(path, "seed = 42\nname = \"run one\"\n");
    io::KVFile kv = io::KVFile::parse_file(path);
    CHECK(kv.get_int("seed", 0) == 42);
    CHECK(kv.get_string("name") == "run one");
    CHECK(io::read_text_file(path) == "seed = 42\nname = \"run one\"\n");
    fs::remove_all(dir);
}

TEST_CASE("csv writer emits the rows verbatim") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "srlab-io-test-csv";
    fs::create_directories(dir);
    std::string path = (dir / "t.csv").string();
    {
        io::CsvWriter w(path);
        w.row({"h", "w2"});
        w.row({"0.5", "1.25"});
        w.row({io::fmt_double(0.1), io::fmt_double(2.0)});
    }
    CHECK(io::read_text_file(path) == "h,w2\n0.5,1.25\n0.1,2\n");
    fs::remove_all(dir);
}
