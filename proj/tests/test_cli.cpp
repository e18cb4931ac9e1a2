#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& args) {
    std::string cmd = std::string(MBMLAB_BIN) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

struct TempDir {
    fs::path path;
    TempDir(const char* name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("synthesize twice with the same config is byte-identical") {
    TempDir dir("mbmlab_cli_det");
    fs::path cfgfile = dir.path / "exp.cfg";
    {
        std::ofstream cfg(cfgfile);
        cfg << "seed = 3\nreplicates = 5\nt_points = 17\n"
               "j_min = -6\nj_max = 6\nk_window = 12\n"
               "hurst.kind = sine\nhurst.mean = 0.5\nhurst.amp = 0.1\n"
               "psi.x_max = 16\n";
    }
    fs::path out1 = dir.path / "out1", out2 = dir.path / "out2";
    REQUIRE(run("synthesize --config " + cfgfile.string() + " --out " + out1.string()) == 0);
    REQUIRE(run("synthesize --config " + cfgfile.string() + " --out " + out2.string()) == 0);
    CHECK(slurp(out1 / "paths.csv") == slurp(out2 / "paths.csv"));

    // header row present and provenance carries the seed
    std::string head = slurp(out1 / "paths.csv").substr(0, 400);
    CHECK(head.find("replicate,t,X,Z,R") != std::string::npos);
    CHECK(head.find("seed: 3") != std::string::npos);
}

TEST_CASE("region emits resolution^2 rows") {
    TempDir dir("mbmlab_cli_region");
    fs::path cfgfile = dir.path / "exp.cfg";
    {
        std::ofstream cfg(cfgfile);
        cfg << "region.resolution = 20\n";
    }
    REQUIRE(run("region --config " + cfgfile.string() + " --out " + dir.path.string()) == 0);
    std::string text = slurp(dir.path / "region.csv");
    std::size_t rows = 0;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty() && line[0] != '#') ++rows;
    CHECK(rows == 400 + 1);  // header + 20 x 20 cells
}

TEST_CASE("exponent subcommand writes the report") {
    TempDir dir("mbmlab_cli_exp");
    fs::path cfgfile = dir.path / "exp.cfg";
    {
        std::ofstream cfg(cfgfile);
        cfg << "a = 0.45\nb = 0.55\nell = 4\ngrid_resolution = 400\n";
    }
    REQUIRE(run("exponent --config " + cfgfile.string() + " --out " + dir.path.string()) == 0);
    std::string text = slurp(dir.path / "exponent.csv");
    CHECK(text.find("feasible") != std::string::npos);
    CHECK(text.find("0.742") != std::string::npos);
}

TEST_CASE("bad config exits nonzero and removes partial outputs") {
    TempDir dir("mbmlab_cli_bad");
    fs::path cfgfile = dir.path / "exp.cfg";
    {
        std::ofstream cfg(cfgfile);
        cfg << "a = 0.6\nb = 0.5\n";
    }
    CHECK(run("exponent --config " + cfgfile.string() + " --out " + dir.path.string()) != 0);
    CHECK_FALSE(fs::exists(dir.path / "exponent.csv"));
    CHECK_FALSE(fs::exists(dir.path / "exponent.csv.tmp"));
}
