#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct CommandResult {
    int exit_code;
    std::string output;
};

CommandResult run_command(const std::string& cmd) {
    std::string full = cmd + " 2>/dev/null";
    FILE* pipe = popen(full.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[512];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::filesystem::path fixture_dir() {
    auto dir = std::filesystem::temp_directory_path() / "ldrw_cli_fixtures";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_fixture(const std::string& name, const std::string& content) {
    auto path = fixture_dir() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

}  // namespace

TEST_CASE("command line surface") {
    const std::string exe = LDRW_CLI_PATH;
    const std::string kernel =
        write_fixture("srw1.json", R"({"dim":1,"jumps":[[[1],0.5],[[-1],0.5]]})");
    const std::string delta0 =
        write_fixture("delta0.json", R"({"dim":1,"entries":[[[0],1.0]]})");
    const std::string xi =
        write_fixture("xi.json", R"({"dim":1,"orbits":[{"dim":1,"entries":[[[0],1.0]]}]})");
    const std::string v4 = write_fixture("v4.json", R"({"dim":1,"values":[[[0],4.0]]})");

    SUBCASE("rate of the point mass is the total rate") {
        CommandResult r = run_command(exe + " rate --kernel " + kernel + " --measure " + delta0);
        CHECK(r.exit_code == 0);
        CHECK(std::stod(r.output) == 1.0);
    }

    SUBCASE("metric of a point against itself vanishes") {
        CommandResult r = run_command(exe + " metric --a " + xi + " --b " + xi);
        CHECK(r.exit_code == 0);
        CHECK(std::stod(r.output) == 0.0);
    }

    SUBCASE("linear tilt prints the closed-form eigenvalue") {
        CommandResult r = run_command(exe + " opt-linear --kernel " + kernel +
                                      " --site-potential " + v4 + " --radius 60");
        CHECK(r.exit_code == 0);
        CHECK(std::fabs(std::stod(r.output) - (std::sqrt(17.0) - 1.0)) < 1e-8);
    }

    SUBCASE("seeded commands are byte reproducible") {
        std::string cmd = exe + " simulate --kernel " + kernel + " --t 10 --seed 7 --format json";
        CommandResult a = run_command(cmd);
        CommandResult b = run_command(cmd);
        CHECK(a.exit_code == 0);
        CHECK(a.output == b.output);
        CHECK(!a.output.empty());
    }

    SUBCASE("bad input exits with code 2") {
        CommandResult r = run_command(exe + " rate --kernel /nonexistent.json --measure " + delta0);
        CHECK(r.exit_code == 2);
        CommandResult miss = run_command(exe + " rate --kernel " + kernel);
        CHECK(miss.exit_code == 2);
    }

    SUBCASE("sweep outputs carry the documented CSV schemas") {
        CommandResult curve = run_command(exe + " ilt-curve --kernel " + kernel +
                                          " --radius 20 --thetas 0,2,50");
        CHECK(curve.exit_code == 0);
        CHECK(curve.output.rfind("theta,y,I_prime\n", 0) == 0);

        CommandResult quad = run_command(exe + " opt-quadratic --kernel " + kernel +
                                         " --potential " + v4 +
                                         " --radius 20 --starts 2 --seed 1");
        CHECK(quad.exit_code == 0);
        CHECK(quad.output.rfind("v,lambda,mass,grad_norm,starts\n", 0) == 0);

        CommandResult zt = run_command(exe + " mc-zt --kernel " + kernel + " --potential " + v4 +
                                       " --t 2 --samples 500 --seed 1");
        CHECK(zt.exit_code == 0);
        CHECK(zt.output.rfind("t,estimate,ci_low,ci_high,n,heavy_tail_flag\n", 0) == 0);
    }

    SUBCASE("decompose reports pieces and residual mass") {
        const std::string far = write_fixture(
            "far.json", R"({"dim":1,"entries":[[[0],0.5],[[100],0.5]]})");
        CommandResult r = run_command(exe + " decompose --measure " + far + " --format json");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("\"piece_count\": 2") != std::string::npos);
    }
}
