#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string binary_path() {
    const char* env = std::getenv("GWLAB_BIN");
    REQUIRE(env != nullptr);
    return env;
}

RunResult run(const std::string& args, const std::string& stdin_file = "") {
    std::string cmd = binary_path() + " " + args;
    if (!stdin_file.empty()) cmd += " < " + stdin_file;
    cmd += " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WEXITSTATUS(status);
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    REQUIRE(f.good());
    f << content;
}

}  // namespace

TEST_CASE("kernel u closed form") {
    const auto r = run("kernel u --psi quadratic:beta=1 --a 1 --lambda 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "{\"est_error\":0.0,\"method\":\"closed\",\"value\":0.5}\n");
}

TEST_CASE("kernel u forced through the integrator") {
    const auto r = run("kernel u --psi quadratic:beta=1 --a 1 --lambda 1 --ode");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"method\":\"ode\"") != std::string::npos);
    CHECK(r.out.find("\"value\":0.5") != std::string::npos);
}

TEST_CASE("kernel laplace with immigration") {
    const auto r = run("kernel laplace --psi quadratic:beta=1 --phi linear:m=1 --a 1 --lambda 1 --x0 0");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"value\":0.5") != std::string::npos);
}

TEST_CASE("kernel v requires the Grey condition") {
    const auto ok = run("kernel v --psi quadratic:beta=1 --a 2");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("\"value\":0.5") != std::string::npos);
    const auto bad = run("kernel v --psi finitejump:alpha=1,pairs=1:1 --a 2");
    CHECK(bad.exit_code == 3);
}

TEST_CASE("mech check") {
    const auto r = run("mech check --psi quadratic:beta=1 --bivar sizebiased");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"grey\":true") != std::string::npos);
    CHECK(r.out.find("\"uv_continuous\":true") != std::string::npos);
    const auto bad = run("mech check --psi quadratic:nope=1");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("tree encode pipeline") {
    write_file("cli_fixture.luk", "LUK v1\n2 1 0 0\n");
    CHECK(run("tree encode --to height --in cli_fixture.luk").out == "0 1 2 1\n");
    CHECK(run("tree encode --to contour --in cli_fixture.luk").out == "0 1 2 1 0 1 0\n");
    CHECK(run("tree encode --to paren --in cli_fixture.luk").out == "PAREN v1\n(())()\n");
    // PAREN back to LUK closes the loop.
    write_file("cli_fixture.paren", "PAREN v1\n(())()\n");
    CHECK(run("tree encode --to luk --in cli_fixture.paren").out == "LUK v1\n2 1 0 0\n");
    std::remove("cli_fixture.luk");
    std::remove("cli_fixture.paren");
}

TEST_CASE("tree sampling is seed-deterministic and checkable") {
    const auto a = run("tree sample-gw --mu geometric:q=0.5 --seed 5");
    const auto b = run("tree sample-gw --mu geometric:q=0.5 --seed 5");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("LUK v1\n", 0) == 0);

    write_file("cli_sample.luk", a.out);
    const auto check = run("tree check --in cli_sample.luk");
    CHECK(check.exit_code == 0);
    CHECK(check.out.find("\"ok\":true") != std::string::npos);
    std::remove("cli_sample.luk");

    const auto gwi = run("tree sample-gwi --mu geometric:q=0.5 --r sizebiased --depth 6 --seed 9 --bush-depth-cap 8");
    CHECK(gwi.exit_code == 0);
    CHECK(gwi.out.rfind("SIN v1\n", 0) == 0);
}

TEST_CASE("malformed tree input exits 2") {
    write_file("cli_bad.luk", "LUK v1\n2 0\n");
    CHECK(run("tree encode --to height --in cli_bad.luk").exit_code == 2);
    std::remove("cli_bad.luk");
}

TEST_CASE("verify with missing config exits 2") {
    CHECK(run("verify strong-gwi --config missing.cfg").exit_code == 2);
}

TEST_CASE("unknown flags are rejected") {
    CHECK(run("kernel u --psi quadratic:beta=1 --a 1 --lambda 1 --bogus 3").exit_code == 2);
    CHECK(run("frobnicate").exit_code == 2);
}

TEST_CASE("verify extinction from a config file") {
    write_file("cli_ext.cfg",
               "[extinction]\n"
               "mu = geometric:q=0.5\n"
               "delta = 1\n"
               "p_ladder = 25,50,100\n");
    const auto r = run("verify extinction --config cli_ext.cfg");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"pass\": true") != std::string::npos);
    CHECK(r.out.find("\"experiment\": \"extinction\"") != std::string::npos);
    // full resolved config echoed, defaults included
    CHECK(r.out.find("\"gamma_rule\": \"p\"") != std::string::npos);
    CHECK(r.out.find("\"floor\"") != std::string::npos);

    const auto csv = run("verify extinction --config cli_ext.cfg --format csv");
    CHECK(csv.exit_code == 0);
    CHECK(csv.out.rfind("key,empirical,target,stderr,n\n", 0) == 0);
    std::remove("cli_ext.cfg");
}

TEST_CASE("verify size-biased from a config file") {
    write_file("cli_sb.cfg",
               "[size-biased]\n"
               "mu = geometric:q=0.5\n"
               "depth = 1\n"
               "n_list = 1,5,10,50\n"
               "offspring_cap = 32\n");
    const auto r = run("verify size-biased --config cli_sb.cfg");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"pass\": true") != std::string::npos);
    std::remove("cli_sb.cfg");
}

TEST_CASE("verify output bytes are worker-independent") {
    write_file("cli_sg.cfg",
               "[strong-gwi]\n"
               "mu = geometric:q=0.5\n"
               "nu = poisson:m=1\n"
               "p = 25\n"
               "n = 2000\n"
               "tolerance = 0.2\n"
               "seed = 13\n");
    const auto w1 = run("verify strong-gwi --config cli_sg.cfg --workers 1");
    const auto w4 = run("verify strong-gwi --config cli_sg.cfg --workers 4");
    CHECK(w1.exit_code == 0);
    CHECK(w1.out == w4.out);
    std::remove("cli_sg.cfg");
}
