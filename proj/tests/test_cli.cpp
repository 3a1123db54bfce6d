// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run(const std::string& args)
{
    const std::string cmd = std::string(IFLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0)
        r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::size_t data_lines(const std::string& csv)
{
    std::istringstream is(csv);
    std::string line;
    std::size_t n = 0;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#')
            ++n;
    return n == 0 ? 0 : n - 1; // minus header
}

} // namespace

TEST_CASE("bounds subcommand prints the closed forms")
{
    const auto r = run("bounds --c 14 --delta-c 2");
    CHECK(r.status == 0);
    CHECK(r.out.find("0.13397459") != std::string::npos);
    CHECK(r.out.rfind("# ", 0) == 0);

    const auto m = run("bounds --mac --c 2 --r 2");
    CHECK(m.status == 0);
    CHECK(m.out.find("0.666666667") != std::string::npos);
}

TEST_CASE("usage errors exit non-zero")
{
    CHECK(run("bounds").status != 0);
    CHECK(run("no-such-command").status != 0);
    CHECK(run("bounds --c 14 --delta-c -3").status != 0);
}

TEST_CASE("figure subcommands: row count, reproducibility, JSON")
{
    const std::string args = "fig-outage-2tx --c 8 --trials 50 --steps 4 --delta-c-min 0.5 --delta-c-max 4 --seed 5";
    const auto a = run(args);
    REQUIRE(a.status == 0);
    CHECK(data_lines(a.out) == 4);
    CHECK(run(args).out == a.out);

    const auto j = run(args + " --format json");
    REQUIRE(j.status == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc.at("rows").size() == 4);
    CHECK(doc.at("metadata").at("seed") == "5");

    const auto e = run("fig-efficiency --c-min 4 --c-max 6 --steps 2 --trials 50 --seed 3");
    REQUIRE(e.status == 0);
    CHECK(data_lines(e.out) == 2);

    const auto mac = run("mac --mode pdf --n-t 2 --c 2 --trials 2000 --seed 3 --format json");
    REQUIRE(mac.status == 0);
    CHECK(nlohmann::json::parse(mac.out).contains("rows"));
}
