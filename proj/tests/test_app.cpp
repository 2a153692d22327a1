#include "mixhess/commands.hpp"
#include "mixhess/config.hpp"
#include "mixhess/errors.hpp"
#include "mixhess/io.hpp"
#include "mixhess/problems.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mixhess;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("mixhess_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

Config repo_config(const std::string& name) { return Config::load(fs::path(MIXHESS_SOURCE_DIR) / "configs" / name); }

int run(const std::string& command, const Config& c, const fs::path& out) {
    std::ostringstream log;
    CommandOptions o;
    o.out = out;
    o.log = &log;
    return run_command(command, c, o);
}

}  // namespace

TEST_CASE("config parse and round trip") {
    const auto c = Config::parse("[b]\ny = 2 3\n# note\n[a]\nx = 1.5\nflag = true\n");
    CHECK(c.get_double("a", "x") == 1.5);
    CHECK(c.get_bool("a", "flag"));
    CHECK(c.get_ints("b", "y") == std::vector<std::int64_t>{2, 3});
    const auto text = c.serialize();
    CHECK(text == "[a]\nflag = true\nx = 1.5\n\n[b]\ny = 2 3\n");
    CHECK(Config::parse(text) == c);
    CHECK_THROWS_AS(Config::parse("[a]\nx\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("x = 1\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("[a]\nx = 1\nx = 2\n"), ConfigError);
    CHECK_THROWS_AS(c.get_int("a", "x"), ConfigError);
    CHECK_THROWS_AS(c.get_double("a", "missing"), ConfigError);
}

TEST_CASE("shipped configs satisfy their schemas") {
    CHECK_NOTHROW(check_schema("identities", repo_config("identities.cfg")));
    CHECK_NOTHROW(check_schema("solve", repo_config("manufactured.cfg")));
    CHECK_NOTHROW(check_schema("solve", repo_config("radial_solve.cfg")));
    CHECK_NOTHROW(check_schema("continue", repo_config("radial_continue.cfg")));
    CHECK_NOTHROW(check_schema("oracle", repo_config("radial_oracle.cfg")));
    CHECK_NOTHROW(check_schema("compare", repo_config("radial_compare.cfg")));
    auto c = repo_config("radial_solve.cfg");
    c.set("grid", "typo", "1");
    CHECK_THROWS_AS(check_schema("solve", c), ConfigError);
    c.erase("grid", "typo");
    c.erase("solver", "armijo");
    CHECK_THROWS_AS(check_schema("solve", c), ConfigError);
}

TEST_CASE("field dump round trip") {
    auto grid = std::make_shared<const Grid>(build_grid(DomainSpec::ball(2, 1.0), 9, 1.2));
    const Manufactured m;
    const ScalarField u(grid, [&](std::span<const double> t) { return m.value(t); });
    const auto dir = scratch("dump");
    write_field(dir / "f.txt", u, 2);
    const auto dump = read_field_dump(dir / "f.txt");
    CHECK(dump.n == 2);
    CHECK(dump.N == 9);
    CHECK(dump.values.size() == 9u * 9 * 9 * 9);
    const auto v = field_from_dump(dump, grid);
    for (std::size_t i = 0; i < u.values().size(); ++i) CHECK(v.values()[i] == u.values()[i]);
    auto other = std::make_shared<const Grid>(build_grid(DomainSpec::ball(2, 1.0), 11, 1.2));
    CHECK_THROWS_AS(field_from_dump(dump, other), Error);
}

TEST_CASE("command exit codes") {
    const auto dir = scratch("cmd");
    auto id = repo_config("identities.cfg");
    id.set("identities", "samples", "200");
    id.set("identities", "operator_samples", "50");
    CHECK(run("identities", id, dir / "id") == exit_ok);
    CHECK(fs::exists(dir / "id" / "identities.csv"));
    id.set("identities", "inject_fault", "true");
    CHECK(run("identities", id, dir / "fault") == exit_property_violation);

    auto solve = repo_config("radial_solve.cfg");
    solve.set("grid", "N", "9");
    CHECK(run("solve", solve, dir / "solve") == exit_ok);
    CHECK(fs::exists(dir / "solve" / "field.txt"));
    CHECK(fs::exists(dir / "solve" / "estimate_report.json"));

    auto verify = repo_config("radial_solve.cfg");
    verify.erase("grid", "N");
    verify.set("verify", "field", (dir / "solve" / "field.txt").string());
    CHECK(run("verify", verify, dir / "verify") == exit_ok);

    solve.set("grid", "N", "7");
    CHECK(run("solve", solve, dir / "bad") == exit_config_error);
    solve.set("grid", "N", "9");
    solve.set("problem", "eps", "-1");
    CHECK(run("solve", solve, dir / "bad") == exit_config_error);
    CHECK(run("nonsense", solve, dir / "bad") == exit_config_error);
}

TEST_CASE("solve output is reproducible") {
    const auto dir = scratch("repro");
    auto c = repo_config("manufactured.cfg");
    c.set("grid", "N", "9");
    REQUIRE(run("solve", c, dir / "a") == exit_ok);
    REQUIRE(run("solve", c, dir / "b") == exit_ok);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    };
    CHECK(slurp(dir / "a" / "field.txt") == slurp(dir / "b" / "field.txt"));
}
