#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "alleezone/cli.hpp"

using alleezone::cli::run;
using nlohmann::json;

namespace {
struct Capture {
    std::ostringstream out, err;
    int code = -1;
};

Capture invoke(const std::vector<std::string>& args) {
    Capture c;
    c.code = run(args, c.out, c.err);
    return c;
}
} // namespace

TEST_CASE("eigen subcommand emits the spectral summary") {
    const auto c = invoke({"eigen", "--L", "10", "--r", "0.2", "--a", "0.1", "--bc", "NN",
                           "--alpha", "3", "--l", "4"});
    REQUIRE(c.code == 0);
    const auto j = json::parse(c.out.str());
    CHECK(j["command"] == "eigen");
    CHECK(j["case_tag"] == "H1");
    CHECK(j["lambda1"].get<double>() < 0.0);
    CHECK(j["params"]["L"] == 10.0);
    CHECK(j["version"] == "0.1.0");
    for (const auto& [name, value] : j["transcendental_residuals"].items()) {
        (void)name;
        CHECK(std::abs(value.get<double>()) <= 1e-6);
    }
    CHECK(j["predicted_fate"] == "Persist");
}

TEST_CASE("identical flags give byte-identical output") {
    const std::vector<std::string> args{"eigen", "--bc", "DD", "--alpha", "2.5", "--l", "3"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    REQUIRE(a.code == 0);
    CHECK(a.out.str() == b.out.str());
}

TEST_CASE("design subcommand reports the centre placement for DD") {
    const auto c = invoke({"design", "--L", "10", "--r", "0.2", "--a", "0.1", "--bc", "DD",
                           "--l", "3"});
    REQUIRE(c.code == 0);
    const auto j = json::parse(c.out.str());
    REQUIRE(j["alpha_star"].is_array());
    CHECK(j["alpha_star"][0].get<double>() == 3.5);
    CHECK(j["verdict_at_optimum"] == "Persist");
    CHECK(j["l_bars"].contains("l1_bar"));
}

TEST_CASE("sweep csv output has metadata, header row and LF endings") {
    const auto c = invoke({"sweep", "--bc", "NN", "--alpha-count", "3", "--l-count", "2",
                           "--l-min", "2", "--l-max", "4", "--alpha-min", "0", "--alpha-max",
                           "6", "--format", "csv"});
    REQUIRE(c.code == 0);
    const auto text = c.out.str();
    CHECK(text.rfind("# allee_zone", 0) == 0);
    CHECK(text.find("alpha,l,lambda1\n") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);
    // 3 alpha x 2 l data lines + header + comment
    int lines = 0;
    for (char ch : text)
        if (ch == '\n') ++lines;
    CHECK(lines == 8);
}

TEST_CASE("oracle-compare columns agree to the acceptance budget") {
    const auto c = invoke({"oracle-compare", "--bc", "ND", "--alpha-count", "2", "--l-count",
                           "2", "--alpha-min", "1", "--alpha-max", "4", "--l-min", "3",
                           "--l-max", "5"});
    REQUIRE(c.code == 0);
    const auto j = json::parse(c.out.str());
    REQUIRE(j["rows"].is_array());
    REQUIRE(!j["rows"].empty());
    for (const auto& row : j["rows"]) CHECK(row["abs_diff"].get<double>() <= 1e-6);
}

TEST_CASE("simulate reports fate consistent with the eigenvalue sign") {
    const auto c = invoke({"simulate", "--bc", "DD", "--L", "5", "--alpha", "1", "--l", "2",
                           "--u0", "0.5", "--t-end", "300", "--dx", "0.05"});
    REQUIRE(c.code == 0);
    const auto j = json::parse(c.out.str());
    CHECK(j["result"]["fate"] == "Extinct");
    CHECK(j["result"]["lambda1"].get<double>() > 0.0);
    CHECK(j["result"]["sign_agreement"] == true);
}

TEST_CASE("validation failures exit with code 2") {
    CHECK(invoke({"eigen", "--bc", "XX"}).code == 2);
    CHECK(invoke({"eigen", "--alpha", "9", "--l", "4"}).code == 2);
    CHECK(invoke({"eigen", "--no-such-flag", "1"}).code == 2);
    CHECK(invoke({}).code == 2);
}

TEST_CASE("raw Robin coefficients are accepted") {
    const auto c = invoke({"eigen", "--bc-raw", "1,1,1,0", "--alpha", "2", "--l", "4"});
    REQUIRE(c.code == 0);
    const auto j = json::parse(c.out.str());
    CHECK(j["params"]["bc"] == "raw");
    CHECK(j["params"]["bc_coefficients"][1] == 1.0);
}
