#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "robin/cli.hpp"

using robin::cli::dispatch;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream o, e;
    int code = dispatch(args, o, e);
    return {code, o.str(), e.str()};
}

std::string temp_file(const std::string& name, const std::string& body) {
    auto p = std::filesystem::temp_directory_path() / ("robin_cli_" + name);
    std::ofstream(p) << body;
    return p.string();
}

}  // namespace

TEST_CASE("json writer uses 17 significant digits and keeps key order") {
    nlohmann::ordered_json j;
    j["z"] = 0.1;
    j["a"] = {1, 2.5};
    j["s"] = "x";
    std::string s = robin::cli::write_json(j);
    CHECK(s.find("0.10000000000000001") != std::string::npos);
    CHECK(s.find("\"z\"") < s.find("\"a\""));
    CHECK(json::parse(s)["a"][1] == 2.5);
}

TEST_CASE("torus from-tuple") {
    auto r = run({"torus", "from-tuple", "1", "1", "0", "1", "1", "1"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["a"] == "num:[1,1];den:[1,0,1]");
    CHECK(j["b"] == "num:[1,-1];den:[1,0,1]");
    CHECK(run({"torus", "from-tuple", "2", "4", "0", "1", "1", "1"}).code == 2);
}

TEST_CASE("torus foliation and classify") {
    auto r = run({"torus", "foliation", "1", "1", "0", "1", "1", "1", "--sigma", "1/3,4/3"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["jacobian"] == "num:[1];den:[1]");
    CHECK(j["sigma_same_leaf"] == true);
    auto c = run({"torus", "classify", "--a", j["a"], "--b", j["b"]});
    REQUIRE(c.code == 0);
    CHECK(json::parse(c.out)["tuple"] == json::array({1, 1, 0, 1, 1, 1}));
}

TEST_CASE("lie closure from a shorthand generator file") {
    auto gens = temp_file("e21.json", "[\"E21\"]");
    auto r = run({"lie", "closure", "--n", "3", "--base", "flag", "--gens", gens});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["composition"] == json::array({2, 1}));
    CHECK(j["dim"] == 7);
    auto nested = temp_file("nested.json", "[[[\"0\",0,0],[0,0,0],[0,\"1/2,1\",0]]]");
    auto r2 = run({"lie", "closure", "--n", "3", "--gens", nested});
    REQUIRE(r2.code == 0);
    CHECK(json::parse(r2.out)["composition"] == json::array({1, 2}));
}

TEST_CASE("lie spanning and hopf") {
    auto g = run({"lie", "spanning", "--grassmann", "2", "2"});
    REQUIRE(g.code == 0);
    CHECK(json::parse(g.out)["rank"] == 4);
    auto f = run({"lie", "spanning", "--flag", "3", "--samples", "10"});
    REQUIRE(f.code == 0);
    CHECK(json::parse(f.out)["rank"].get<int>() <= 2);
    auto h = run({"lie", "hopf", "--n", "3"});
    REQUIRE(h.code == 0);
    CHECK(json::parse(h.out)["x0_dim"] == 7);
}

TEST_CASE("green on the unit ball is deterministic") {
    auto dom = temp_file("ball.json", R"({"kind":"ball","n":2,"radius":1})");
    auto a = run({"green", "--domain", dom, "--grid", "12", "--pole", "0,0,0,0"});
    REQUIRE(a.code == 0);
    CHECK(json::parse(a.out)["lambda"].get<double>() == doctest::Approx(-1.0).epsilon(0.05));
    auto b = run({"green", "--domain", dom, "--grid", "12", "--pole", "0,0,0,0"});
    CHECK(a.out == b.out);
    auto csv = run({"green", "--domain", dom, "--grid", "12", "--format", "csv"});
    CHECK(csv.out.rfind("x1,x2,x3,x4,Lambda\n", 0) == 0);
}

TEST_CASE("levi on the translated ball") {
    auto fam = temp_file("fam.json", R"({"kind":"translation","n":2,"a":[[1,0],[0,0]]})");
    auto r = run({"levi", "--family", fam, "--x", "0.6,0,0.8,0"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["k2"].get<double>() == doctest::Approx(1.0));
    CHECK(j["W"].get<double>() == 0.0);
    CHECK(run({"levi", "--family", fam, "--x", "0,0,0,0"}).code == 2);
}

TEST_CASE("exit codes for bad input") {
    CHECK(run({"green", "--domain", "/nonexistent/ball.json"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    auto bad = temp_file("bad.json", "{not json");
    CHECK(run({"lie", "closure", "--n", "3", "--gens", bad}).code == 2);
    auto dom = temp_file("ball2.json", R"({"kind":"ball","n":2,"radius":1})");
    CHECK(run({"green", "--domain", dom, "--grid", "12", "--pole", "0.97,0,0,0"}).code == 2);
    CHECK(run({"green", "--domain", dom, "--c", "-1"}).code == 2);
}
