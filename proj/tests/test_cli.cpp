#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "twoell/cli.hpp"

using namespace twoell;

namespace {

int run(std::vector<std::string> args, std::string* out = nullptr) {
    args.insert(args.begin(), "twoell_cli");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int rc = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
    if (out) *out = o.str();
    return rc;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

std::filesystem::path tmp(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("twoell_cli_test_" + name);
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(run({}) == 1);
    CHECK(run({"nonsense"}) == 1);
    CHECK(run({"chart", "--alpha-sq", "-1"}) == 1);
    CHECK(run({"chart", "--tol", "1e-3"}) == 1);
    CHECK(run({"chart", "--format", "xml"}) == 1);
    CHECK(run({"eigenfunction", "--n", "3/4"}) == 1);
    CHECK(run({"--help"}) == 0);
}

TEST_CASE("eigenvalues at q1 = 0") {
    std::string out;
    REQUIRE(run({"eigenvalues", "--alpha-sq", "0.0625", "--q1", "0", "--lambda-max", "16.5"}, &out) == 0);
    CHECK(out.rfind("# twoell", 0) == 0);
    std::istringstream in(out);
    std::string line;
    std::vector<double> values;
    bool body = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!body) {
            CHECK(line == "lambda,branch,multiplicity,members");
            body = true;
            continue;
        }
        values.push_back(std::stod(line.substr(0, line.find(','))));
    }
    const double expected[] = {0, 0.25, 1, 2.25, 4, 6.25, 9, 12.25, 16};
    REQUIRE(values.size() == 9);
    for (int i = 0; i < 9; ++i) CHECK(values[i] == doctest::Approx(expected[i]).epsilon(1e-8));
}

TEST_CASE("chart with overlay is byte-identical across runs") {
    const auto a = tmp("a.csv"), b = tmp("b.csv");
    const std::vector<std::string> base{"chart", "--alpha-sq", "0.25", "--q-max", "2", "--curves", "3", "--q-steps", "10",
                                        "--overlay-mathieu"};
    auto args = base;
    args.insert(args.end(), {"--output", a.string()});
    REQUIRE(run(args) == 0);
    args = base;
    args.insert(args.end(), {"--output", b.string(), "--threads", "2"});
    REQUIRE(run(args) == 0);
    // the thread count is part of the recorded config; compare bodies
    auto body = [](const std::string& s) { return s.substr(s.find("alpha_sq,")); };
    CHECK(body(slurp(a)) == body(slurp(b)));
    const auto ov = tmp("a.overlay.csv");
    REQUIRE(std::filesystem::exists(ov));
    CHECK(slurp(ov).find("order,kind,q1,lambda") != std::string::npos);
    REQUIRE(run({"chart", "--alpha-sq", "0.25", "--q-max", "2", "--curves", "3", "--q-steps", "10", "--output", a.string()}) == 0);
    const std::string first = slurp(a);
    REQUIRE(run({"chart", "--alpha-sq", "0.25", "--q-max", "2", "--curves", "3", "--q-steps", "10", "--output", a.string()}) == 0);
    CHECK(slurp(a) == first);
}

TEST_CASE("config file with flag override") {
    const auto cfg = tmp("run.toml"), o1 = tmp("c1.csv");
    std::ofstream(cfg) << "[grid]\nalpha-sq = 1.0\nn-theta = 4\nn-mu = 2\nmu-max = 1.0\n";
    REQUIRE(run({"--config", cfg.string(), "grid", "--alpha-sq", "0.25", "--output", o1.string()}) == 0);
    const std::string s = slurp(o1);
    CHECK(s.find("alpha-sq=0.25") != std::string::npos);
    CHECK(s.find("n-theta=4") != std::string::npos);
}

TEST_CASE("json outputs parse") {
    std::string out;
    REQUIRE(run({"grid", "--format", "json", "--n-theta", "4", "--n-mu", "2", "--mu-max", "1"}, &out) == 0);
    const auto j = io::json::parse(out);
    CHECK(j["polylines"].size() == 6);
    REQUIRE(run({"eigenfunction", "--format", "json", "--q1", "1", "--n", "1/2", "--samples", "11"}, &out) == 0);
    const auto e = io::json::parse(out);
    CHECK(e["meta"]["n"] == "1/2");
    CHECK(e["table"].size() == 11);
    REQUIRE(run({"discriminant", "--lambda", "0.25", "--q1", "0", "--format", "json"}, &out) == 0);
    CHECK(io::json::parse(out)["verdict"] == "boundary");
}

TEST_CASE("validate reports every property") {
    std::string out;
    CHECK(run({"validate"}, &out) == 0);
    CHECK(out.find("fail") == std::string::npos);
    CHECK(out.find("discriminant.route_agreement") != std::string::npos);
}
