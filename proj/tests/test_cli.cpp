#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "viscowave/viscowave.hpp"

using namespace viscowave;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("viscowave_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    Result run(const std::string& args) {
        const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
        const std::string cmd =
            std::string(VISCOWAVE_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
        const int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
    }

    fs::path dir_;
};

const char* kNewtonian = R"({"rho": 1, "creep": {"a": 0, "b": 1}})";
const char* kElastic = R"({"rho": 1, "creep": {"a": 1, "b": 0}})";
const char* kAtom = R"({"rho": 1, "bernstein": {"a": 0, "b": 0, "measure": {"atoms": [[1, 1]]}}})";

std::string config(const std::string& material, const std::string& extra = "") {
    return std::string(R"({"schema_version": 1, "material": )") + material + extra + "}";
}

AttenuationCurve parse_csv(const std::string& text) {
    std::istringstream is(text);
    return read_curve_csv(is);
}

} // namespace

TEST_F(Cli, CurvesNewtonian) {
    auto cfg = write("c.json", config(kNewtonian));
    auto csv = dir_ / "out.csv";
    auto r = run("curves --config " + cfg.string() + " --grid 1e-2:1e2:100:log --out " + csv.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const auto c = parse_csv(slurp(csv));
    ASSERT_EQ(c.rows.size(), 100u);
    for (const auto& row : c.rows) EXPECT_NEAR(row.atten, std::sqrt(row.omega / 2), 1e-14 * std::sqrt(row.omega));
}

TEST_F(Cli, CurvesElasticZeroAttenuation) {
    auto cfg = write("c.json", config(kElastic, R"(, "grid": "1:10:20:lin")"));
    auto r = run("curves --config " + cfg.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const auto c = parse_csv(r.out);
    ASSERT_EQ(c.rows.size(), 20u);
    for (const auto& row : c.rows) EXPECT_EQ(row.atten, 0.0);
}

TEST_F(Cli, MaterialFileByPath) {
    write("mat.json", kNewtonian);
    auto cfg = write("c.json", config("\"mat.json\""));
    EXPECT_EQ(run("curves --config " + cfg.string() + " --grid 1:2:3:lin").code, 0);
}

TEST_F(Cli, MissingMaterialFileIsExit2) {
    auto cfg = write("c.json", config("\"missing.json\""));
    auto r = run("curves --config " + cfg.string());
    EXPECT_EQ(r.code, 2);
    auto err = Json::parse(r.err);
    EXPECT_EQ(err["error"], "schema");
}

TEST_F(Cli, BadFlagsAreExit2) {
    auto cfg = write("c.json", config(kNewtonian));
    EXPECT_EQ(run("curves --config " + cfg.string() + " --grid 1:2:x:log").code, 2);
    EXPECT_EQ(run("curves --config " + cfg.string() + " --grid 0:2:3:log").code, 2);
    EXPECT_EQ(run("fit --config " + cfg.string() + " --band 5:1").code, 2);
    EXPECT_EQ(run("curves").code, 2);
    EXPECT_EQ(run("nonsense --config x").code, 2);
    auto bad_version = write("v.json", R"({"schema_version": 7, "material": {"creep": {"b": 1}}})");
    EXPECT_EQ(run("curves --config " + bad_version.string()).code, 2);
}

TEST_F(Cli, BoundAtom) {
    auto cfg = write("c.json", config(kAtom, R"(, "grid": "1e-2:1e6:200:log")"));
    auto r = run("bound --config " + cfg.string());
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["K"].get<double>(), 0.0);
    EXPECT_NEAR(j["L"].get<double>(), 1.18921, 5e-6);
    EXPECT_TRUE(j["holds"].get<bool>());
}

TEST_F(Cli, BoundElasticHoldsAndCorruptedConstantsFail) {
    auto cfg = write("c.json", config(kElastic));
    EXPECT_EQ(run("bound --config " + cfg.string()).code, 0);
    auto r = run("bound --config " + cfg.string() + " --constant-scale 0.5");
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(Json::parse(r.out)["holds"].get<bool>());
}

TEST_F(Cli, ClassifyCreepExample) {
    auto half = write("h.json", R"({"function": {"kind": "creep_example", "alpha": 0.5}, "classify": {"order": 8}})");
    auto r = run("classify --config " + half.string());
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = Json::parse(r.out);
    EXPECT_TRUE(j["crf"]["pass"].get<bool>());
    EXPECT_TRUE(j["bernstein"]["pass"].get<bool>());

    auto three_halves =
        write("t.json", R"({"function": {"kind": "creep_example", "alpha": 1.5}, "classify": {"order": 8}})");
    r = run("classify --config " + three_halves.string());
    ASSERT_EQ(r.code, 0) << r.err;
    j = Json::parse(r.out);
    EXPECT_TRUE(j["crf"]["pass"].get<bool>());
    EXPECT_FALSE(j["bernstein"]["pass"].get<bool>());
    EXPECT_NEAR(j["bernstein"]["witness"].get<double>(), std::pow(1.0 / 3.0, 2.0 / 3.0), 0.02);
}

TEST_F(Cli, ClassifySquareIsNotCrf) {
    auto cfg = write("c.json", R"({"function": {"kind": "power", "a": 0, "b": 0, "c": 1, "alpha": 2},
                                   "grid": "0:1:50:lin"})");
    auto r = run("classify --config " + cfg.string());
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_FALSE(Json::parse(r.out)["crf"]["pass"].get<bool>());
}

TEST_F(Cli, ClassifyPrecisionErrorIsDistinct) {
    auto cfg = write("c.json", R"({"function": {"kind": "creep_example", "alpha": 0.5},
                                   "grid": "1:2:5:lin", "classify": {"order": 40, "h": 1e-6}})");
    auto r = run("classify --config " + cfg.string());
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["bernstein"]["status"], "precision_error");
    EXPECT_TRUE(j["bernstein"]["pass"].is_null());
}

TEST_F(Cli, ClassifyStieltjesIncludesCbf) {
    auto cfg = write("c.json", R"({"function": {"kind": "stieltjes", "a": 0, "b": 0, "measure": {"atoms": [[1, 1]]}},
                                   "grid": "0.1:3:30:lin", "classify": {"order": 4, "h": 0.1}})");
    auto r = run("classify --config " + cfg.string());
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = Json::parse(r.out);
    EXPECT_TRUE(j["cbf"]["pass"].get<bool>());
    EXPECT_TRUE(j["bernstein"]["pass"].get<bool>());
}

TEST_F(Cli, GreenElastic) {
    auto cfg = write("c.json", config(kElastic, R"(, "x": 2.0)"));
    auto sig = dir_ / "sig.csv";
    auto r = run("green --config " + cfg.string() + " --out " + sig.string());
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = Json::parse(r.out);
    EXPECT_NEAR(j["front"]["front_arrival"].get<double>(), 2.0, 0.02);
    EXPECT_LT(j["front"]["leakage"].get<double>(), 1e-3);
    EXPECT_EQ(slurp(sig).substr(0, 4), "t,u\n");
}

TEST_F(Cli, GreenNewtonianHasNullFront) {
    auto cfg = write("c.json", config(kNewtonian, R"(, "x": 1.0)"));
    auto r = run("green --config " + cfg.string());
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(Json::parse(r.out)["front"]["front_arrival"].is_null());
}

TEST_F(Cli, GreenZeroWindow) {
    auto cfg = write("c.json", config(kElastic, R"(, "x": 2.0, "window": {"amplitude": 0})"));
    auto sig = dir_ / "sig.csv";
    ASSERT_EQ(run("green --config " + cfg.string() + " --out " + sig.string()).code, 0);
    std::istringstream is(slurp(sig));
    std::string line;
    std::getline(is, line);
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        EXPECT_EQ(std::stod(line.substr(line.find(',') + 1)), 0.0);
    }
    EXPECT_EQ(rows, 4096u);
}

TEST_F(Cli, FitNewtonian) {
    auto cfg = write("c.json", config(kNewtonian));
    auto r = run("fit --config " + cfg.string() + " --band 1:100");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(Json::parse(r.out)["alpha"].get<double>(), 0.5, 0.01);
}

TEST_F(Cli, FitSyntheticCsv) {
    std::ostringstream csv;
    AttenuationCurve c;
    for (double w : log_grid(0.1, 100, 40)) c.rows.push_back({w, 0, 0, 3 * std::pow(w, 1.7), 0});
    write_curve_csv(csv, c);
    write("synthetic.csv", csv.str());
    auto cfg = write("c.json", R"({"curve_csv": "synthetic.csv"})");
    auto r = run("fit --config " + cfg.string());
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = Json::parse(r.out);
    EXPECT_NEAR(j["A"].get<double>(), 3.0, 1e-10);
    EXPECT_NEAR(j["alpha"].get<double>(), 1.7, 1e-12);
    EXPECT_NEAR(j["r2"].get<double>(), 1.0, 1e-12);
}

TEST_F(Cli, FitElasticIsExit3) {
    auto cfg = write("c.json", config(kElastic));
    auto r = run("fit --config " + cfg.string());
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(Json::parse(r.err)["error"], "fit");
}

TEST_F(Cli, DeterministicOutput) {
    auto cfg = write("c.json", config(R"({"rho": 1, "creep": {"a": 1, "kernel": [{"kind": "power", "alpha": 0.3}]}})"));
    auto a = dir_ / "a.csv", b = dir_ / "b.csv";
    ASSERT_EQ(run("curves --config " + cfg.string() + " --out " + a.string()).code, 0);
    ASSERT_EQ(std::system(("VISCOWAVE_THREADS=1 " + std::string(VISCOWAVE_CLI) + " curves --config " + cfg.string() +
                           " --out " + b.string())
                              .c_str()),
              0);
    EXPECT_EQ(slurp(a), slurp(b));
    auto r1 = run("bound --config " + cfg.string());
    auto r2 = run("bound --config " + cfg.string());
    EXPECT_EQ(r1.out, r2.out);
}

TEST_F(Cli, ShippedConfigsRun) {
    const fs::path configs = fs::path(VISCOWAVE_SOURCE_DIR) / "configs";
    for (const char* name : {"curves_newtonian.json", "bound_atom.json", "bound_power_solid.json",
                             "classify_creep_example.json", "classify_stieltjes.json", "green_sls.json",
                             "fit_newtonian.json"}) {
        const std::string sub = std::string(name).substr(0, std::string(name).find('_'));
        EXPECT_EQ(run(sub + " --config " + (configs / name).string()).code, 0) << name;
    }
}
