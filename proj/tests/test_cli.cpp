#include <gtest/gtest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli/run_config.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

fs::path scratch_dir() {
    fs::path d = fs::temp_directory_path() / ("esn_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

Run run_cli(const std::string& args, const std::string& env = "") {
    static fs::path dir = scratch_dir();
    fs::path out = dir / "stdout", err = dir / "stderr";
    std::string cmd = env + (env.empty() ? "" : " ") + "'" ESN_EXTREMES_PATH "' " + args + " >'" + out.string() +
                      "' 2>'" + err.string() + "'";
    int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

} // namespace

TEST(CliGolden, ConstantsNormalQuantile) {
    auto r = run_cli("constants --alpha 0 --tau 0 --ln-n 4.60517");
    ASSERT_EQ(r.code, 0) << r.err;
    auto l = lines(r.out);
    ASSERT_EQ(l.size(), 2u);
    EXPECT_EQ(l[0], "alpha,tau,ln_n,a_n,b_n,alpha_n,beta_n,residual");
    EXPECT_NE(l[1].find(",2.3263478"), std::string::npos) << l[1];
}

TEST(CliGolden, EvalAtZero) {
    auto r = run_cli("eval --alpha 0 --tau 0 --x 0");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out,
              "x,pdf,cdf,survival,log_survival\n"
              "0,0.39894228040143268,0.5,0.5,-0.69314718055994531\n");
}

TEST(CliGolden, CsvDialect) {
    auto r = run_cli("bounds --alpha 1 --tau 0 --x-min 1 --x-max 3 --x-steps 3");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.find('\r'), std::string::npos);
    auto l = lines(r.out);
    ASSERT_EQ(l.size(), 4u);
    EXPECT_EQ(l[0], "x,case_id,lower,ratio_oracle,upper,sandwich_ok");
    EXPECT_EQ(l[2].substr(0, 24), "2,PosAlpha_PosArg,0.4,0.");
    EXPECT_NE(l[2].find(",0.51387222915827075,true"), std::string::npos) << l[2];
}

TEST(CliGolden, ByteIdenticalReruns) {
    for (const char* args : {"constants --alpha -0.5 --tau -1 --ln-n 10 --ln-n 1000",
                             "bounds --alpha -1 --tau 0 --x-steps 12 --format json",
                             "tail --alpha 0.5 --tau 1",
                             "eval --alpha 2 --tau -1 --x-min -4 --x-max 4 --x-steps 9 --precision 40",
                             "simulate --alpha -1 --tau 0 --block-size 2000 --replicates 200 --seed 17",
                             "simulate --block-size 500 --replicates 100 --normalization closed --format json"}) {
        auto a = run_cli(args), b = run_cli(args);
        ASSERT_EQ(a.code, 0) << args << "\n" << a.err;
        EXPECT_EQ(a.out, b.out) << args;
        EXPECT_EQ(a.err, b.err) << args;
    }
}

TEST(CliGolden, SeedChangesSimulation) {
    auto a = run_cli("simulate --block-size 500 --replicates 50 --seed 1");
    auto b = run_cli("simulate --block-size 500 --replicates 50 --seed 2");
    EXPECT_NE(a.out, b.out);
}

TEST(CliGolden, SimulateSummary) {
    auto csv = run_cli("simulate --block-size 1000 --replicates 300 --seed 5");
    ASSERT_EQ(csv.code, 0) << csv.err;
    EXPECT_EQ(lines(csv.out)[0], "replicate,maximum,normalized");
    EXPECT_EQ(lines(csv.out).size(), 301u);
    auto summary = nlohmann::json::parse(csv.err);
    EXPECT_GT(summary["ks_statistic"].get<double>(), 0);
    EXPECT_EQ(summary["normalization"], "exact");

    auto json = run_cli("simulate --block-size 1000 --replicates 300 --seed 5 --format json");
    ASSERT_EQ(json.code, 0);
    EXPECT_TRUE(json.err.empty());
    auto doc = nlohmann::json::parse(json.out);
    EXPECT_EQ(doc["summary"]["ks_statistic"], summary["ks_statistic"]);
    EXPECT_EQ(doc["rows"].size(), 300u);
}

TEST(CliGolden, JsonMatchesCsv) {
    auto csv = run_cli("bounds --alpha -2 --tau 1 --x-min 0.25 --x-max 1 --x-steps 4");
    auto json = run_cli("bounds --alpha -2 --tau 1 --x-min 0.25 --x-max 1 --x-steps 4 --format json");
    ASSERT_EQ(csv.code, 0) << csv.err;
    ASSERT_EQ(json.code, 0) << json.err;
    auto doc = nlohmann::json::parse(json.out);
    EXPECT_EQ(doc["command"], "bounds");
    EXPECT_EQ(doc["precision_digits"], 34);
    auto l = lines(csv.out);
    ASSERT_EQ(doc["rows"].size() + 1, l.size());
    // x = 0.5 puts alpha x + tau on zero.
    auto boundary = doc["rows"][1];
    EXPECT_EQ(boundary[1], "boundary");
    EXPECT_TRUE(boundary[2].is_null());
    EXPECT_TRUE(boundary[4].is_null());
    EXPECT_EQ(l[2].substr(0, 15), "0.5,boundary,,0");
    // Same 17 digits in both formats.
    std::string ratio = l[2].substr(14, l[2].size() - 16);
    EXPECT_NE(json.out.find("[0.5,\"boundary\",null," + ratio + ",null,null]"), std::string::npos) << ratio;
    EXPECT_EQ(doc["rows"][0][5], true);
}

TEST(CliGolden, OutPathMatchesStdout) {
    fs::path target = fs::temp_directory_path() / ("esn_cli_out_" + std::to_string(::getpid()) + ".csv");
    auto to_file = run_cli("tail --alpha -1 --tau 0 --x-steps 3 --out '" + target.string() + "'");
    auto to_stdout = run_cli("tail --alpha -1 --tau 0 --x-steps 3");
    ASSERT_EQ(to_file.code, 0) << to_file.err;
    EXPECT_TRUE(to_file.out.empty());
    EXPECT_EQ(slurp(target), to_stdout.out);
    fs::remove(target);
}

TEST(CliExitCodes, Usage) {
    for (const char* args : {"", "frobnicate", "eval --bogus 1", "eval --x 1 --x-min 0",
                             "bounds --x-min 3 --x-max 1", "bounds --x-steps 0", "eval --precision 14",
                             "eval --format xml", "constants", "eval --ln-n 5", "simulate --replicates 0",
                             "constants --ln-n 0.5", "bounds --x -1"}) {
        auto r = run_cli(args);
        EXPECT_EQ(r.code, 2) << args << "\n" << r.err;
        EXPECT_FALSE(r.err.empty()) << args;
        EXPECT_TRUE(r.out.empty()) << args;
    }
    EXPECT_EQ(run_cli("eval --x 1", "ESN_PRECISION=12").code, 2);
    EXPECT_EQ(run_cli("eval --x 1", "ESN_PRECISION=abc").code, 2);
}

TEST(CliExitCodes, RegimeViolation) {
    for (const char* cmd : {"bounds", "tail", "constants --ln-n 5", "rates --ln-n 50", "simulate"}) {
        auto r = run_cli(std::string(cmd) + " --alpha -1 --tau 2");
        EXPECT_EQ(r.code, 3) << cmd;
        EXPECT_NE(r.err.find("alpha + tau < 0 and 1 + alpha^2 + alpha*tau > 0"), std::string::npos) << r.err;
        EXPECT_NE(r.err.find("alpha=-1, tau=2"), std::string::npos) << r.err;
    }
    // The density itself is defined for every slant.
    EXPECT_EQ(run_cli("eval --alpha -1 --tau 2 --x 0.5").code, 0);
}

TEST(CliExitCodes, NumericFailures) {
    auto r = run_cli("rates --ln-n 100 --precision 20");
    EXPECT_EQ(r.code, 4);
    EXPECT_NE(r.err.find("h_function"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("precision error"), std::string::npos) << r.err;
    auto budget = run_cli("simulate --block-size 1000000 --replicates 2000");
    EXPECT_EQ(budget.code, 4);
    EXPECT_NE(budget.err.find("budget"), std::string::npos) << budget.err;
}

TEST(CliExitCodes, Help) {
    auto r = run_cli("--help");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST(CliParse, PrecisionFromEnvironment) {
    const char* argv[] = {"esn-extremes", "eval", "--x", "1"};
    ::setenv("ESN_PRECISION", "48", 1);
    EXPECT_EQ(esn::cli::parse_args(4, argv).precision_digits, 48);
    const char* argv2[] = {"esn-extremes", "eval", "--x", "1", "--precision", "20"};
    EXPECT_EQ(esn::cli::parse_args(6, argv2).precision_digits, 20);
    ::unsetenv("ESN_PRECISION");
    EXPECT_EQ(esn::cli::parse_args(4, argv).precision_digits, 34);
}

TEST(CliParse, Grids) {
    const char* argv[] = {"esn-extremes", "bounds", "--x-min", "1", "--x-max", "2", "--x-steps", "5"};
    auto cfg = esn::cli::parse_args(8, argv);
    auto g = cfg.x_grid();
    ASSERT_EQ(g.size(), 5u);
    EXPECT_DOUBLE_EQ(g[1], 1.25);
    EXPECT_EQ(g.back(), 2.0);
    const char* dflt[] = {"esn-extremes", "rates", "--ln-n", "100", "--ln-n", "1000"};
    cfg = esn::cli::parse_args(6, dflt);
    EXPECT_EQ(cfg.x_grid(), (std::vector<double>{-1, 0, 1, 2}));
    EXPECT_EQ(cfg.ln_n_list, (std::vector<double>{100, 1000}));
}
