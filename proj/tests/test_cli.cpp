#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cli_runner.hpp"
#include "qss/report.hpp"
#include "qss/scheme_io.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qss_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static qss::Json read_json(const std::string& p) {
    std::ifstream in(p);
    return qss::Json::parse(in);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, MakeWritesLoadableFiles) {
  ASSERT_EQ(cli::run("make --construction rs --k 2 --q 5 --out " + path("rs25.scheme")).status, 0);
  const qss::Scheme rs = qss::load_scheme(path("rs25.scheme"));
  EXPECT_EQ(rs.name(), "rs_k2_q5");
  EXPECT_EQ(rs.n_total(), 3);

  ASSERT_EQ(cli::run("make --construction ghz --n 3 --q 2 --out " + path("ghz.scheme")).status, 0);
  EXPECT_EQ(qss::load_scheme(path("ghz.scheme")).name(), "ghz_n3_q2");

  ASSERT_EQ(cli::run("make --construction five_qubit --discard 5 --explicit --out " + path("m.scheme")).status, 0);
  const qss::Scheme m = qss::load_scheme(path("m.scheme"));
  EXPECT_EQ(m.discarded(), qss::Positions({4}));
  EXPECT_EQ(m.construction().kind, qss::Construction::Kind::kExplicit);
}

TEST_F(Cli, MakeFieldTooSmallIsUsageError) {
  EXPECT_EQ(cli::run("make --construction rs --k 2 --q 3 --out " + path("x.scheme")).status, 2);
  EXPECT_FALSE(fs::exists(path("x.scheme")));
  EXPECT_EQ(cli::run("make --construction nonsense").status, 2);
  EXPECT_EQ(cli::run("make").status, 2);
  EXPECT_EQ(cli::run("").status, 2);
  EXPECT_EQ(cli::run("frobnicate").status, 2);
}

TEST_F(Cli, AnalyzeCgl) {
  ASSERT_EQ(cli::run("make --construction cgl23 --out " + path("cgl.scheme")).status, 0);
  const cli::Result r = cli::run("analyze " + path("cgl.scheme") + " --out " + path("a.json"));
  EXPECT_EQ(r.status, 0);
  const qss::Json j = read_json(path("a.json"));
  EXPECT_EQ(j["command"], "analyze");
  EXPECT_EQ(j["access"]["ramp"]["k"], 2);
  EXPECT_EQ(j["access"]["ramp"]["k_prime"], 1);
  EXPECT_EQ(j["access"]["rcq_ramp"]["k"], 2);
  EXPECT_EQ(j["access"]["subsets"].size(), 7u);
  EXPECT_EQ(j["qecc"]["params"]["d"], 2);
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_NE(r.out.find("cgl23"), std::string::npos);
}

TEST_F(Cli, AnalyzeGhzToStdout) {
  const cli::Result r = cli::run("analyze --scheme ghz:3:2");
  ASSERT_EQ(r.status, 0);
  const qss::Json j = qss::Json::parse(r.out);
  EXPECT_EQ(j["access"]["ramp"]["k"], 3);
  EXPECT_EQ(j["access"]["ramp"]["k_prime"], 0);
  EXPECT_EQ(j["access"]["prop1"]["all_pass"], true);
}

TEST_F(Cli, AnalyzeCorruptFileIsUsageError) {
  {
    std::ofstream out(path("bad.scheme"));
    out << "name=x\nq=2\nkappa=2\nn=2\nlogical 0\nnot numbers here\n";
  }
  EXPECT_EQ(cli::run("analyze " + path("bad.scheme")).status, 2);
  EXPECT_EQ(cli::run("analyze " + std::string(QSS_FIXTURE_DIR) + "/bad_norm.scheme").status, 2);
  EXPECT_EQ(cli::run("analyze " + path("missing.scheme")).status, 2);
  EXPECT_EQ(cli::run("analyze").status, 2);
  EXPECT_EQ(cli::run("analyze --scheme cgl23 --tol -1").status, 2);
}

TEST_F(Cli, AnalyzeWrongClaimExitsOne) {
  {
    std::ofstream out(path("claim.scheme"));
    out << "name=ghz_claim\nq=2\nkappa=2\nn=3\nclaimed_ramp=2,1,3\nconstruction=ghz\n";
  }
  EXPECT_EQ(cli::run("analyze " + path("claim.scheme") + " --out " + path("c.json")).status, 1);
  EXPECT_EQ(read_json(path("c.json"))["verdict"], "fail");
}

TEST_F(Cli, SimulateRcqCgl) {
  const cli::Result r =
      cli::run("simulate rcq --scheme cgl23 --set 1,2 --rounds 10000 --seed 7 --out " + path("r.json") + " --log " +
               path("r.log"));
  ASSERT_EQ(r.status, 0);
  const qss::Json j = read_json(path("r.json"));
  EXPECT_EQ(j["simulation"]["qber"], 0.0);
  EXPECT_EQ(j["simulation"]["aborted"], false);
  EXPECT_GT(j["simulation"]["final_key_length"].get<int>(), 0);
  EXPECT_EQ(j["config"]["seed"], 7);
  std::ifstream log(path("r.log"));
  std::string first;
  std::getline(log, first);
  EXPECT_EQ(first, "# round t r t' s sifted");
}

TEST_F(Cli, SimulateRcqInterceptAborts) {
  const cli::Result r = cli::run("simulate rcq --scheme cgl23 --set 1,2 --rounds 4000 --seed 1 --noise intercept:1:0");
  ASSERT_EQ(r.status, 0);
  const qss::Json j = qss::Json::parse(r.out);
  EXPECT_EQ(j["simulation"]["aborted"], true);
  EXPECT_EQ(j["simulation"]["final_key_length"], 0);
}

TEST_F(Cli, SimulateQqFiveQubit) {
  const cli::Result r = cli::run("simulate qq --scheme five_qubit --set 1,2,3 --trials 100");
  ASSERT_EQ(r.status, 0);
  const qss::Json j = qss::Json::parse(r.out);
  EXPECT_GE(j["simulation"]["min_fidelity"].get<double>(), 1.0 - 1e-9);
  EXPECT_EQ(j["simulation"]["trials"], 100);
}

TEST_F(Cli, SimulateUnauthorisedExitsOne) {
  EXPECT_EQ(cli::run("simulate rcq --scheme cgl23 --set 1").status, 1);
  EXPECT_EQ(cli::run("simulate qq --scheme cgl23 --set 2").status, 1);
}

TEST_F(Cli, SimulateUsageErrors) {
  EXPECT_EQ(cli::run("simulate rcq --scheme cgl23 --set 1,9").status, 2);
  EXPECT_EQ(cli::run("simulate rcq --scheme cgl23 --set a,b").status, 2);
  EXPECT_EQ(cli::run("simulate rcq --scheme nothing --set 1").status, 2);
  EXPECT_EQ(cli::run("simulate bb84 --scheme cgl23 --set 1,2").status, 2);
  EXPECT_EQ(cli::run("simulate rcq --scheme cgl23 --set 1,2 --noise depolarizing:1:7").status, 2);
  EXPECT_EQ(cli::run("simulate rcq --scheme cgl23 --set 1,2 --test-fraction 1.5").status, 2);
  EXPECT_EQ(cli::run("simulate rcq --scheme cgl23 --set 1,2 --rounds x").status, 2);
}

TEST_F(Cli, ReportsAreDeterministicExceptTimestamp) {
  const std::string sim = "simulate rcq --scheme five_qubit --set 2,3,5 --rounds 3000 --seed 42 --noise depolarizing:2:0.1";
  const qss::Json a = qss::Json::parse(cli::run(sim).out);
  const qss::Json b = qss::Json::parse(cli::run(sim).out);
  EXPECT_TRUE(a.contains("timestamp"));
  EXPECT_EQ(qss::dump_report(qss::without_timestamp(a)), qss::dump_report(qss::without_timestamp(b)));

  const qss::Json c = qss::Json::parse(cli::run("analyze --scheme rs_k2_q5").out);
  const qss::Json d = qss::Json::parse(cli::run("analyze --scheme rs_k2_q5").out);
  EXPECT_EQ(qss::dump_report(qss::without_timestamp(c)), qss::dump_report(qss::without_timestamp(d)));
}

TEST_F(Cli, HelpExitsZero) { EXPECT_EQ(cli::run("--help").status, 0); }
