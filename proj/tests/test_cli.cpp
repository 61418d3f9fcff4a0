// End-to-end runs of the removal binary; outputs are re-read with the
// library parsers.
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "removal/counting.hpp"
#include "removal/experiment.hpp"
#include "removal/graph.hpp"
#include "removal/matrix.hpp"

using namespace removal;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("removal_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("id4.txt", "4 4 2\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
    write("a.txt", "2 2 2\n1 0\n0 1\n");
    write("b.txt", "2 2 2\n0 1\n1 0\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }
  std::string read(const std::string& name) const {
    std::ifstream f(path(name));
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
  }

  // Runs the binary with stdout to out.txt; returns the exit status.
  int run(const std::string& args) {
    const std::string cmd = std::string(REMOVAL_CLI) + " " + args + " > " + path("out.txt") +
                            " 2> " + path("err.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  json out_json() const { return json::parse(read("out.txt")); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, CountsIdentity) {
  ASSERT_EQ(run("count " + path("id4.txt") + " " + path("a.txt")), 0);
  EXPECT_EQ(out_json()["count"], "6");
}

TEST_F(Cli, SeparatedCountMatchesLibrary) {
  ASSERT_EQ(run("count " + path("id4.txt") + " " + path("a.txt") + " --row-seps 2 --col-seps 2"), 0);
  const auto m = read_matrix_file(path("id4.txt"));
  const auto a = read_matrix_file(path("a.txt"));
  EXPECT_EQ(out_json()["count"], count_separated_copies(m, a, {{2}, {2}}).str());
}

TEST_F(Cli, ExactPackingWritesVerifiableCopies) {
  ASSERT_EQ(run("pack --exact --copies-out " + path("p.jsonl") + " " + path("id4.txt") + " " + path("a.txt")), 0);
  EXPECT_EQ(out_json()["size"], 2);
  std::ifstream f(path("p.jsonl"));
  const auto copies = parse_copies_jsonl(f);
  ASSERT_EQ(copies.size(), 2u);
  EXPECT_TRUE(verify_copy_set(read_matrix_file(path("id4.txt")), {read_matrix_file(path("a.txt")), copies, true}));
}

TEST_F(Cli, HitAndDistance) {
  ASSERT_EQ(run("hit " + path("id4.txt") + " " + path("a.txt")), 0);
  EXPECT_EQ(out_json()["size"], 3);
  ASSERT_EQ(run("distance " + path("id4.txt") + " " + path("a.txt")), 0);
  EXPECT_EQ(out_json()["distance"], 3);
  EXPECT_EQ(out_json()["free"], true);
}

TEST_F(Cli, PlantedMatrixRoundTrips) {
  ASSERT_EQ(run("--seed 5 plant " + path("a.txt") + " --m 20 --n 20 --target 6 --matrix-out " +
                path("m.txt") + " --copies-out " + path("c.jsonl")),
            0);
  EXPECT_EQ(out_json()["planted"], 6);
  const auto m = read_matrix_file(path("m.txt"));
  std::ifstream f(path("c.jsonl"));
  EXPECT_TRUE(verify_copy_set(m, {read_matrix_file(path("a.txt")), parse_copies_jsonl(f), true}));
  const auto first = read("m.txt");
  ASSERT_EQ(run("--seed 5 plant " + path("a.txt") + " --m 20 --n 20 --target 6 --matrix-out " +
                path("m.txt")),
            0);
  EXPECT_EQ(read("m.txt"), first);
}

TEST_F(Cli, EncodedGraphParsesAndCountsCopies) {
  ASSERT_EQ(run("encode " + path("id4.txt") + " " + path("a.txt") + " --graph-out " + path("g.txt")), 0);
  std::ifstream f(path("g.txt"));
  const auto g = parse_graph(f);
  EXPECT_EQ(g.part_count(), 4u);
  ASSERT_EQ(run("cliques " + path("g.txt")), 0);
  // Each I2 copy is hit by the identity and by swapping both rows and columns.
  EXPECT_EQ(out_json()["cliques"], "12");
}

TEST_F(Cli, FrInstanceBlowsUp) {
  ASSERT_EQ(run("lb-instance --m 10 --matrix-out " + path("lb.txt") + " --copies-out " + path("lb.jsonl")), 0);
  EXPECT_EQ(out_json()["q"], 2);
  ASSERT_EQ(run("blowup " + path("lb.txt") + " --n 20 --copies " + path("lb.jsonl") + " --matrix-out " +
                path("big.txt") + " --copies-out " + path("big.jsonl")),
            0);
  ASSERT_EQ(run("count " + path("big.txt") + " " + path("a.txt")), 0);
  EXPECT_EQ(out_json()["count"], "32");
  std::ifstream f(path("big.jsonl"));
  EXPECT_EQ(parse_copies_jsonl(f).size(), 8u);
}

TEST_F(Cli, GapTableCsv) {
  ASSERT_EQ(run("--format csv gap-table --m 20 10"), 0);
  const auto text = read("out.txt");
  EXPECT_EQ(text.substr(0, text.find('\n')), "m,set_size,eps_hat,delta_hat,ratio,eps_hat_decimal,delta_hat_decimal,ratio_decimal");
  EXPECT_NE(text.find("\n10,1,1/50,1/5000,1/100,"), std::string::npos);
  EXPECT_NE(text.find("\n20,2,1/50,1/20000,1/400,"), std::string::npos);
}

TEST_F(Cli, TesterExitCodes) {
  ASSERT_EQ(run("test " + path("id4.txt") + " " + path("a.txt") + " --q 4 --trials 3"), 1);
  EXPECT_EQ(out_json()["rejections"], 3);
  write("z.txt", "4 4 2\n0 0 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 0\n");
  ASSERT_EQ(run("test " + path("z.txt") + " " + path("a.txt") + " --q 3 --trials 20"), 0);
  EXPECT_EQ(out_json()["frequency"], "0");
}

TEST_F(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run("count " + path("missing.txt") + " " + path("a.txt")), 2);
  write("bad.txt", "2 2 2\n1 0\n0 x\n");
  EXPECT_EQ(run("count " + path("bad.txt") + " " + path("a.txt")), 2);
  EXPECT_EQ(run("count"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("lb-instance --m 15"), 2);
  EXPECT_EQ(run("--format xml behrend --m 5"), 2);
}

TEST_F(Cli, BudgetExitsThree) {
  write("r.txt", "9 9 2\n1 0 1 1 0 0 1 0 1\n0 1 0 1 1 0 0 1 0\n1 1 0 0 1 1 0 0 1\n0 0 1 1 0 1 1 0 0\n1 0 0 1 1 0 0 1 1\n0 1 1 0 0 1 1 0 1\n"
                 "1 0 1 0 1 0 1 1 0\n0 1 0 1 0 1 0 1 1\n1 1 0 1 0 0 1 0 1\n");
  EXPECT_EQ(run("--budget 5 distance " + path("r.txt") + " " + path("a.txt")), 3);
}

TEST_F(Cli, ReportCanGoToAFile) {
  ASSERT_EQ(run("--out " + path("r.json") + " behrend --m 10"), 0);
  EXPECT_TRUE(read("out.txt").empty());
  const auto doc = json::parse(read("r.json"));
  EXPECT_EQ(doc["size"], 4);
  EXPECT_EQ(doc["verified"], true);
}

TEST_F(Cli, ExperimentIsDeterministicCsv) {
  write("spec.txt", "seed 2\ngap-table m=10\nrepair-sweep seeds=3 n=12 eps=1/4\n");
  ASSERT_EQ(run("experiment " + path("spec.txt")), 0);
  const auto first = read("out.txt");
  EXPECT_EQ(first.substr(0, first.find('\n')), kExperimentCsvHeader);
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 5);
  ASSERT_EQ(run("experiment " + path("spec.txt")), 0);
  EXPECT_EQ(read("out.txt"), first);
  ASSERT_EQ(run("--seed 3 experiment " + path("spec.txt")), 0);
  EXPECT_NE(read("out.txt"), first);
  write("bad.txt", "seed 2\nnope\n");
  EXPECT_EQ(run("experiment " + path("bad.txt")), 2);
  EXPECT_NE(read("err.txt").find("line 2"), std::string::npos);
}
