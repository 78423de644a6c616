#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "elsgd/roc.hpp"

using elsgd::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Cli, FormatRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, -2.5}) {
    EXPECT_EQ(std::stod(elsgd::cli::fmt(v)), v);
  }
}

TEST(Cli, CsvQuoting) {
  elsgd::cli::Report r;
  r.columns = {"a", "b"};
  r.rows = {{"x,y", "say \"hi\""}};
  EXPECT_EQ(elsgd::cli::to_csv(r), "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
}

TEST(Cli, RocTraceWorstSeed) {
  const auto r = invoke({"roc-trace", "--lambda", "2,1", "--x0", "worst"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_GT(rows.size(), 10u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"k", "a_norm", "rho_k", "s_k"}));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][2]), 1.0 / 3.0, 1e-15);
}

TEST(Cli, RocTraceEigenvector) {
  const auto r = invoke({"roc-trace", "--lambda", "2,1", "--x0", "1,0"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(parse_csv(r.out).size(), 2u);
}

TEST(Cli, RocTraceScaledInstance) {
  const auto r = invoke({"roc-trace", "--n", "3", "--a", "0.01", "--alpha", "0.5", "--seed", "1",
                         "--max-k", "400", "--tol", "0"});
  // Reaching max-k without the tolerance counts as non-convergence.
  EXPECT_EQ(r.code, 3);
  const auto rows = parse_csv(r.out);
  const double last = std::stod(rows.back()[2]);
  EXPECT_GE(last, 0.9615 - 1e-4);
  EXPECT_LE(last, 0.99 / 1.01 + 1e-12);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"nope"}).code, 2);
  EXPECT_EQ(invoke({"roc-trace"}).code, 2);
  EXPECT_EQ(invoke({"roc-trace", "--lambda", "1,2"}).code, 2);
  EXPECT_EQ(invoke({"roc-trace", "--lambda", "2,abc"}).code, 2);
  EXPECT_EQ(invoke({"limit-angles", "--lambda", "2,1"}).code, 2);
  EXPECT_EQ(invoke({"average-roc", "--n", "3", "--a", "0.1", "--method", "quad"}).code, 2);
  EXPECT_EQ(invoke({"rosenbrock", "--n", "1"}).code, 2);
  EXPECT_EQ(invoke({"hessian-table", "--sizes", ""}).code, 2);
  EXPECT_EQ(invoke({"hessian-table", "--sizes", "2000"}).code, 2);
  EXPECT_EQ(invoke({"phase-retrieval", "--method", "fast"}).code, 2);
  const auto help = invoke({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("roc-trace"), std::string::npos);
}

TEST(Cli, AverageRocSweep) {
  const auto r = invoke({"average-roc", "--sweep", "12"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 14u);
  EXPECT_EQ(rows[0][3], "sqrt_avg_square");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a = std::stod(rows[i][0]);
    EXPECT_NEAR(a, std::pow(10.0, -(double(i) - 1.0) / 4.0), 1e-15);
    const double want = std::sqrt(elsgd::average_sq_roc_closed_form_2d(a));
    EXPECT_NEAR(std::stod(rows[i][3]), want, 1e-10);
  }
  // a = 1 row is all zeros.
  for (std::size_t c = 1; c < rows[1].size(); ++c) EXPECT_EQ(std::stod(rows[1][c]), 0.0);
}

TEST(Cli, AverageRocMonteCarloIntermediate) {
  const auto r = invoke({"average-roc", "--lambda", "1,0.505,0.01", "--samples", "2000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  EXPECT_GE(std::stod(rows[1][2]), 0.96);
}

TEST(Cli, LimitAngles) {
  const auto r = invoke({"limit-angles", "--lambda", "1,0.55,0.1", "--samples", "20000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  double best = -1.0;
  double best_angle = 0.0;
  bool saw_bound = false;
  for (const auto& row : rows) {
    if (row[0] == "density" && std::stod(row[2]) > best) {
      best = std::stod(row[2]);
      best_angle = std::stod(row[1]);
    }
    if (row[0] == "akaike_bound") saw_bound = true;
  }
  EXPECT_TRUE(saw_bound);
  EXPECT_NEAR(best_angle, std::atan(10.0), 0.5 * (M_PI / 2) / 200.0 + 1e-12);
}

TEST(Cli, PhaseRetrievalFromTruth) {
  const auto r = invoke({"phase-retrieval", "--n", "10", "--init", "truth"});
  ASSERT_EQ(r.code, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][1], "0");
  EXPECT_EQ(rows[2][1], "0");
}

TEST(Cli, NonConvergenceExitCode) {
  const auto r = invoke({"phase-retrieval", "--n", "10", "--max-k", "3", "--method", "const"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(parse_csv(r.out).size(), 5u);  // header + x0 + three steps retained
}

TEST(Cli, DeterministicAndSidecar) {
  const auto dir = std::filesystem::temp_directory_path() / "elsgd_cli_test";
  std::filesystem::create_directories(dir);
  const std::string a = (dir / "a.csv").string();
  const std::string b = (dir / "b.csv").string();
  const std::vector<std::string> base{"average-roc", "--n", "4", "--a", "0.1,0.01", "--samples", "500", "--seed", "5"};
  auto with_out = [&](const std::string& path) {
    auto v = base;
    v.push_back("--out");
    v.push_back(path);
    return v;
  };
  ASSERT_EQ(invoke(with_out(a)).code, 0);
  ASSERT_EQ(invoke(with_out(b)).code, 0);
  auto slurp = [](const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a), invoke(base).out);
  const auto meta = nlohmann::json::parse(slurp(a + ".json"));
  EXPECT_EQ(meta.at("command"), "average-roc");
  EXPECT_EQ(meta.at("config").at("seed"), 5);
  EXPECT_TRUE(meta.at("columns").contains("std_error"));
  EXPECT_TRUE(meta.contains("version"));
  std::filesystem::remove_all(dir);
}

TEST(Cli, HessianTableShape) {
  const auto r = invoke({"hessian-table", "--sizes", "20,40", "--random-dirs", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].size(), 6u);
  EXPECT_EQ(rows[1][1], "86");
}

TEST(Cli, RosenbrockReference) {
  const auto r = invoke({"rosenbrock", "--seeds", "5", "--stride", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  bool saw_reference = false;
  for (const auto& row : rows) saw_reference = saw_reference || row[0] == "reference";
  EXPECT_TRUE(saw_reference);
}
