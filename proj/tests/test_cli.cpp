#include "contilearn/data.hpp"
#include "contilearn/model.hpp"
#include "contilearn/model_io.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

using namespace contilearn;

namespace {

const std::string kCli = CONTILEARN_CLI_PATH;
const std::string kFixtures = CONTILEARN_FIXTURES;

struct Run {
  int code;
  std::string err;
};

Run cli(const std::string& args, const std::string& env = "") {
  const auto err_path = testutil::temp_dir() / "cli_stderr.txt";
  const std::string cmd = env + " " + kCli + " " + args + " 2> " + err_path.string() + " > /dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, testutil::read_file(err_path)};
}

std::string tmp(const std::string& name) { return (testutil::temp_dir() / name).string(); }

std::vector<double> read_numbers(const std::string& path) {
  std::istringstream in(testutil::read_file(path));
  std::vector<double> out;
  for (std::string line; std::getline(in, line);) out.push_back(std::stod(line));
  return out;
}

double report_field(const std::string& line, const std::string& key) {
  const auto pos = line.find(" " + key + "=");
  return std::stod(line.substr(pos + key.size() + 2));
}

}  // namespace

TEST_CASE("train, predict and inspect the XOR fixture") {
  const std::string model = tmp("xor.model");
  const Run train = cli("train --data " + kFixtures + "/xor.csv --config " + kFixtures + "/train.cfg --out " + model);
  REQUIRE_MESSAGE(train.code == 0, train.err);

  std::istringstream report(testutil::read_file(model + ".report"));
  std::vector<std::string> lines;
  for (std::string line; std::getline(report, line);) lines.push_back(line);
  REQUIRE(lines.size() == 3);
  CHECK(lines[1].starts_with("iteration=1 "));
  CHECK(report_field(lines[1], "accuracy") >= 0.95);
  CHECK(lines[2] == "stop=completed");

  // Predictions on the training rows match in-process probabilities bit for bit.
  const std::string probs = tmp("xor.probs");
  REQUIRE(cli("predict --header --model " + model + " --data " + kFixtures + "/xor.csv --out " + probs).code == 0);
  const ModelFile loaded = load_model(model);
  const Eigen::MatrixXd raw = load_inputs_csv(kFixtures + "/xor.csv", true, 2);
  const auto written = read_numbers(probs);
  REQUIRE(static_cast<Eigen::Index>(written.size()) == raw.rows());
  for (Eigen::Index t = 0; t < raw.rows(); ++t)
    CHECK(written[static_cast<std::size_t>(t)] ==
          predict_prob(loaded.weights, loaded.map.evaluate(raw.row(t).transpose())));

  // Canonical XOR corners.
  const auto corners = testutil::write_file("corners.csv", "0,0\n1,1\n0,1\n1,0\n");
  const std::string corner_probs = tmp("corners.probs");
  REQUIRE(cli("predict --model " + model + " --data " + corners.string() + " --out " + corner_probs).code == 0);
  const auto p = read_numbers(corner_probs);
  CHECK(p[0] < 0.5);
  CHECK(p[1] < 0.5);
  CHECK(p[2] > 0.5);
  CHECK(p[3] > 0.5);

  const auto wide = testutil::write_file("wide.csv", "0,0,0,0\n");
  CHECK(cli("predict --model " + model + " --data " + wide.string() + " --out " + tmp("x")).code == 2);

  const auto fitted = tmp("xor.algebra");
  REQUIRE(cli("algebra --model " + model + " --data " + kFixtures + "/xor.csv --header --out " + fitted).code == 0);
  CHECK(testutil::read_file(fitted).find("closure_residual ") != std::string::npos);
}

TEST_CASE("training is deterministic across seeds and thread counts") {
  const std::string args = "train --data " + kFixtures + "/xor.csv --config " + kFixtures + "/train.cfg";
  REQUIRE(cli(args + " --seed 5 --out " + tmp("a.model"), "CONTILEARN_THREADS=1").code == 0);
  REQUIRE(cli(args + " --seed 5 --out " + tmp("b.model"), "CONTILEARN_THREADS=3").code == 0);
  CHECK(testutil::read_file(tmp("a.model")) == testutil::read_file(tmp("b.model")));
  CHECK(testutil::read_file(tmp("a.model.report")) == testutil::read_file(tmp("b.model.report")));
  REQUIRE(cli(args + " --seed 6 --out " + tmp("c.model")).code == 0);
  CHECK(testutil::read_file(tmp("a.model")) != testutil::read_file(tmp("c.model")));
}

TEST_CASE("train error paths") {
  const Run missing = cli("train --data /nonexistent/data.csv --config " + kFixtures + "/train.cfg --out " + tmp("m"));
  CHECK(missing.code == 2);
  CHECK(missing.err.find("/nonexistent/data.csv") != std::string::npos);

  const auto bad_cfg = testutil::write_file("bad.cfg", "iterations = 1\nk_maxx = 3\n");
  const Run config = cli("train --data " + kFixtures + "/xor.csv --config " + bad_cfg.string() + " --out " + tmp("m"));
  CHECK(config.code == 1);
  CHECK(config.err.find("k_maxx") != std::string::npos);

  const auto bad_data = testutil::write_file("bad.csv", "1.0,abc,0\n");
  const auto plain_cfg = testutil::write_file("plain.cfg", "iterations = 1\nreplicates = 8\n");
  const Run data = cli("train --data " + bad_data.string() + " --config " + plain_cfg.string() + " --out " + tmp("m"));
  CHECK(data.code == 2);
  CHECK(data.err.find("row 1") != std::string::npos);
}

TEST_CASE("a zero-layer null model predicts one half") {
  ModelFile model;
  model.map.d = 2;
  model.map.standardization.mean = Eigen::Vector2d::Zero();
  model.map.standardization.scale = Eigen::Vector2d::Ones();
  model.weights = Eigen::Vector3d::Zero();
  model.prior_precision = 1.0;
  const auto path = tmp("null.model");
  save_model(path, model);
  const auto data = testutil::write_file("null.csv", "1,2\n-3,4\n100,-7\n");
  REQUIRE(cli("predict --model " + path + " --data " + data.string() + " --out " + tmp("null.probs")).code == 0);
  for (double p : read_numbers(tmp("null.probs"))) CHECK(p == 0.5);
  CHECK(testutil::read_file(tmp("null.probs")) == "0.5\n0.5\n0.5\n");

  std::string corrupt = model_to_string(model);
  corrupt.replace(corrupt.find("weights 3"), 9, "weights 4");
  const auto bad = testutil::write_file("corrupt.model", corrupt);
  CHECK(cli("predict --model " + bad.string() + " --data " + data.string() + " --out " + tmp("x")).code == 1);
}

TEST_CASE("reference algebras") {
  const auto out = tmp("quaternion.txt");
  REQUIRE(cli("algebra --reference quaternion --out " + out).code == 0);
  CHECK(testutil::read_file(out).find("associativity_residual 0\n") != std::string::npos);
  const Run unknown = cli("algebra --reference octonion");
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("unknown algebra") != std::string::npos);
}
