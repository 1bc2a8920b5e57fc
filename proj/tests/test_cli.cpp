#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <doctest.h>

namespace {

const std::filesystem::path kDir = std::filesystem::temp_directory_path() / "rscsaga_test_cli";

int run(const std::string& args) {
  std::filesystem::create_directories(kDir);
  const std::string cmd = std::string("\"") + RSC_SAGA_BIN + "\" " + args + " > \"" + (kDir / "stdout.txt").string() +
                          "\" 2> \"" + (kDir / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path write(const std::string& name, const std::string& text) {
  std::filesystem::create_directories(kDir);
  std::ofstream(kDir / name) << text;
  return kDir / name;
}

}  // namespace

TEST_CASE("listing and showing presets") {
  CHECK(run("list-presets") == 0);
  CHECK(slurp(kDir / "stdout.txt").find("lasso-fig1a-desk\n") != std::string::npos);
  CHECK(run("show-preset scad-fig4a") == 0);
  CHECK(slurp(kDir / "stdout.txt").find("penalty = scad") != std::string::npos);
  CHECK(run("show-preset nope") == 1);
  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("--help") == 0);
}

TEST_CASE("run writes traces and exits cleanly") {
  const auto cfg = write("tiny.ini", "problem.n = 40\nproblem.p = 20\nproblem.r = 3\n[run]\nalgorithms = saga, prox-gd\n"
                                     "step_grid = 0.01\npasses = 3\n");
  const auto out = kDir / "out";
  std::filesystem::remove_all(out);
  CHECK(run("run --config \"" + cfg.string() + "\" --no-timing --out \"" + out.string() + "\"") == 0);
  CHECK(std::filesystem::exists(out / "saga_seed1.csv"));
  CHECK(std::filesystem::exists(out / "prox-gd_seed1.csv"));
  CHECK(std::filesystem::exists(out / "summary.csv"));
}

TEST_CASE("exit codes for bad input") {
  CHECK(run("run --config \"" + write("bad.ini", "model.lambda = -2\n").string() + "\"") == 1);
  CHECK(run("run --config /nonexistent.ini") == 1);
  CHECK(run("run") == 1);
  const auto svm = write("bad.svm", "1 1:oops\n");
  CHECK(run("reference --preset ijcnn1-lasso-desk --data \"" + svm.string() + "\"") == 3);
  CHECK(run("reference --preset ijcnn1-lasso-desk --data /nonexistent.svm") == 3);
  const auto diverge = write("diverge.ini", "problem.n = 40\nproblem.p = 20\nproblem.r = 3\nrun.algorithms = saga\n"
                                            "run.step_grid = 100\nrun.passes = 3\n");
  CHECK(run("run --config \"" + diverge.string() + "\" --out \"" + (kDir / "div").string() + "\"") == 2);
}

TEST_CASE("gen-data and reference") {
  const auto svm = kDir / "gen.svm";
  CHECK(run("gen-data --preset scad-fig4a-desk --out \"" + svm.string() + "\"") == 0);
  CHECK(std::filesystem::file_size(svm) > 0);
  CHECK(run("gen-data --preset scad-fig4a-desk --format csv --out \"" + (kDir / "gen.csv").string() + "\"") == 0);
  CHECK(slurp(kDir / "gen.csv").rfind("row,col,value\n", 0) == 0);
  CHECK(run("gen-data --preset rcv1-logistic --out \"" + (kDir / "x.svm").string() + "\"") == 1);
  const auto small = write("small.ini", "problem.n = 40\nproblem.p = 20\nproblem.r = 3\n");
  CHECK(run("reference --config \"" + small.string() + "\"") == 0);
  CHECK(slurp(kDir / "stdout.txt").find("status converged") != std::string::npos);
}
