#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <doctest.h>

#include "rscsaga/libsvm.hpp"

using namespace rscsaga;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "rscsaga_test_libsvm";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("a single line") {
  const Dataset ds = load_libsvm(write_temp("one.svm", "1 1:0.5 3:2\n"));
  CHECK(ds.n() == 1);
  CHECK(ds.p() == 3);
  CHECK(ds.features()(0, 0) == 0.5);
  CHECK(ds.features()(0, 1) == 0.0);
  CHECK(ds.features()(0, 2) == 2.0);
  CHECK(ds.response(0) == 1.0);
  CHECK(load_libsvm(write_temp("one.svm", "1 1:0.5 3:2\n"), 5).p() == 5);
}

TEST_CASE("comments, blank lines and label mapping") {
  const auto path = write_temp("mixed.svm", "# header\n\n0 2:1\n+1 1:-1\n-1\n");
  const Dataset raw = load_libsvm(path);
  CHECK(raw.n() == 3);
  CHECK(raw.response(0) == 0.0);
  const Dataset pm = load_libsvm(path, std::nullopt, LabelMapping::PlusMinus);
  CHECK(pm.response(0) == -1.0);
  CHECK(pm.response(1) == 1.0);
  CHECK(pm.response(2) == -1.0);
}

TEST_CASE("malformed input reports the line") {
  CHECK_THROWS_AS(load_libsvm(write_temp("empty.svm", "")), ParseError);
  CHECK_THROWS_AS(load_libsvm(write_temp("comments.svm", "# nothing\n")), ParseError);
  CHECK_THROWS_WITH_AS(load_libsvm(write_temp("bad.svm", "1 1:2\n1 2:x\n")), doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_WITH_AS(load_libsvm(write_temp("order.svm", "1 3:1 2:1\n")), doctest::Contains("line 1"), ParseError);
  CHECK_THROWS_AS(load_libsvm(write_temp("zero.svm", "1 0:1\n")), ParseError);
  CHECK_THROWS_AS(load_libsvm(write_temp("label.svm", "abc 1:1\n")), ParseError);
  CHECK_THROWS_AS(load_libsvm(write_temp("wide.svm", "1 4:1\n"), 3), ParseError);
  CHECK_THROWS_AS(load_libsvm("/nonexistent/file.svm"), IoError);
}

TEST_CASE("write then read round trips") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Matrix X = Matrix::Zero(20, 5);
  Vector y(20);
  for (Eigen::Index i = 0; i < 20; ++i) {
    y[i] = normal(rng);
    for (Eigen::Index j = 0; j < 5; ++j)
      if ((i + j) % 3 != 0) X(i, j) = normal(rng);
  }
  const Dataset ds(X, y);
  const auto path = std::filesystem::temp_directory_path() / "rscsaga_test_libsvm" / "round.svm";
  write_libsvm(ds, path);
  const Dataset back = load_libsvm(path, 5);
  CHECK((back.features() - X).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((back.responses() - y).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("csv dump lists nonzeros with 0-based indices") {
  Matrix X(2, 3);
  X << 0, 1.5, 0, -2, 0, 0;
  const auto path = std::filesystem::temp_directory_path() / "rscsaga_test_libsvm" / "dump.csv";
  write_csv_dump(Dataset(X, Vector::Zero(2)), path);
  CHECK(slurp(path) == "row,col,value\n0,1,1.5\n1,0,-2\n");
}
