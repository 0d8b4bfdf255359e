#include "maxinfer/io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <clocale>
#include <cstdio>
#include <filesystem>
#include <limits>

using namespace maxinfer;
using namespace maxinfer::io;

namespace {

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "maxinfer_test_io";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("numbers use six significant digits", "[io]") {
  const double values[] = {0.000123456789, 1234567.0, -2.5, 100.0, 1e-7, 1.0 / 3.0, 123456.0, -0.0, 5e300};
  for (double v : values) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    const std::string expect = v == 0.0 ? "0" : buf;
    CHECK(format_number(v) == expect);
  }
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::int64_t{-42}) == "-42");
}

TEST_CASE("formatting ignores the process locale", "[io]") {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") == nullptr) std::setlocale(LC_NUMERIC, "C");
  CHECK(format_number(2.5) == "2.5");
  double v = 0;
  CHECK(parse_double("2.5", v));
  CHECK(v == 2.5);
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("table CSV matches the byte fixture", "[io]") {
  Table t{{"label", "count", "value"}, {}};
  t.add_row({std::string("alpha"), std::int64_t{3}, 0.000123456789});
  t.add_row({std::string("beta"), std::int64_t{-12}, 1234567.0});
  t.add_row({std::string("gamma"), std::int64_t{0}, -2.5});
  t.add_row({std::string("delta"), std::int64_t{7}, 100.0});
  t.add_row({std::string("eps"), std::int64_t{1}, 1e-7});
  t.add_row({std::string("zeta"), std::int64_t{2}, 1.0 / 3.0});
  CHECK(to_csv(t) == read_file(MAXINFER_FIXTURES "/format_fixture.csv"));
  CHECK_THROWS_AS(t.add_row({1.0}), DimensionError);
}

TEST_CASE("tables round-trip through CSV", "[io]") {
  Table t{{"a", "b", "name"}, {}};
  t.add_row({std::int64_t{1}, 0.25, std::string("x")});
  t.add_row({std::int64_t{-7}, 1.5e-5, std::string("y z")});
  const auto dir = scratch_dir();
  write_table(dir / "t.csv", t);
  const Table back = table_from_csv(read_file(dir / "t.csv"));
  CHECK(back == t);
  CHECK(to_csv(table_from_csv(to_csv(back))) == to_csv(t));

  const Table empty{{"only", "header"}, {}};
  write_table(dir / "empty.csv", empty);
  CHECK(read_file(dir / "empty.csv") == "only,header\n");
  CHECK(table_from_csv(read_file(dir / "empty.csv")) == empty);

  Table bad{{"s"}, {}};
  bad.add_row({std::string("has,comma")});
  CHECK_THROWS_AS(to_csv(bad), DataError);
}

TEST_CASE("numeric CSV parsing", "[io]") {
  const auto m = parse_numeric_csv("x,y\n1,2.5\n\n-3e2, 4\r\n", true);
  CHECK(m.columns == std::vector<std::string>{"x", "y"});
  REQUIRE(m.values.rows() == 2);
  CHECK(m.values(1, 0) == -300.0);
  CHECK(m.values(1, 1) == 4.0);
  const auto plain = parse_numeric_csv("1,2\n3,4\n", false);
  CHECK(plain.values(1, 1) == 4.0);
  CHECK_THROWS_AS(parse_numeric_csv("1,2\n3\n", false), DataError);
  CHECK_THROWS_AS(parse_numeric_csv("1,abc\n", false), DataError);
  CHECK_THROWS_AS(parse_numeric_csv("1,nan\n", false), DataError);
  CHECK_THROWS_AS(parse_numeric_csv("x,y\n", true), DataError);
  CHECK_THROWS_AS(read_numeric_csv("/nonexistent/file.csv", false), DataError);

  Eigen::MatrixXd x(2, 2);
  x << 0.1, 1.0 / 3.0, -2e-300, 7.0;
  const auto back = parse_numeric_csv(matrix_to_csv(x, {"a", "b"}), true);
  CHECK(back.values == x);
}

TEST_CASE("atomic writes replace whole files", "[io]") {
  const auto dir = scratch_dir() / "nested" / "deeper";
  const auto path = dir / "out.txt";
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  CHECK(read_file(path) == "second\n");
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
  }
}
