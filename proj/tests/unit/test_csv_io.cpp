#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "mrw/csv_io.hpp"

using namespace mrw;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& contents = "")
      : path(std::filesystem::temp_directory_path() / name) {
    if (!contents.empty()) {
      std::ofstream f(path);
      f << contents;
    }
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("cumulative series: both accepted headers") {
  TempFile a("mrw_t1.csv", "step_index,cumulative_log_price\n0,0.5\n1,0.75\n2,0.6\n");
  auto v = read_cumulative_csv(a.path.string());
  REQUIRE(v.size() == 3);
  CHECK(v[1] == doctest::Approx(0.75));

  TempFile b("mrw_t2.csv", "date,price\n2020-01-01,100\n2020-01-02,110\n");
  v = read_cumulative_csv(b.path.string());
  REQUIRE(v.size() == 2);
  CHECK(v[0] == doctest::Approx(std::log(100.0)));
  CHECK(v[1] == doctest::Approx(std::log(110.0)));
}

TEST_CASE("cumulative series: malformed input is rejected") {
  TempFile bad_header("mrw_t3.csv", "foo,bar\n1,2\n");
  CHECK_THROWS_AS(read_cumulative_csv(bad_header.path.string()), CsvError);
  TempFile bad_number("mrw_t4.csv", "step_index,cumulative_log_price\n0,abc\n");
  CHECK_THROWS_AS(read_cumulative_csv(bad_number.path.string()), CsvError);
  TempFile neg_price("mrw_t5.csv", "date,price\n2020-01-01,-3\n");
  CHECK_THROWS_AS(read_cumulative_csv(neg_price.path.string()), CsvError);
  CHECK_THROWS_AS(read_cumulative_csv("/nonexistent/file.csv"), CsvError);
}

TEST_CASE("history files") {
  TempFile h("mrw_t6.csv", "k,sigma\n0,0.012\n1,0.011\n2,0.013\n");
  VolHistory hist = read_history_csv(h.path.string(), 0.0625);
  REQUIRE(hist.sigmas.size() == 3);
  CHECK(hist.tau == doctest::Approx(0.0625));
  CHECK(hist.sigmas[2] == doctest::Approx(0.013));

  TempFile bad("mrw_t7.csv", "k,sigma\n0,0\n");
  CHECK_THROWS_AS(read_history_csv(bad.path.string(), 1.0), CsvError);
}

TEST_CASE("variogram round trip") {
  VariogramEstimate v;
  v.lags = {1, 2, 3};
  v.values = {0.31, 0.33, 0.345};
  v.pair_counts = {99, 98, 97};
  TempFile out("mrw_t8.csv");
  write_variogram_csv(out.path.string(), v);
  VariogramEstimate back = read_variogram_csv(out.path.string());
  REQUIRE(back.lags == v.lags);
  for (std::size_t i = 0; i < v.values.size(); ++i)
    CHECK(back.values[i] == doctest::Approx(v.values[i]).epsilon(1e-15));
  CHECK(back.pair_counts == v.pair_counts);
}

TEST_CASE("path csv output is readable as a cumulative series") {
  MrwPath p;
  p.params = MrwParams{};
  p.returns = {0.1, -0.05, 0.2};
  p.cumulative = {0.1, 0.05, 0.25};
  TempFile out("mrw_t9.csv");
  write_path_csv(out.path.string(), p);
  auto v = read_cumulative_csv(out.path.string());
  REQUIRE(v.size() == 3);
  CHECK(v[2] == doctest::Approx(0.25).epsilon(1e-15));
}
