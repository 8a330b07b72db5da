#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dnstrip/errors.hpp"
#include "dnstrip/io.hpp"

using namespace dnstrip;

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.039434263463720774}) {
    CHECK(std::stod(io::format_number(v)) == v);
  }
  CHECK(io::format_number(1.5) == "1.5");
  CHECK(io::format_number(-3LL) == "-3");
}

TEST_CASE("CSV quoting and records") {
  CHECK(io::csv_escape("plain") == "plain");
  CHECK(io::csv_escape("a,b") == "\"a,b\"");
  CHECK(io::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(io::csv_escape("two\nlines") == "\"two\nlines\"");

  io::CsvTable t({"name", "x", "n", "ok"});
  t.add("a,b", 0.25, 3, true);
  CHECK(t.str() == "name,x,n,ok\r\n\"a,b\",0.25,3,true\r\n");
  CHECK_THROWS_AS(t.add("short"), ConfigError);
}

TEST_CASE("two-column and grid text") {
  CHECK(io::two_column("x", "y", {1.0, 2.0}, {0.5, -1.0}) == "# x y\n1 0.5\n2 -1\n");
  CHECK_THROWS_AS(io::two_column("x", "y", {1.0}, {}), ConfigError);
  const std::string g = io::grid_text({0.0, 1.0}, {-1.0, 0.0, 1.0}, {1, 2, 3, 4, 5, 6});
  CHECK(g == "# nx 2 ny 3\n0 1\n-1 0 1\n1 2 3\n4 5 6\n");
}

TEST_CASE("write_file creates directories") {
  const auto dir = std::filesystem::temp_directory_path() / "dnstrip_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  io::write_file(dir / "f.txt", "abc\r\n");
  std::ifstream f(dir / "f.txt", std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == "abc\r\n");
  std::filesystem::remove_all(dir.parent_path());
}
