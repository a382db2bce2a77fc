#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "report.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kFullConfig =
    "# experiment description\n"
    "[lattice]\n"
    "ell = 8\n"
    "L = 16\n"
    "ell_list = 8,10,12\n"
    "\n"
    "[model]\n"
    "J = 1.0\n"
    "lambda = 0.25\n"
    "v_shells = 2:1.0,4:0.5\n"
    "\n"
    "[run]\n"
    "beta = 0.44\n"
    "mode = strip\n"
    "\n"
    "[output]\n"
    "format = json\n"
    "path = out.json\n";

}  // namespace

TEST_CASE("full config parses into every field") {
  const auto cfg = cm::parse_config_text(kFullConfig);
  REQUIRE(cfg.ell.has_value());
  CHECK(*cfg.ell == 8);
  REQUIRE(cfg.big_l.has_value());
  CHECK(*cfg.big_l == 16);
  CHECK(cfg.ell_list == std::vector<int>{8, 10, 12});
  CHECK(cfg.j == 1.0);
  CHECK(cfg.lambda == 0.25);
  REQUIRE(cfg.v_shells.size() == 2);
  CHECK(cfg.v_shells.at(2) == 1.0);
  CHECK(cfg.v_shells.at(4) == 0.5);
  CHECK(cfg.run.at("beta") == "0.44");
  CHECK(cfg.run.at("mode") == "strip");
  CHECK(cfg.format == "json");
  CHECK(cfg.path == "out.json");
}

TEST_CASE("empty and comment-only configs are valid and inert") {
  const auto cfg = cm::parse_config_text("# nothing here\n\n");
  CHECK(!cfg.ell.has_value());
  CHECK(cfg.ell_list.empty());
  CHECK(cfg.lambda == 0.0);
  CHECK(cfg.run.empty());
}

TEST_CASE("unknown sections and keys are rejected with line numbers") {
  try {
    cm::parse_config_text("[lattice]\nell = 8\n[physics]\nx = 1\n");
    FAIL("unknown section accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  try {
    cm::parse_config_text("[lattice]\nell = 8\nwidth = 4\n");
    FAIL("unknown key accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(cm::parse_config_text("ell = 8\n"), std::invalid_argument);
  CHECK_THROWS_AS(cm::parse_config_text("[lattice]\nell 8\n"),
                  std::invalid_argument);
}

TEST_CASE("model validation runs at parse time") {
  CHECK_THROWS_AS(cm::parse_config_text("[model]\nlambda = -0.1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      cm::parse_config_text("[model]\nv_shells = 2:1.0,2:0.5\n"),
      std::invalid_argument);
  CHECK_THROWS_AS(cm::parse_config_text("[run]\nbeta = 1\nbeta = 2\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(cm::parse_config_text("[lattice]\nell = 8\nell = 8\n"),
                  std::invalid_argument);
}

TEST_CASE("scalar parsers reject trailing junk and overflow") {
  CHECK(cm::parse_int("42") == 42);
  CHECK(cm::parse_int("-7") == -7);
  CHECK_THROWS_AS(cm::parse_int("42x"), std::invalid_argument);
  CHECK_THROWS_AS(cm::parse_int(""), std::invalid_argument);
  CHECK_THROWS_AS(cm::parse_int("4e3"), std::invalid_argument);
  CHECK_THROWS_AS(cm::parse_int("99999999999999999999"),
                  std::invalid_argument);
  CHECK(cm::parse_double("0.25") == 0.25);
  CHECK(cm::parse_double("-1e-3") == -1e-3);
  CHECK_THROWS_AS(cm::parse_double("0.25q"), std::invalid_argument);
  CHECK_THROWS_AS(cm::parse_double("nan"), std::invalid_argument);
  CHECK_THROWS_AS(cm::parse_double("1e999"), std::invalid_argument);
}

TEST_CASE("list parsers") {
  CHECK(cm::parse_int_list("8,10,12") == std::vector<int>{8, 10, 12});
  CHECK(cm::parse_double_list("0.2,0.44") == std::vector<double>{0.2, 0.44});
  CHECK_THROWS_AS(cm::parse_int_list("8,,12"), std::invalid_argument);
  CHECK_THROWS_AS(cm::parse_v_shells("2:1.0:3"), std::invalid_argument);
  CHECK_THROWS_AS(cm::parse_v_shells("two:1.0"), std::invalid_argument);
}

TEST_CASE("config file loader") {
  const std::string path = "test_cfg_tmp.ini";
  {
    std::ofstream out(path, std::ios::binary);
    out << "[lattice]\nell = 4\n";
  }
  const auto cfg = cm::load_config_file(path);
  CHECK(cfg.ell.has_value());
  std::remove(path.c_str());
  CHECK_THROWS_AS(cm::load_config_file("no_such_dir/none.ini"),
                  std::invalid_argument);
}

TEST_CASE("double formatting round-trips exactly") {
  const double values[] = {0.0,      1.0 / 3.0, 6.02e23, -1e-300,
                           3.141592653589793, 0.1,       -2.5e-8};
  for (double v : values) {
    const std::string s = cm::format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(std::signbit(std::stod(cm::format_double(-0.0))));
}

TEST_CASE("json builder emits ordered escaped fields") {
  cm::JsonObject obj;
  obj.put("b", 2).put("a", std::string("x\"y\n\t")).put("flag", true);
  obj.put_raw("arr", cm::json_array(std::vector<int>{1, 2}));
  const std::string s = obj.str();
  CHECK(s == "{\"b\":2,\"a\":\"x\\\"y\\n\\t\",\"flag\":true,\"arr\":[1,2]}");
  // Identical construction is byte-identical output.
  cm::JsonObject again;
  again.put("b", 2).put("a", std::string("x\"y\n\t")).put("flag", true);
  again.put_raw("arr", cm::json_array(std::vector<int>{1, 2}));
  CHECK(again.str() == s);
  // Non-finite doubles have no JSON literal and degrade to null.
  cm::JsonObject nf;
  nf.put("x", std::nan("")).put_raw(
      "xs", cm::json_array(std::vector<double>{
                1.0, std::numeric_limits<double>::infinity()}));
  CHECK(nf.str() == "{\"x\":null,\"xs\":[1,null]}");
  CHECK(nlohmann::json::parse(nf.str()).at("x").is_null());
}

TEST_CASE("reports parse under an independent json implementation") {
  auto rep = cm::make_report();
  rep.put("c_hat", 0.4999993).put("ell", 16).put("note", "a\\b");
  rep.put_raw("f", cm::json_array(std::vector<double>{0.25, -1.0 / 3.0}));
  const auto parsed = nlohmann::json::parse(rep.str());
  CHECK(parsed.at("schema_version") == "1");
  CHECK(parsed.at("c_hat").get<double>() == 0.4999993);
  CHECK(parsed.at("ell").get<int>() == 16);
  CHECK(parsed.at("note").get<std::string>() == "a\\b");
  CHECK(parsed.at("f")[1].get<double>() == -1.0 / 3.0);
  // schema_version is the first key of every report.
  CHECK(rep.str().rfind("{\"schema_version\":\"1\"", 0) == 0);
}

TEST_CASE("csv table enforces shape and clean cells") {
  cm::CsvTable t({"ell", "f"});
  t.add_row({cm::CsvTable::cell(8), cm::CsvTable::cell(0.93)});
  t.add_row({cm::CsvTable::cell(10), cm::CsvTable::cell(0.932)});
  CHECK(t.rows() == 2);
  const std::string s = t.str();
  CHECK(s.rfind("ell,f\n", 0) == 0);
  CHECK(s.back() == '\n');
  CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);
  CHECK_THROWS_AS(t.add_row({"1", "a,b"}), std::invalid_argument);
  CHECK_THROWS_AS(cm::CsvTable({"x\ny"}), std::invalid_argument);
}

TEST_CASE("output writer hits disk and reports failures") {
  const std::string path = "test_report_tmp.txt";
  cm::write_output(path, "payload\n");
  CHECK(slurp(path) == "payload\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(cm::write_output("no_such_dir/out.txt", "x"),
                  std::runtime_error);
}
