#include <doctest.h>

#include <string>

#include "bwp/cli/config.hpp"
#include "bwp/cli/emit.hpp"
#include "bwp/errors.hpp"

using namespace bwp;
using namespace bwp::cli;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

}  // namespace

TEST_CASE("minimal config with two matrix generators") {
  // 2 - 0.25/(z+2) and 2i - 0.25/(z+2i), as matrices [[2, 3.75], [1, 2]] etc.
  const char* good = R"({"group": {"generators": [
      {"matrix": [2, 3.75, 1, 2]},
      {"matrix": [[0, 2], -4.25, 1, [0, 2]]}]}})";
  auto cfg = parse_config_text(good, "cfg.json");
  REQUIRE(cfg.group);
  CHECK(cfg.group->spec.generators.size() == 2);
  auto g = build_group(cfg);
  CHECK(g.rank() == 2);
  CHECK(g.classical());
}

TEST_CASE("config rejections name the location") {
  auto e1 = config_error(R"({"group": {"generators": [
      {"attracting": [0, 0], "repelling": [1, 0], "multiplier": 0.5}]}})");
  CHECK(contains(e1, "group.generators[0].multiplier"));
  CHECK(contains(e1, "0.5"));

  auto e2 = config_error(R"({"group": {"preset": "standard", "radius_fudge": 2}})");
  CHECK(contains(e2, "radius_fudge"));
  CHECK(contains(e2, "group"));

  auto e3 = config_error("{\n  \"group\": {\n    \"preset\": \"standard\",\n  }\n}\n");
  CHECK(contains(e3, "cfg.json:4"));

  CHECK(contains(config_error(R"({"series": {"max_len": -1}})"), "series.max_len"));
  CHECK(contains(config_error(R"({"series": {"weight": "euclid"}})"), "series.weight"));
  CHECK(contains(config_error(R"({"bogus": 1})"), "bogus"));
  CHECK(contains(config_error(R"({"group": {"preset": "standard", "generators": []}})"),
                 "exclusive"));
  CHECK(contains(config_error(R"({"group": {"generators": [{"matrix": [1, 2, 2, 4]}]}})"),
                 "group.generators[0].matrix"));
}

TEST_CASE("group construction errors surface as config or validation errors") {
  auto overlap = parse_config_text(R"({"group": {"preset": "standard", "radius": 1.5}})", "c");
  CHECK_THROWS_AS(build_group(overlap), GroupValidationError);
  auto none = parse_config_text("{}", "c");
  CHECK_THROWS_AS(build_group(none), ConfigError);
  auto trivial = parse_config_text(R"({"group": {"generators": []}})", "c");
  CHECK(build_group(trivial).rank() == 0);
}

TEST_CASE("group specs round trip through the config format") {
  for (const char* text : {R"({"group": {"preset": "standard"}})",
                           R"({"group": {"preset": "standard", "radius": 0.25}})",
                           R"({"group": {"preset": "cyclic", "multiplier": [3, 1]}})",
                           R"({"group": {"generators": [
                               {"attracting": [1, 0], "repelling": [-1, 0], "multiplier": 9}]}})"}) {
    auto g = build_group(parse_config_text(text, "c"));
    nlohmann::ordered_json doc;
    doc["group"] = group_spec_json(g);
    auto back = build_group(parse_config_text(doc.dump(), "roundtrip"));
    REQUIRE(back.rank() == g.rank());
    CHECK(back.cyclic_diagnostic() == g.cyclic_diagnostic());
    for (int i = 0; i < g.rank(); ++i) {
      CHECK(projective_distance(back.generators()[i], g.generators()[i]) == 0.0);
    }
    for (int l = 0; l < g.letter_count(); ++l) {
      CHECK(back.disk(static_cast<Letter>(l)).center == g.disk(static_cast<Letter>(l)).center);
      CHECK(back.disk(static_cast<Letter>(l)).radius == g.disk(static_cast<Letter>(l)).radius);
      CHECK(back.disk(static_cast<Letter>(l)).outer == g.disk(static_cast<Letter>(l)).outer);
    }
  }
}

TEST_CASE("points, moves and hashing") {
  CHECK(parse_point("0.5,-2", "z") == ComplexPoint(cplx(0.5, -2)));
  CHECK(parse_point("3", "z") == ComplexPoint(3.0));
  CHECK(parse_point("inf", "z").is_infinite());
  CHECK_THROWS_AS(parse_point("1,2,3", "z"), ConfigError);
  CHECK_THROWS_AS(parse_point("abc", "z"), ConfigError);

  auto m = parse_move("swap:1:2", "--move");
  CHECK(m.kind == NielsenMove::Kind::Swap);
  CHECK(m.i == 0);
  CHECK(m.j == 1);
  CHECK(parse_move("invert:2", "--move").i == 1);
  CHECK(parse_move("cycle", "--move").kind == NielsenMove::Kind::Cycle);
  CHECK_THROWS_AS(parse_move("invert:0", "--move"), ConfigError);
  CHECK_THROWS_AS(parse_move("twist:1", "--move"), ConfigError);

  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("report envelope and encoders") {
  auto r = make_report("x", 0xabcULL, {{"v", 1}}, nullptr);
  CHECK(r.dump() == R"({"command":"x","config_hash":"0000000000000abc","results":{"v":1},"diagnostics":{}})");
  CHECK(num(1.0 / 0.0) == "inf");
  CHECK(to_json(ComplexPoint::infinity()) == "inf");
  Image img(3, 2);
  img.set(1, 1, 255, 0, 0);
  img.set(7, 7, 1, 1, 1);
  const std::string ppm = encode_ppm(img);
  CHECK(ppm.substr(0, 11) == "P6\n3 2\n255\n");
  CHECK(ppm.size() == 11 + 18);
  CHECK(static_cast<unsigned char>(ppm[11 + 12]) == 255);
  CHECK_THROWS_AS(write_text("/nonexistent-dir/x.json", "{}"), std::runtime_error);
  try {
    write_text("/nonexistent-dir/x.json", "{}");
  } catch (const std::runtime_error& e) {
    CHECK(contains(e.what(), "/nonexistent-dir/x.json"));
  }
}
