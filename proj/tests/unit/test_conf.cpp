#include <doctest.h>

#include "mediapulse/conf.hpp"
#include "mediapulse/errors.hpp"

using namespace mediapulse;

TEST_SUITE("conf") {

TEST_CASE("blocks, repeated keys and comments") {
  auto blocks = parse_conf(
      "# leading comment\n"
      "\n"
      "[entity]\n"
      "id = pp\n"
      "alias = PP\n"
      "alias = Partido Popular\n"
      "\n"
      "[entity]\n"
      "id = vox\n"
      "alias = Vox\n");
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].name == "entity");
  CHECK(blocks[0].line == 3);
  CHECK(blocks[0].get("id") == "pp");
  CHECK(blocks[0].get_all("alias") == std::vector<std::string>{"PP", "Partido Popular"});
  CHECK(blocks[1].get("id") == "vox");
  CHECK(!blocks[0].get("missing").has_value());
}

TEST_CASE("values keep interior spacing, edges trimmed") {
  auto blocks = parse_conf("[s]\nname =  El País — Portada  \n");
  CHECK(blocks[0].get("name") == "El País — Portada");
}

TEST_CASE("require names the block and missing key") {
  auto blocks = parse_conf("[source]\nid = x\n");
  CHECK_THROWS_AS((void)blocks[0].require("feed_url"), ParseError);
}

TEST_CASE("line without equals sign") {
  try {
    parse_conf("[a]\nok = 1\nbroken line\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("entry before any block") {
  CHECK_THROWS_AS(parse_conf("id = x\n"), ParseError);
}

TEST_CASE("malformed block header") {
  CHECK_THROWS_AS(parse_conf("[oops\n"), ParseError);
  CHECK_THROWS_AS(parse_conf("[]\n"), ParseError);
}

TEST_CASE("empty document yields no blocks") {
  CHECK(parse_conf("").empty());
  CHECK(parse_conf("# only a comment\n").empty());
}

}  // TEST_SUITE
