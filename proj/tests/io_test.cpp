#include <doctest.h>

#include <filesystem>

#include <json.hpp>

#include "fixtures.hpp"
#include "marrt/instance_io.hpp"
#include "marrt/solution_io.hpp"

using namespace marrt;
using nlohmann::json;

namespace {

std::string mutate(const std::string& text, const std::function<void(json&)>& edit) {
  auto doc = json::parse(text);
  edit(doc);
  return doc.dump();
}

std::string schema_field(const std::string& text) {
  try {
    load_instance(text);
  } catch (const SchemaViolation& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("instance round trip preserves structure") {
  const auto inst = generate_grid_instance(10, 3, 0.1, 0.8, 17);
  const auto text = save_instance(inst);
  const auto back = load_instance(text);
  CHECK(back == inst);
  CHECK(save_instance(back) == text);
}

TEST_CASE("explicit graph round trip") {
  const auto g = std::make_shared<const MotionGraph>(
      MotionGraph({{10, {0, 0}}, {20, {1.5, 0}}, {30, {1.5, 2.0}}},
                  {{10, 20, 1.0, PrimitiveKind::move}, {20, 10, 1.0, PrimitiveKind::move},
                   {20, 30, 1.0, PrimitiveKind::move}, {30, 20, 1.0, PrimitiveKind::move},
                   {10, 10, 1.0, PrimitiveKind::wait}, {20, 20, 1.0, PrimitiveKind::wait},
                   {30, 30, 1.0, PrimitiveKind::wait}}));
  ProblemInstance inst;
  inst.graphs = {g};
  inst.starts = {10};
  inst.destinations = {30};
  inst.separation = 0.5;
  inst.seed = 3;
  const auto back = load_instance(save_instance(inst));
  CHECK(back == inst);
}

TEST_CASE("schema violations name the offending field") {
  const auto text = save_instance(generate_grid_instance(6, 2, 0.1, 0.8, 5));
  CHECK(schema_field(mutate(text, [](json& d) { d.erase("separation"); })) == "separation");
  CHECK(schema_field(mutate(text, [](json& d) { d["separation"] = "wide"; })) == "separation");
  CHECK(schema_field(mutate(text, [](json& d) { d["extra"] = 1; })) == "extra");
  CHECK(schema_field(mutate(text, [](json& d) { d["agents"][1]["start"] = d["agents"][0]["start"]; })) ==
        "agents.start");
  CHECK(schema_field(mutate(text, [](json& d) { d["agents"][0].erase("destination"); })) ==
        "agents[0].destination");

  try {
    load_instance(mutate(text, [](json& d) { d["agents"][1]["start"] = d["agents"][0]["start"]; }));
    FAIL("expected a schema violation");
  } catch (const SchemaViolation& e) {
    CHECK(std::string(e.what()).find("unique") != std::string::npos);
  }
}

TEST_CASE("syntax errors carry a position") {
  try {
    load_instance("{\n  \"version\": 1,\n  \"seed\": ,\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("solution round trip") {
  SolutionDocument doc{42, "ja", {{{0, 1, 2}, {8, 7, 7}}, 1.0, 3.0}};
  const auto back = load_solution(save_solution(doc));
  CHECK(back.instance_seed == 42);
  CHECK(back.algorithm == "ja");
  CHECK(back.solution == doc.solution);
  CHECK_THROWS_AS(load_solution("{\"instance_seed\": 1}"), SchemaViolation);
  CHECK_THROWS_AS(load_solution("[1, 2"), ParseError);
}

TEST_CASE("atomic write replaces the file") {
  const auto dir = std::filesystem::temp_directory_path() / "marrt_io_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "x.txt";
  write_text_file_atomic(file, "first");
  write_text_file_atomic(file, "second");
  CHECK(read_text_file(file) == "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(read_text_file(dir / "missing"), IoError);
}
