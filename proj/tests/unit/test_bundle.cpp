#include <doctest.h>

#include <functional>

#include <json.hpp>

#include "authorprint/bundle.hpp"
#include "authorprint/errors.hpp"
#include "oracles.hpp"

using namespace authorprint;

namespace {

const char* kMinimal = R"({
  "schema_version": 1, "app_id": "demo",
  "packages": ["com.demo"],
  "classes": [{"name": "com.demo.Main", "package": "com.demo", "fields": [],
               "methods": [{"name": "run", "instructions": ["return-void"], "api_calls": [],
                            "overrides_framework": false}]}],
  "relations": [],
  "manifest": {"components": [{"kind": "activity", "name": "com.demo.Main"}],
               "main_activity": "com.demo.Main", "uses_features": []},
  "libraries": []
})";

AppBundle valid_base() {
  Rng rng(5);
  AppBundle b = oracle::random_bundle(rng, 4);
  REQUIRE(validate(b).ok());
  return b;
}

}  // namespace

TEST_CASE("minimal document parses into one package") {
  const auto b = parse_bundle(kMinimal);
  CHECK(b.app_id == "demo");
  CHECK(b.packages.size() == 1);
  CHECK(b.classes.size() == 1);
  CHECK(b.relations.empty());
  CHECK(b.manifest.main_activity == "com.demo.Main");
  CHECK(!b.author_label);
}

TEST_CASE("relation to an undeclared package is a reference error naming it") {
  auto doc = nlohmann::json::parse(kMinimal);
  doc["relations"] = {{{"from_pkg", "com.demo"}, {"to_pkg", "com.ghost"}, {"kind", "call"}, {"count", 2}}};
  try {
    parse_bundle(doc.dump());
    FAIL("expected ReferenceError");
  } catch (const ReferenceError& e) {
    CHECK(std::string(e.what()).find("com.ghost") != std::string::npos);
  }
}

TEST_CASE("missing and mistyped fields report their path") {
  auto doc = nlohmann::json::parse(kMinimal);
  doc.erase("app_id");
  CHECK_THROWS_AS(parse_bundle(doc.dump()), SchemaError);

  doc = nlohmann::json::parse(kMinimal);
  doc["classes"][0]["methods"][0]["overrides_framework"] = "no";
  try {
    parse_bundle(doc.dump());
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("/classes/0/methods/0/overrides_framework") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_bundle("not json"), SchemaError);
  doc = nlohmann::json::parse(kMinimal);
  doc["schema_version"] = 2;
  CHECK_THROWS_AS(parse_bundle(doc.dump()), SchemaError);
}

TEST_CASE("empty relations serialize as an empty list") {
  const auto text = write_bundle(parse_bundle(kMinimal));
  CHECK(text.find("\"relations\":[]") != std::string::npos);
}

TEST_CASE("write then parse is the identity on 100 random bundles") {
  Rng rng(2024);
  for (int i = 0; i < 100; ++i) {
    const auto b = oracle::random_bundle(rng, rng.between(1, 9));
    REQUIRE(validate(b).ok());
    const auto text = write_bundle(b);
    const auto back = parse_bundle(text);
    CHECK(back == b);
    CHECK(write_bundle(back) == text);
  }
}

TEST_CASE("serialization is canonical: keys sorted") {
  const auto text = write_bundle(valid_base());
  const auto doc = nlohmann::json::parse(text);
  // nlohmann objects iterate in key order; re-dumping must not reorder anything.
  CHECK(doc.dump() + "\n" == text);
  CHECK(text.find("\"app_id\"") < text.find("\"classes\""));
}

TEST_CASE("validate codes") {
  CHECK(validate(parse_bundle(kMinimal)).ok());

  auto b = parse_bundle(kMinimal);
  b.manifest.main_activity = "com.demo.Other";
  CHECK(validate(b).contains("MANIFEST_MAIN_UNDECLARED"));

  b = parse_bundle(kMinimal);
  b.relations.push_back({PackageName("com.demo"), PackageName("com.demo"), RelationKind::call, 0});
  CHECK(validate(b).contains("RELATION_COUNT_NONPOSITIVE"));
}

TEST_CASE("flipping any single invariant yields a nonempty report") {
  using Mutation = std::function<void(AppBundle&)>;
  const std::vector<std::pair<std::string, Mutation>> mutations = {
      {"SCHEMA_VERSION_UNSUPPORTED", [](AppBundle& b) { b.schema_version = 3; }},
      {"APP_ID_EMPTY", [](AppBundle& b) { b.app_id.clear(); }},
      {"PACKAGE_NAME_INVALID", [](AppBundle& b) { b.packages.push_back(PackageName("bad..name")); }},
      {"PACKAGE_NAME_INVALID", [](AppBundle& b) { b.packages.push_back(PackageName("has space")); }},
      {"PACKAGE_DUPLICATE", [](AppBundle& b) { b.packages.push_back(b.packages.front()); }},
      {"CLASS_PACKAGE_UNDECLARED",
       [](AppBundle& b) {
         b.classes.front().package = PackageName("x.y");
         b.classes.front().name = "x.y.Z";
       }},
      {"CLASS_PACKAGE_MISMATCH", [](AppBundle& b) { b.classes.front().name = "elsewhere.Z"; }},
      {"METHOD_NAME_EMPTY",
       [](AppBundle& b) { b.classes.front().methods.push_back(MethodRecord{"", {}, {}, false}); }},
      {"TOKEN_INVALID",
       [](AppBundle& b) { b.classes.front().methods.push_back(MethodRecord{"m", {"two words"}, {}, false}); }},
      {"RELATION_ENDPOINT_UNDECLARED",
       [](AppBundle& b) {
         b.relations.push_back({b.packages.front(), PackageName("nowhere"), RelationKind::call, 1});
       }},
      {"RELATION_COUNT_NONPOSITIVE",
       [](AppBundle& b) { b.relations.push_back({b.packages.front(), b.packages.back(), RelationKind::icc, -2}); }},
      {"MANIFEST_COMPONENT_UNDECLARED",
       [](AppBundle& b) { b.manifest.components.push_back({ComponentKind::service, "com.none.Service"}); }},
      {"MANIFEST_MAIN_UNDECLARED", [](AppBundle& b) { b.manifest.main_activity = "com.none.Main"; }},
      {"LIBRARY_PREFIX_INVALID", [](AppBundle& b) { b.libraries.push_back("bad prefix"); }},
  };
  for (const auto& [code, mutate] : mutations) {
    auto b = valid_base();
    mutate(b);
    const auto report = validate(b);
    INFO(code);
    CHECK(!report.ok());
    CHECK(report.contains(code));
  }
}

TEST_CASE("package names") {
  PackageName p("com.ads.core");
  CHECK(p.segments().size() == 3);
  CHECK(p.has_prefix("com.ads"));
  CHECK(p.has_prefix("com.ads.core"));
  CHECK(!p.has_prefix("com.adsx"));
  CHECK(!PackageName("").well_formed());
  CHECK(!PackageName("a..b").well_formed());
  CHECK(package_of_class("a.b.Foo$Bar") == "a.b");
  CHECK(simple_class_name("a.b.Foo$Bar") == "Foo$Bar");
}
