#pragma once

// App Bundle interchange format: one JSON document per app describing its
// packages, classes, package-level relations and manifest facts.

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace authorprint {

inline constexpr int kBundleSchemaVersion = 1;

class PackageName {
 public:
  PackageName() = default;
  explicit PackageName(std::string dotted) : dotted_(std::move(dotted)) {}

  const std::string& str() const { return dotted_; }
  std::vector<std::string_view> segments() const;

  // True when the name has at least one segment, no empty segment and no
  // whitespace.
  bool well_formed() const;

  // Segment-wise prefix test: "com.ads" is a prefix of "com.ads.core" but not
  // of "com.adsx".
  bool has_prefix(std::string_view prefix) const;

  friend auto operator<=>(const PackageName&, const PackageName&) = default;

 private:
  std::string dotted_;
};

// Package part of a fully qualified class name ("a.b.Foo$Bar" -> "a.b").
std::string package_of_class(std::string_view class_name);
// Simple part of a fully qualified class name ("a.b.Foo$Bar" -> "Foo$Bar").
std::string_view simple_class_name(std::string_view class_name);

enum class ComponentKind { activity, service, receiver, provider };
enum class RelationKind { call, inherit, icc };

std::string_view to_string(ComponentKind kind);
std::string_view to_string(RelationKind kind);
std::optional<ComponentKind> parse_component_kind(std::string_view text);
std::optional<RelationKind> parse_relation_kind(std::string_view text);

struct MethodRecord {
  std::string name;
  std::vector<std::string> instructions;
  std::vector<std::string> api_calls;
  bool overrides_framework = false;

  friend bool operator==(const MethodRecord&, const MethodRecord&) = default;
};

struct ClassRecord {
  std::string name;
  PackageName package;
  std::optional<std::string> superclass;
  std::vector<std::string> fields;
  std::vector<MethodRecord> methods;
  std::optional<ComponentKind> is_component;

  friend bool operator==(const ClassRecord&, const ClassRecord&) = default;
};

struct RelationRecord {
  PackageName from_pkg;
  PackageName to_pkg;
  RelationKind kind = RelationKind::call;
  long long count = 1;

  friend bool operator==(const RelationRecord&, const RelationRecord&) = default;
};

struct ManifestComponent {
  ComponentKind kind = ComponentKind::activity;
  std::string name;

  friend bool operator==(const ManifestComponent&, const ManifestComponent&) = default;
};

struct ManifestInfo {
  std::optional<std::string> main_activity;
  std::vector<ManifestComponent> components;
  std::vector<std::string> uses_features;

  friend bool operator==(const ManifestInfo&, const ManifestInfo&) = default;
};

struct AppBundle {
  int schema_version = kBundleSchemaVersion;
  std::string app_id;
  std::optional<std::string> author_label;
  std::vector<PackageName> packages;
  std::vector<ClassRecord> classes;
  std::vector<RelationRecord> relations;
  ManifestInfo manifest;
  std::vector<std::string> libraries;

  friend bool operator==(const AppBundle&, const AppBundle&) = default;
};

struct Violation {
  std::string code;
  std::string path;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool contains(std::string_view code) const;
};

// Checks every bundle invariant. Stable codes:
//   SCHEMA_VERSION_UNSUPPORTED, APP_ID_EMPTY, PACKAGE_NAME_INVALID,
//   PACKAGE_DUPLICATE, CLASS_NAME_INVALID, CLASS_PACKAGE_UNDECLARED,
//   CLASS_PACKAGE_MISMATCH, METHOD_NAME_EMPTY, TOKEN_INVALID,
//   RELATION_ENDPOINT_UNDECLARED, RELATION_COUNT_NONPOSITIVE,
//   MANIFEST_COMPONENT_UNDECLARED, MANIFEST_MAIN_UNDECLARED,
//   LIBRARY_PREFIX_INVALID
ValidationReport validate(const AppBundle& bundle);

// Parses and validates a document. Throws SchemaError for malformed or
// mistyped content (message carries the JSON path) and ReferenceError when a
// relation or manifest entry names an undeclared package.
AppBundle parse_bundle(std::string_view document);

// Canonical serialization: object keys sorted, lists in input order, absent
// optionals omitted, trailing newline.
std::string write_bundle(const AppBundle& bundle);

AppBundle read_bundle_file(const std::string& path);
void write_bundle_file(const AppBundle& bundle, const std::string& path);

}  // namespace authorprint
