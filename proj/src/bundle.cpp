#include "authorprint/bundle.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "authorprint/errors.hpp"

namespace authorprint {

using nlohmann::json;

std::vector<std::string_view> PackageName::segments() const {
  std::vector<std::string_view> out;
  std::string_view rest = dotted_;
  while (true) {
    const auto dot = rest.find('.');
    out.push_back(rest.substr(0, dot));
    if (dot == std::string_view::npos) break;
    rest.remove_prefix(dot + 1);
  }
  return out;
}

namespace {

bool has_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

bool valid_token(std::string_view s) { return !s.empty() && !has_space(s); }

}  // namespace

bool PackageName::well_formed() const {
  if (dotted_.empty() || has_space(dotted_)) return false;
  for (auto seg : segments()) {
    if (seg.empty()) return false;
  }
  return true;
}

bool PackageName::has_prefix(std::string_view prefix) const {
  if (prefix.empty()) return false;
  if (dotted_.size() < prefix.size()) return false;
  if (dotted_.compare(0, prefix.size(), prefix) != 0) return false;
  return dotted_.size() == prefix.size() || dotted_[prefix.size()] == '.';
}

std::string package_of_class(std::string_view class_name) {
  const auto dot = class_name.rfind('.');
  if (dot == std::string_view::npos) return {};
  return std::string(class_name.substr(0, dot));
}

std::string_view simple_class_name(std::string_view class_name) {
  const auto dot = class_name.rfind('.');
  return dot == std::string_view::npos ? class_name : class_name.substr(dot + 1);
}

std::string_view to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::activity: return "activity";
    case ComponentKind::service: return "service";
    case ComponentKind::receiver: return "receiver";
    case ComponentKind::provider: return "provider";
  }
  return "activity";
}

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::call: return "call";
    case RelationKind::inherit: return "inherit";
    case RelationKind::icc: return "icc";
  }
  return "call";
}

std::optional<ComponentKind> parse_component_kind(std::string_view text) {
  for (auto k : {ComponentKind::activity, ComponentKind::service,
                 ComponentKind::receiver, ComponentKind::provider}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::optional<RelationKind> parse_relation_kind(std::string_view text) {
  for (auto k : {RelationKind::call, RelationKind::inherit, RelationKind::icc}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

bool ValidationReport::contains(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

ValidationReport validate(const AppBundle& b) {
  ValidationReport report;
  auto flag = [&](std::string code, std::string path, std::string message) {
    report.violations.push_back({std::move(code), std::move(path), std::move(message)});
  };

  if (b.schema_version != kBundleSchemaVersion) {
    flag("SCHEMA_VERSION_UNSUPPORTED", "/schema_version",
         "expected " + std::to_string(kBundleSchemaVersion));
  }
  if (b.app_id.empty()) flag("APP_ID_EMPTY", "/app_id", "app_id is empty");

  std::set<std::string> declared;
  for (std::size_t i = 0; i < b.packages.size(); ++i) {
    const auto& p = b.packages[i];
    const auto path = "/packages/" + std::to_string(i);
    if (!p.well_formed()) flag("PACKAGE_NAME_INVALID", path, "'" + p.str() + "'");
    if (!declared.insert(p.str()).second) flag("PACKAGE_DUPLICATE", path, p.str());
  }

  for (std::size_t i = 0; i < b.classes.size(); ++i) {
    const auto& c = b.classes[i];
    const auto path = "/classes/" + std::to_string(i);
    if (!valid_token(c.name) || package_of_class(c.name).empty() ||
        simple_class_name(c.name).empty()) {
      flag("CLASS_NAME_INVALID", path + "/name", "'" + c.name + "'");
    }
    if (!declared.contains(c.package.str())) {
      flag("CLASS_PACKAGE_UNDECLARED", path + "/package", c.package.str());
    }
    if (package_of_class(c.name) != c.package.str()) {
      flag("CLASS_PACKAGE_MISMATCH", path, c.name + " not in " + c.package.str());
    }
    if (c.superclass && !valid_token(*c.superclass)) {
      flag("TOKEN_INVALID", path + "/superclass", "'" + *c.superclass + "'");
    }
    for (std::size_t f = 0; f < c.fields.size(); ++f) {
      if (!valid_token(c.fields[f])) {
        flag("TOKEN_INVALID", path + "/fields/" + std::to_string(f), "'" + c.fields[f] + "'");
      }
    }
    for (std::size_t m = 0; m < c.methods.size(); ++m) {
      const auto& method = c.methods[m];
      const auto mpath = path + "/methods/" + std::to_string(m);
      if (method.name.empty()) flag("METHOD_NAME_EMPTY", mpath + "/name", "empty method name");
      else if (has_space(method.name)) flag("TOKEN_INVALID", mpath + "/name", method.name);
      for (const auto& t : method.instructions) {
        if (!valid_token(t)) flag("TOKEN_INVALID", mpath + "/instructions", "'" + t + "'");
      }
      for (const auto& t : method.api_calls) {
        if (!valid_token(t)) flag("TOKEN_INVALID", mpath + "/api_calls", "'" + t + "'");
      }
    }
  }

  for (std::size_t i = 0; i < b.relations.size(); ++i) {
    const auto& r = b.relations[i];
    const auto path = "/relations/" + std::to_string(i);
    if (!declared.contains(r.from_pkg.str())) {
      flag("RELATION_ENDPOINT_UNDECLARED", path + "/from_pkg", r.from_pkg.str());
    }
    if (!declared.contains(r.to_pkg.str())) {
      flag("RELATION_ENDPOINT_UNDECLARED", path + "/to_pkg", r.to_pkg.str());
    }
    if (r.count < 1) {
      flag("RELATION_COUNT_NONPOSITIVE", path + "/count", std::to_string(r.count));
    }
  }

  for (std::size_t i = 0; i < b.manifest.components.size(); ++i) {
    const auto& comp = b.manifest.components[i];
    const auto path = "/manifest/components/" + std::to_string(i);
    if (!valid_token(comp.name) || !declared.contains(package_of_class(comp.name))) {
      flag("MANIFEST_COMPONENT_UNDECLARED", path, comp.name);
    }
  }
  if (b.manifest.main_activity) {
    const auto& main = *b.manifest.main_activity;
    const bool listed = std::any_of(
        b.manifest.components.begin(), b.manifest.components.end(), [&](const auto& c) {
          return c.kind == ComponentKind::activity && c.name == main;
        });
    if (!listed) flag("MANIFEST_MAIN_UNDECLARED", "/manifest/main_activity", main);
  }
  for (std::size_t i = 0; i < b.manifest.uses_features.size(); ++i) {
    if (!valid_token(b.manifest.uses_features[i])) {
      flag("TOKEN_INVALID", "/manifest/uses_features/" + std::to_string(i),
           "'" + b.manifest.uses_features[i] + "'");
    }
  }
  for (std::size_t i = 0; i < b.libraries.size(); ++i) {
    if (!PackageName(b.libraries[i]).well_formed()) {
      flag("LIBRARY_PREFIX_INVALID", "/libraries/" + std::to_string(i), b.libraries[i]);
    }
  }
  return report;
}

namespace {

// Typed field access that reports the JSON path of the offending value.
class Reader {
 public:
  static const json& field(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) throw SchemaError(path + ": expected object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path + "/" + key + ": missing field");
    return *it;
  }

  static const json* optional_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
  }

  static std::string string(const json& v, const std::string& path) {
    if (!v.is_string()) throw SchemaError(path + ": expected string");
    return v.get<std::string>();
  }

  static long long integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw SchemaError(path + ": expected integer");
    return v.get<long long>();
  }

  static bool boolean(const json& v, const std::string& path) {
    if (!v.is_boolean()) throw SchemaError(path + ": expected boolean");
    return v.get<bool>();
  }

  static const json& array(const json& v, const std::string& path) {
    if (!v.is_array()) throw SchemaError(path + ": expected array");
    return v;
  }

  static std::vector<std::string> strings(const json& v, const std::string& path) {
    std::vector<std::string> out;
    const auto& arr = array(v, path);
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out.push_back(string(arr[i], path + "/" + std::to_string(i)));
    }
    return out;
  }
};

MethodRecord method_from_json(const json& j, const std::string& path) {
  MethodRecord m;
  m.name = Reader::string(Reader::field(j, path, "name"), path + "/name");
  m.instructions =
      Reader::strings(Reader::field(j, path, "instructions"), path + "/instructions");
  m.api_calls = Reader::strings(Reader::field(j, path, "api_calls"), path + "/api_calls");
  m.overrides_framework = Reader::boolean(Reader::field(j, path, "overrides_framework"),
                                          path + "/overrides_framework");
  return m;
}

ClassRecord class_from_json(const json& j, const std::string& path) {
  ClassRecord c;
  c.name = Reader::string(Reader::field(j, path, "name"), path + "/name");
  c.package = PackageName(Reader::string(Reader::field(j, path, "package"), path + "/package"));
  if (const auto* s = Reader::optional_field(j, "superclass")) {
    c.superclass = Reader::string(*s, path + "/superclass");
  }
  c.fields = Reader::strings(Reader::field(j, path, "fields"), path + "/fields");
  const auto& methods = Reader::array(Reader::field(j, path, "methods"), path + "/methods");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    c.methods.push_back(method_from_json(methods[i], path + "/methods/" + std::to_string(i)));
  }
  if (const auto* k = Reader::optional_field(j, "is_component")) {
    const auto text = Reader::string(*k, path + "/is_component");
    c.is_component = parse_component_kind(text);
    if (!c.is_component) throw SchemaError(path + "/is_component: unknown kind '" + text + "'");
  }
  return c;
}

RelationRecord relation_from_json(const json& j, const std::string& path) {
  RelationRecord r;
  r.from_pkg = PackageName(Reader::string(Reader::field(j, path, "from_pkg"), path + "/from_pkg"));
  r.to_pkg = PackageName(Reader::string(Reader::field(j, path, "to_pkg"), path + "/to_pkg"));
  const auto kind = Reader::string(Reader::field(j, path, "kind"), path + "/kind");
  const auto parsed = parse_relation_kind(kind);
  if (!parsed) throw SchemaError(path + "/kind: unknown relation kind '" + kind + "'");
  r.kind = *parsed;
  r.count = Reader::integer(Reader::field(j, path, "count"), path + "/count");
  return r;
}

ManifestInfo manifest_from_json(const json& j, const std::string& path) {
  ManifestInfo m;
  if (const auto* main = Reader::optional_field(j, "main_activity")) {
    m.main_activity = Reader::string(*main, path + "/main_activity");
  }
  const auto& comps =
      Reader::array(Reader::field(j, path, "components"), path + "/components");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto cpath = path + "/components/" + std::to_string(i);
    ManifestComponent c;
    const auto kind = Reader::string(Reader::field(comps[i], cpath, "kind"), cpath + "/kind");
    const auto parsed = parse_component_kind(kind);
    if (!parsed) throw SchemaError(cpath + "/kind: unknown component kind '" + kind + "'");
    c.kind = *parsed;
    c.name = Reader::string(Reader::field(comps[i], cpath, "name"), cpath + "/name");
    m.components.push_back(std::move(c));
  }
  m.uses_features =
      Reader::strings(Reader::field(j, path, "uses_features"), path + "/uses_features");
  return m;
}

json to_json(const MethodRecord& m) {
  return json{{"name", m.name},
              {"instructions", m.instructions},
              {"api_calls", m.api_calls},
              {"overrides_framework", m.overrides_framework}};
}

json to_json(const ClassRecord& c) {
  json j{{"name", c.name}, {"package", c.package.str()}, {"fields", c.fields}};
  if (c.superclass) j["superclass"] = *c.superclass;
  if (c.is_component) j["is_component"] = std::string(to_string(*c.is_component));
  json methods = json::array();
  for (const auto& m : c.methods) methods.push_back(to_json(m));
  j["methods"] = std::move(methods);
  return j;
}

bool is_reference_code(const std::string& code) {
  return code == "RELATION_ENDPOINT_UNDECLARED" || code == "CLASS_PACKAGE_UNDECLARED" ||
         code == "MANIFEST_COMPONENT_UNDECLARED" || code == "MANIFEST_MAIN_UNDECLARED";
}

}  // namespace

AppBundle parse_bundle(std::string_view document) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("document is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw SchemaError(": expected top-level object");

  AppBundle b;
  b.schema_version =
      static_cast<int>(Reader::integer(Reader::field(root, "", "schema_version"), "/schema_version"));
  if (b.schema_version != kBundleSchemaVersion) {
    throw SchemaError("/schema_version: unsupported version " + std::to_string(b.schema_version));
  }
  b.app_id = Reader::string(Reader::field(root, "", "app_id"), "/app_id");
  if (const auto* label = Reader::optional_field(root, "author_label")) {
    b.author_label = Reader::string(*label, "/author_label");
  }
  for (auto& p : Reader::strings(Reader::field(root, "", "packages"), "/packages")) {
    b.packages.emplace_back(std::move(p));
  }
  const auto& classes = Reader::array(Reader::field(root, "", "classes"), "/classes");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    b.classes.push_back(class_from_json(classes[i], "/classes/" + std::to_string(i)));
  }
  const auto& relations = Reader::array(Reader::field(root, "", "relations"), "/relations");
  for (std::size_t i = 0; i < relations.size(); ++i) {
    b.relations.push_back(relation_from_json(relations[i], "/relations/" + std::to_string(i)));
  }
  b.manifest = manifest_from_json(Reader::field(root, "", "manifest"), "/manifest");
  b.libraries = Reader::strings(Reader::field(root, "", "libraries"), "/libraries");

  const auto report = validate(b);
  for (const auto& v : report.violations) {
    if (is_reference_code(v.code)) {
      throw ReferenceError(v.path + ": " + v.code + " '" + v.message + "'");
    }
  }
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw SchemaError(v.path + ": " + v.code + " " + v.message);
  }
  return b;
}

std::string write_bundle(const AppBundle& b) {
  json root;
  root["schema_version"] = b.schema_version;
  root["app_id"] = b.app_id;
  if (b.author_label) root["author_label"] = *b.author_label;
  json packages = json::array();
  for (const auto& p : b.packages) packages.push_back(p.str());
  root["packages"] = std::move(packages);
  json classes = json::array();
  for (const auto& c : b.classes) classes.push_back(to_json(c));
  root["classes"] = std::move(classes);
  json relations = json::array();
  for (const auto& r : b.relations) {
    relations.push_back(json{{"from_pkg", r.from_pkg.str()},
                             {"to_pkg", r.to_pkg.str()},
                             {"kind", std::string(to_string(r.kind))},
                             {"count", r.count}});
  }
  root["relations"] = std::move(relations);
  json manifest{{"uses_features", b.manifest.uses_features}};
  if (b.manifest.main_activity) manifest["main_activity"] = *b.manifest.main_activity;
  json comps = json::array();
  for (const auto& c : b.manifest.components) {
    comps.push_back(json{{"kind", std::string(to_string(c.kind))}, {"name", c.name}});
  }
  manifest["components"] = std::move(comps);
  root["manifest"] = std::move(manifest);
  root["libraries"] = b.libraries;
  return root.dump() + "\n";
}

AppBundle read_bundle_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bundle(buf.str());
}

void write_bundle_file(const AppBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << write_bundle(bundle);
}

}  // namespace authorprint
