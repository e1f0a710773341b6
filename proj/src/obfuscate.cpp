#include "authorprint/obfuscate.hpp"

#include <set>

#include "authorprint/random.hpp"

namespace authorprint {

namespace {

class Namer {
 public:
  explicit Namer(std::uint64_t seed) : rng_(seed) {}

  const std::string& rename(const std::string& original) {
    auto it = names_.find(original);
    if (it != names_.end()) return it->second;
    std::string fresh;
    do {
      fresh.clear();
      const int len = rng_.between(1, 3);
      for (int i = 0; i < len; ++i) fresh += static_cast<char>('a' + rng_.below(26));
    } while (!used_.insert(fresh).second);
    return names_.emplace(original, fresh).first->second;
  }

  const std::map<std::string, std::string>& names() const { return names_; }

 private:
  Rng rng_;
  std::map<std::string, std::string> names_;
  std::set<std::string> used_;
};

// "Foo$Bar" -> "a$bc", each nesting level renamed on its own.
std::string rename_simple(Namer& namer, std::string_view simple) {
  std::string out;
  std::size_t start = 0;
  while (true) {
    const auto end = simple.find('$', start);
    out += namer.rename(std::string(simple.substr(start, end - start)));
    if (end == std::string_view::npos) break;
    out += '$';
    start = end + 1;
  }
  return out;
}

}  // namespace

AppBundle obfuscate_bundle(const AppBundle& bundle, std::uint64_t seed, RenameMap* renames) {
  Namer namer(seed);
  std::map<std::string, std::string> classes;
  for (const auto& c : bundle.classes) {
    const auto simple = simple_class_name(c.name);
    const auto pkg = c.package.str();
    classes[c.name] = (pkg.empty() ? "" : pkg + ".") + rename_simple(namer, simple);
  }
  auto rename_class = [&](const std::string& name) {
    auto it = classes.find(name);
    return it == classes.end() ? name : it->second;
  };

  AppBundle out = bundle;
  for (auto& c : out.classes) {
    c.name = rename_class(c.name);
    if (c.superclass) c.superclass = rename_class(*c.superclass);
    for (auto& f : c.fields) f = namer.rename(f);
    std::vector<MethodRecord> kept;
    for (auto& m : c.methods) {
      if (m.overrides_framework) {
        kept.push_back(std::move(m));
      } else if (!m.api_calls.empty()) {
        m.name = namer.rename(m.name);
        kept.push_back(std::move(m));
      }
    }
    c.methods = std::move(kept);
  }
  for (auto& comp : out.manifest.components) comp.name = rename_class(comp.name);
  if (out.manifest.main_activity) out.manifest.main_activity = rename_class(*out.manifest.main_activity);

  if (renames) {
    renames->identifiers = namer.names();
    renames->classes = std::move(classes);
  }
  return out;
}

}  // namespace authorprint
