#include "authorprint/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "authorprint/errors.hpp"
#include "authorprint/random.hpp"

namespace authorprint {

namespace {

namespace fs = std::filesystem;
using Tokens = std::vector<std::string>;

const Tokens kOpcodes = {
    "const/4",         "const/16",        "const-string",     "move",
    "move-object",     "move-result",     "move-result-object", "return-void",
    "return",          "return-object",   "new-instance",     "new-array",
    "check-cast",      "instance-of",     "iget",             "iget-object",
    "iget-boolean",    "iput",            "iput-object",      "sget-object",
    "sput-object",     "invoke-virtual",  "invoke-direct",    "invoke-static",
    "invoke-interface", "invoke-super",   "if-eqz",           "if-nez",
    "if-eq",           "if-ne",           "if-lt",            "if-ge",
    "goto",            "add-int/lit8",    "add-int",          "mul-int",
    "aget-object",     "aput-object",     "array-length",     "throw",
    "monitor-enter",   "monitor-exit",    "cmp-long",         "int-to-long",
};

const Tokens kApiClasses = {
    "android.widget.TextView",        "android.widget.Button",
    "android.widget.ImageView",       "android.widget.Toast",
    "android.app.Activity",           "android.app.AlertDialog$Builder",
    "android.content.Intent",         "android.content.Context",
    "android.content.SharedPreferences", "android.os.Bundle",
    "android.os.Handler",             "android.util.Log",
    "android.net.Uri",                "android.database.Cursor",
    "android.database.sqlite.SQLiteDatabase", "android.view.View",
    "android.view.LayoutInflater",    "java.net.HttpURLConnection",
    "java.io.InputStream",            "java.util.ArrayList",
    "java.util.HashMap",              "java.lang.StringBuilder",
    "org.json.JSONObject",            "android.graphics.Bitmap",
};

const Tokens kApiMethods = {"get", "set", "open", "close", "read", "write",
                            "add", "put", "show", "start", "create", "query"};

const Tokens kFeatures = {
    "android.hardware.camera",        "android.hardware.camera.autofocus",
    "android.hardware.location",      "android.hardware.location.gps",
    "android.hardware.location.network", "android.hardware.nfc",
    "android.hardware.bluetooth",     "android.hardware.wifi",
    "android.hardware.sensor.accelerometer", "android.hardware.sensor.compass",
    "android.hardware.touchscreen",   "android.hardware.microphone",
    "android.hardware.telephony",     "android.hardware.usb.host",
    "android.software.live_wallpaper", "android.software.app_widgets",
};

const Tokens kNouns = {"Manager", "Helper", "Util",    "View",   "Adapter", "Holder",
                       "Data",    "Item",   "List",    "Task",   "Cache",   "Config",
                       "Handler", "Client", "Store",   "Record", "Entry",   "State",
                       "Model",   "Loader", "Builder", "Parser", "Event",   "Result"};

const Tokens kVerbs = {"get",   "set",   "load",  "save",    "update", "init", "parse",
                       "build", "show",  "handle", "create", "fetch",  "refresh", "apply",
                       "reset", "check", "find",  "remove",  "open",   "close"};

const Tokens kDomains = {"com", "org", "io", "net", "de", "me", "cat", "fr", "nl", "uk"};

const Tokens kSubpackages = {"ui",   "data",    "util",   "model",  "service", "net",
                             "widget", "db",    "core",   "settings", "sync",  "view"};

const Tokens kLibraryRoots = {
    "com.squareup.okhttp",   "com.google.gson",        "io.reactivex",
    "org.greenrobot.eventbus", "com.bumptech.glide",   "com.facebook.stetho",
    "org.apache.commons.io", "com.jakewharton.timber", "com.airbnb.lottie",
    "com.google.ads",        "com.crashlytics.sdk",    "com.unity3d.ads",
    "org.jsoup",             "com.fasterxml.jackson",  "io.realm",
    "com.nostra13.imageloader", "org.osmdroid",        "com.github.mikephil.charting",
    "net.danlew.joda",       "com.amplitude.api",
};

const Tokens kLibrarySubpackages = {"internal", "util", "io", "cache", "core", "annotations"};

const char* kConsonants = "bcdfghjklmnprstvz";
const char* kVowels = "aeiou";

std::string make_word(Rng& rng, int syllables, bool capital) {
  std::string w;
  for (int i = 0; i < syllables; ++i) {
    w += kConsonants[rng.below(17)];
    w += kVowels[rng.below(5)];
    if (rng.chance(0.3)) w += kConsonants[rng.below(17)];
  }
  if (capital) w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

// Idioms shared by everyone. Authors differ in how often they reach for
// each one, not in having private ones.
struct Pools {
  std::vector<Tokens> api_idioms;
  std::vector<Tokens> instruction_idioms;
};

// A habit: cumulative weights over one shared pool.
struct Preference {
  std::vector<double> cumulative;

  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform() * cumulative.back();
    return static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                    cumulative.begin());
  }
};

// A few favorites carry most of the mass.
Preference make_preference(Rng& rng, std::size_t pool, int favorites) {
  std::vector<double> w(pool, 0.02);
  std::vector<std::size_t> order(pool);
  for (std::size_t i = 0; i < pool; ++i) order[i] = i;
  rng.shuffle(order);
  for (int i = 0; i < favorites && static_cast<std::size_t>(i) < pool; ++i) {
    w[order[static_cast<std::size_t>(i)]] = rng.uniform(0.3, 1.0);
  }
  Preference p;
  double acc = 0.0;
  for (double x : w) p.cumulative.push_back(acc += x);
  return p;
}

// Random choices in an app come either from an owner's habits or uniformly
// from the shared pools.
struct Style {
  const Pools* pools = nullptr;
  std::vector<std::string> morphemes;
  Preference api;
  Preference instructions;
  std::string field_prefix;
  double distinctiveness = 0.8;
};

struct AuthorStyle {
  std::string label;
  std::string root;  // e.g. "io.kavoti"
  Style style;
  std::vector<ClassRecord> signature_classes;  // package left empty
  std::vector<ManifestComponent> components;   // simple names only
  std::vector<std::string> features;
  std::vector<std::size_t> preferred_libraries;
};

struct LibraryModule {
  std::string root;
  std::vector<std::string> packages;
  std::vector<ClassRecord> classes;
  std::vector<RelationRecord> relations;
};

Tokens random_api_run(Rng& rng, int lo, int hi) {
  Tokens out;
  const int n = rng.between(lo, hi);
  for (int i = 0; i < n; ++i) out.push_back(rng.pick(kApiClasses) + "." + rng.pick(kApiMethods));
  return out;
}

Tokens random_opcode_run(Rng& rng, int lo, int hi) {
  Tokens out;
  const int n = rng.between(lo, hi);
  for (int i = 0; i < n; ++i) out.push_back(rng.pick(kOpcodes));
  return out;
}

Pools make_pools(Rng& rng) {
  Pools p;
  for (int i = 0; i < 30; ++i) p.api_idioms.push_back(random_api_run(rng, 3, 5));
  for (int i = 0; i < 30; ++i) p.instruction_idioms.push_back(random_opcode_run(rng, 4, 7));
  return p;
}

Style make_style(Rng& rng, const Pools& pools, double distinctiveness, int favorites) {
  Style s;
  s.pools = &pools;
  s.distinctiveness = distinctiveness;
  for (int i = 0; i < 8; ++i) s.morphemes.push_back(make_word(rng, 2, true));
  s.api = make_preference(rng, pools.api_idioms.size(), favorites);
  s.instructions = make_preference(rng, pools.instruction_idioms.size(), favorites);
  static const Tokens prefixes = {"m", "s", "", "k", "my"};
  s.field_prefix = rng.pick(prefixes);
  return s;
}

std::string noun(Rng& rng, const Style& s) {
  return rng.chance(s.distinctiveness) ? rng.pick(s.morphemes) : rng.pick(kNouns);
}

std::string class_name(Rng& rng, const Style& s) { return noun(rng, s) + rng.pick(kNouns); }

std::string field_name(Rng& rng, const Style& s) {
  std::string base = noun(rng, s);
  if (s.field_prefix.empty()) base[0] = static_cast<char>(base[0] - 'A' + 'a');
  return s.field_prefix + base;
}

MethodRecord make_method(Rng& rng, const Style& s) {
  MethodRecord m;
  m.name = rng.pick(kVerbs) + noun(rng, s);
  const int idioms = rng.between(2, 3);
  for (int i = 0; i < idioms; ++i) {
    const auto& pool = s.pools->instruction_idioms;
    const Tokens& run = rng.chance(s.distinctiveness) ? pool[s.instructions.draw(rng)] : rng.pick(pool);
    m.instructions.insert(m.instructions.end(), run.begin(), run.end());
  }
  m.instructions.push_back(rng.chance(0.5) ? "return-void" : "return-object");
  const auto& pool = s.pools->api_idioms;
  m.api_calls = rng.chance(s.distinctiveness) ? pool[s.api.draw(rng)] : rng.pick(pool);
  // Some helpers touch no platform API at all.
  if (rng.chance(0.15)) m.api_calls.clear();
  return m;
}

ClassRecord make_class(Rng& rng, const Style& s, int min_methods, int max_methods) {
  ClassRecord c;
  c.name = class_name(rng, s);
  const int fields = rng.between(1, 3);
  for (int i = 0; i < fields; ++i) c.fields.push_back(field_name(rng, s));
  const int methods = rng.between(min_methods, max_methods);
  for (int i = 0; i < methods; ++i) c.methods.push_back(make_method(rng, s));
  return c;
}

// Places a class template (simple name in c.name) into a package.
ClassRecord place(ClassRecord c, const std::string& package) {
  c.name = package + "." + c.name;
  c.package = PackageName(package);
  return c;
}

AuthorStyle make_author(Rng& rng, int index, const Pools& pools, std::size_t pool,
                        const GeneratorOptions& opt) {
  AuthorStyle a;
  const std::string handle = make_word(rng, 3, false);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", index);
  a.label = std::string("author-") + buf + "-" + handle;
  a.root = rng.pick(kDomains) + "." + handle;
  a.style = make_style(rng, pools, opt.distinctiveness, opt.favorite_idioms);

  for (int i = 0; i < 8; ++i) a.signature_classes.push_back(make_class(rng, a.style, 2, 3));

  static const Tokens activity_suffix = {"Activity", "Screen", "Act", "Page"};
  static const Tokens service_suffix = {"Service", "Worker", "Daemon"};
  static const Tokens receiver_suffix = {"Receiver", "Listener", "Broadcast"};
  const std::string act = rng.pick(activity_suffix);
  a.components.push_back({ComponentKind::activity, rng.pick(a.style.morphemes) + act});
  for (int i = 0; i < 3; ++i) {
    a.components.push_back({ComponentKind::activity, rng.pick(a.style.morphemes) + act});
  }
  a.components.push_back({ComponentKind::service, rng.pick(a.style.morphemes) + rng.pick(service_suffix)});
  a.components.push_back({ComponentKind::receiver, rng.pick(a.style.morphemes) + rng.pick(receiver_suffix)});

  Tokens features = kFeatures;
  rng.shuffle(features);
  a.features.assign(features.begin(), features.begin() + 5);

  std::vector<std::size_t> libs(pool);
  for (std::size_t i = 0; i < pool; ++i) libs[i] = i;
  rng.shuffle(libs);
  a.preferred_libraries.assign(libs.begin(), libs.begin() + std::min<std::size_t>(3, pool));
  return a;
}

LibraryModule make_library(Rng& rng, const Pools& pools, const std::string& root) {
  LibraryModule lib;
  lib.root = root;
  Style style = make_style(rng, pools, 0.9, 4);
  lib.packages.push_back(root);
  Tokens subs = kLibrarySubpackages;
  rng.shuffle(subs);
  const int extra = rng.between(2, 3);
  for (int i = 0; i < extra; ++i) lib.packages.push_back(root + "." + subs[static_cast<std::size_t>(i)]);
  // Libraries tend to nest deeper than app code.
  lib.packages.push_back(lib.packages[1] + "." + subs[static_cast<std::size_t>(extra)]);
  for (const auto& p : lib.packages) {
    const int classes = rng.between(8, 12);
    for (int i = 0; i < classes; ++i) {
      auto c = place(make_class(rng, style, 2, 4), p);
      // Names may repeat; keep them unique inside the library.
      while (std::any_of(lib.classes.begin(), lib.classes.end(),
                         [&](const ClassRecord& o) { return o.name == c.name; })) {
        c = place(make_class(rng, style, 2, 4), p);
      }
      lib.classes.push_back(std::move(c));
    }
  }
  // Entry package and the first internal package call each other; the rest
  // is reached one way.
  lib.relations.push_back({PackageName(lib.packages[0]), PackageName(lib.packages[1]),
                           RelationKind::call, rng.between(8, 25)});
  lib.relations.push_back({PackageName(lib.packages[1]), PackageName(lib.packages[0]),
                           RelationKind::call, rng.between(4, 12)});
  for (std::size_t i = 2; i < lib.packages.size(); ++i) {
    lib.relations.push_back({PackageName(lib.packages[rng.below(i)]), PackageName(lib.packages[i]),
                             RelationKind::call, rng.between(5, 15)});
  }
  return lib;
}

LabeledApp make_app(Rng& rng, const AuthorStyle& author, int app_index,
                    const std::vector<LibraryModule>& pool, const GeneratorOptions& opt) {
  LabeledApp app;
  auto& b = app.bundle;
  const std::string app_word = make_word(rng, 2, false);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", app_index);
  b.app_id = author.root + "." + app_word + "-" + buf;
  b.author_label = author.label;

  // Primary module packages.
  const std::string root = author.root + "." + app_word;
  Tokens subs = kSubpackages;
  rng.shuffle(subs);
  const int package_count = rng.between(3, 5);
  std::vector<std::string> primary = {root};
  for (int i = 1; i < package_count; ++i) primary.push_back(root + "." + subs[static_cast<std::size_t>(i)]);

  std::vector<ClassRecord> classes;
  auto add_class = [&](ClassRecord c) {
    while (std::any_of(classes.begin(), classes.end(),
                       [&](const ClassRecord& o) { return o.name == c.name; })) {
      c.name += "Impl";
    }
    classes.push_back(std::move(c));
  };

  // Manifest components live in the first two packages.
  std::vector<ManifestComponent> components;
  for (std::size_t i = 0; i < author.components.size(); ++i) {
    if (i > 0 && !rng.chance(0.6)) continue;
    const auto& tmpl = author.components[i];
    const std::string& pkg = primary[i == 0 ? 0 : rng.below(2)];
    ClassRecord c;
    c.name = tmpl.name;
    c.is_component = tmpl.kind;
    c.superclass = tmpl.kind == ComponentKind::activity  ? "android.app.Activity"
                   : tmpl.kind == ComponentKind::service ? "android.app.Service"
                                                         : "android.content.BroadcastReceiver";
    c.fields.push_back(field_name(rng, author.style));
    MethodRecord on_create{"onCreate", random_opcode_run(rng, 3, 6),
                           {"android.app.Activity.onCreate"}, true};
    c.methods.push_back(std::move(on_create));
    c.methods.push_back(make_method(rng, author.style));
    c = place(std::move(c), pkg);
    components.push_back({tmpl.kind, c.name});
    add_class(std::move(c));
  }

  // Copied utility classes the author carries between projects.
  std::vector<std::size_t> sig(author.signature_classes.size());
  for (std::size_t i = 0; i < sig.size(); ++i) sig[i] = i;
  rng.shuffle(sig);
  const int copies = rng.between(3, 5);
  for (int i = 0; i < copies; ++i) {
    add_class(place(author.signature_classes[sig[static_cast<std::size_t>(i)]],
                    primary[rng.below(primary.size())]));
  }
  for (const auto& p : primary) {
    const int fresh = rng.between(6, 8);
    for (int i = 0; i < fresh; ++i) add_class(place(make_class(rng, author.style, 2, 5), p));
  }
  // A few classes extend a class from a sibling package.
  for (auto& c : classes) {
    if (c.superclass || !rng.chance(0.25)) continue;
    const auto& other = classes[rng.below(classes.size())];
    if (other.package != c.package && !other.is_component) c.superclass = other.name;
  }

  for (auto& c : classes) app.truth[c.name] = Provenance::primary;

  std::vector<RelationRecord> relations;
  auto rel = [&](const std::string& a, const std::string& z, RelationKind k, int count) {
    relations.push_back({PackageName(a), PackageName(z), k, count});
  };
  // Guaranteed circle through the first three primary packages.
  rel(primary[0], primary[1], RelationKind::call, rng.between(6, 20));
  rel(primary[1], primary[2], RelationKind::call, rng.between(6, 20));
  rel(primary[2], primary[0], RelationKind::call, rng.between(4, 12));
  for (std::size_t i = 0; i < primary.size(); ++i) {
    for (std::size_t j = 0; j < primary.size(); ++j) {
      if (i != j && rng.chance(0.3)) rel(primary[i], primary[j], RelationKind::call, rng.between(2, 10));
    }
  }
  for (std::size_t i = 3; i < primary.size(); ++i) {
    rel(primary[rng.below(3)], primary[i], RelationKind::call, rng.between(4, 12));
  }
  if (components.size() > 1) {
    const auto from = package_of_class(components[0].name);
    const auto to = package_of_class(components.back().name);
    if (from != to) rel(from, to, RelationKind::icc, 1);
  }

  // Shared library modules.
  const int modules = rng.between(opt.min_modules, opt.max_modules);
  const auto want = std::min<std::size_t>(static_cast<std::size_t>(std::max(0, modules - 1)), pool.size());
  std::set<std::size_t> chosen;
  while (chosen.size() < want) {
    const std::size_t pick = rng.chance(opt.library_preference) && !author.preferred_libraries.empty()
                                 ? rng.pick(author.preferred_libraries)
                                 : rng.below(pool.size());
    chosen.insert(pick);
  }
  std::vector<std::string> packages = primary;
  for (auto idx : chosen) {
    const auto& lib = pool[idx];
    packages.insert(packages.end(), lib.packages.begin(), lib.packages.end());
    for (const auto& c : lib.classes) {
      classes.push_back(c);
      app.truth[c.name] = Provenance::library;
    }
    relations.insert(relations.end(), lib.relations.begin(), lib.relations.end());
    const int callers = rng.between(1, 2);
    for (int i = 0; i < callers; ++i) {
      // Mostly through the library's entry package.
      const auto& target = rng.chance(0.7) ? lib.packages[0] : lib.packages[rng.below(lib.packages.size())];
      rel(primary[rng.below(primary.size())], target, RelationKind::call,
          rng.between(1, std::max(1, opt.max_library_calls)));
    }
    if (rng.chance(opt.list_library_probability)) b.libraries.push_back(lib.root);
  }

  // Platform packages the app touches; filtered downstream.
  for (const char* fw : {"android.app", "android.widget", "androidx.appcompat.app"}) {
    packages.emplace_back(fw);
    rel(primary[rng.below(primary.size())], fw, RelationKind::call, rng.between(1, 5));
  }

  for (auto& p : packages) b.packages.emplace_back(p);
  b.classes = std::move(classes);
  b.relations = std::move(relations);
  b.manifest.components = components;
  b.manifest.main_activity = components.front().name;
  for (const auto& f : author.features) {
    if (rng.chance(0.75)) b.manifest.uses_features.push_back(f);
  }
  if (rng.chance(1.0 - opt.distinctiveness)) b.manifest.uses_features.push_back(rng.pick(kFeatures));
  return app;
}

}  // namespace

std::vector<LabeledApp> generate_corpus(const GeneratorOptions& opt) {
  Rng world(mix_seed(opt.seed, 0));
  const Pools pools = make_pools(world);
  Tokens roots = kLibraryRoots;
  world.shuffle(roots);
  const auto pool_size = std::min<std::size_t>(static_cast<std::size_t>(std::max(0, opt.library_pool)), roots.size());
  std::vector<LibraryModule> pool;
  for (std::size_t i = 0; i < pool_size; ++i) pool.push_back(make_library(world, pools, roots[i]));

  std::vector<LabeledApp> corpus;
  std::set<std::string> roots_taken;
  for (int a = 0; a < opt.authors; ++a) {
    Rng rng(mix_seed(opt.seed, 1000 + static_cast<std::uint64_t>(a)));
    AuthorStyle author = make_author(rng, a, pools, pool.size(), opt);
    while (!roots_taken.insert(author.root).second) author = make_author(rng, a, pools, pool.size(), opt);
    for (int j = 0; j < opt.apps_per_author; ++j) {
      Rng app_rng(mix_seed(opt.seed, 1'000'000 + static_cast<std::uint64_t>(a) * 10'000 + j));
      corpus.push_back(make_app(app_rng, author, j, pool, opt));
    }
  }
  return corpus;
}

std::string write_truth(const GroundTruth& truth) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, p] : truth) j[name] = std::string(to_string(p));
  return j.dump() + "\n";
}

GroundTruth parse_truth(std::string_view document) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("ground truth is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("ground truth must be an object");
  GroundTruth truth;
  for (const auto& [name, value] : j.items()) {
    if (value == "primary") truth[name] = Provenance::primary;
    else if (value == "library") truth[name] = Provenance::library;
    else throw SchemaError("/" + name + ": expected \"primary\" or \"library\"");
  }
  return truth;
}

void write_corpus(const std::vector<LabeledApp>& corpus, const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& app : corpus) {
    write_bundle_file(app.bundle, (fs::path(dir) / (app.bundle.app_id + ".bundle.json")).string());
    std::ofstream out(fs::path(dir) / (app.bundle.app_id + ".truth.json"), std::ios::binary);
    if (!out) throw IoError("cannot write ground truth for " + app.bundle.app_id);
    out << write_truth(app.truth);
  }
}

LoadedCorpus load_corpus(const std::string& dir) {
  LoadedCorpus out;
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.ends_with(".bundle.json")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      LabeledApp app;
      app.bundle = read_bundle_file(f.string());
      auto truth_path = f.string();
      truth_path.replace(truth_path.size() - std::string(".bundle.json").size(), std::string::npos,
                         ".truth.json");
      if (fs::exists(truth_path)) {
        std::ifstream in(truth_path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        app.truth = parse_truth(buf.str());
      }
      out.apps.push_back(std::move(app));
    } catch (const Error& e) {
      out.failures.push_back(f.string() + ": " + e.what());
    }
  }
  std::stable_sort(out.apps.begin(), out.apps.end(), [](const LabeledApp& a, const LabeledApp& b) {
    return a.bundle.app_id < b.bundle.app_id;
  });
  return out;
}

std::vector<LabeledApp> least_apps_filter(const std::vector<LabeledApp>& corpus, int min_apps) {
  std::map<std::string, int> per_author;
  for (const auto& app : corpus) {
    if (app.bundle.author_label) ++per_author[*app.bundle.author_label];
  }
  std::vector<LabeledApp> out;
  for (const auto& app : corpus) {
    if (app.bundle.author_label && per_author[*app.bundle.author_label] >= min_apps) {
      out.push_back(app);
    }
  }
  if (out.empty()) {
    throw EmptyResult("no author has at least " + std::to_string(min_apps) + " apps");
  }
  return out;
}

std::vector<Fold> kfold_split(const std::vector<LabeledApp>& corpus, int k, std::uint64_t seed) {
  if (k < 2) throw KTooLarge("k must be at least 2");
  std::map<std::string, std::vector<std::size_t>> by_author;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& label = corpus[i].bundle.author_label;
    if (!label) throw Error("app '" + corpus[i].bundle.app_id + "' has no author label");
    by_author[*label].push_back(i);
  }
  for (const auto& [label, apps] : by_author) {
    if (static_cast<int>(apps.size()) < k) {
      throw KTooLarge("author '" + label + "' has " + std::to_string(apps.size()) +
                      " apps, fewer than k = " + std::to_string(k));
    }
  }

  std::vector<Fold> folds(static_cast<std::size_t>(k));
  Rng rng(seed);
  std::size_t offset = 0;
  for (auto& [label, apps] : by_author) {
    rng.shuffle(apps);
    for (std::size_t j = 0; j < apps.size(); ++j) {
      folds[(offset + j) % static_cast<std::size_t>(k)].test.push_back(apps[j]);
    }
    offset += apps.size();
  }
  for (auto& fold : folds) {
    std::sort(fold.test.begin(), fold.test.end());
    std::vector<char> in_test(corpus.size(), 0);
    for (auto t : fold.test) in_test[t] = 1;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (!in_test[i]) fold.train.push_back(i);
    }
  }
  return folds;
}

std::vector<std::string> label_index(const std::vector<LabeledApp>& corpus) {
  std::set<std::string> labels;
  for (const auto& app : corpus) {
    if (app.bundle.author_label) labels.insert(*app.bundle.author_label);
  }
  return {labels.begin(), labels.end()};
}

}  // namespace authorprint
