#include "authorprint/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "authorprint/errors.hpp"

namespace authorprint {

namespace {

using nlohmann::json;

constexpr std::string_view kMagic = "AUTHPRNT";
constexpr std::size_t kHeaderSize = 8 + 4 + 8 + 8;

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void put_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint64_t get_le(std::string_view in, std::size_t offset, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  }
  return v;
}

template <typename Matrix>
json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

template <typename Matrix>
Matrix matrix_from(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows) throw CorruptArtifact("matrix row count mismatch");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = data.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw CorruptArtifact("matrix column count mismatch");
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
  }
  return m;
}

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json options_json(const PipelineOptions& o) {
  return {
      {"framework_prefixes", o.decouple.framework_prefixes},
      {"libraries", o.decouple.libraries},
      {"mode", o.decouple.mode.kind == PairWeightMode::Kind::max ? "max" : "alpha"},
      {"alpha", o.decouple.mode.alpha},
      {"louvain_tolerance", o.decouple.louvain_tolerance},
      {"framework_overrides", o.framework_overrides},
      {"scope", std::string(to_string(o.scope))},
      {"tfidf", {{"min_n", o.tfidf.min_n}, {"max_n", o.tfidf.max_n}, {"min_df", o.tfidf.min_df},
                 {"max_features", o.tfidf.max_features}}},
      {"embedding", {{"window", o.embedding.window}, {"min_count", o.embedding.min_count},
                     {"dimension", o.embedding.dimension}, {"negatives", o.embedding.negatives},
                     {"epochs", o.embedding.epochs}, {"learning_rate", o.embedding.learning_rate},
                     {"seed", o.embedding.seed}}},
      {"classifier", std::string(to_string(o.classifier))},
      {"logreg", {{"l2", o.logreg.l2}, {"learning_rate", o.logreg.learning_rate},
                  {"epochs", o.logreg.epochs}}},
      {"svm", {{"c", o.svm.c}, {"learning_rate", o.svm.learning_rate}, {"epochs", o.svm.epochs}}},
      {"forest", {{"trees", o.forest.trees}, {"max_features", o.forest.max_features},
                  {"min_samples_split", o.forest.min_samples_split}}},
      {"seed", o.seed},
  };
}

PipelineOptions options_from(const json& j) {
  PipelineOptions o;
  o.decouple.framework_prefixes = j.at("framework_prefixes").get<std::vector<std::string>>();
  o.decouple.libraries = j.at("libraries").get<std::vector<std::string>>();
  o.decouple.mode = j.at("mode") == "max" ? PairWeightMode::max_mode()
                                           : PairWeightMode::blend(j.at("alpha").get<double>());
  o.decouple.louvain_tolerance = j.at("louvain_tolerance").get<double>();
  o.framework_overrides = j.at("framework_overrides").get<std::vector<std::string>>();
  o.scope = parse_feature_scope(j.at("scope").get<std::string>());
  const auto& t = j.at("tfidf");
  o.tfidf = {t.at("min_n").get<int>(), t.at("max_n").get<int>(), t.at("min_df").get<int>(),
             t.at("max_features").get<int>()};
  const auto& e = j.at("embedding");
  o.embedding.window = e.at("window").get<int>();
  o.embedding.min_count = e.at("min_count").get<int>();
  o.embedding.dimension = e.at("dimension").get<int>();
  o.embedding.negatives = e.at("negatives").get<int>();
  o.embedding.epochs = e.at("epochs").get<int>();
  o.embedding.learning_rate = e.at("learning_rate").get<double>();
  o.embedding.seed = e.at("seed").get<std::uint64_t>();
  o.classifier = parse_classifier_kind(j.at("classifier").get<std::string>());
  const auto& lr = j.at("logreg");
  o.logreg.l2 = lr.at("l2").get<double>();
  o.logreg.learning_rate = lr.at("learning_rate").get<double>();
  o.logreg.epochs = lr.at("epochs").get<int>();
  const auto& svm = j.at("svm");
  o.svm.c = svm.at("c").get<double>();
  o.svm.learning_rate = svm.at("learning_rate").get<double>();
  o.svm.epochs = svm.at("epochs").get<int>();
  const auto& f = j.at("forest");
  o.forest.trees = f.at("trees").get<int>();
  o.forest.max_features = f.at("max_features").get<int>();
  o.forest.min_samples_split = f.at("min_samples_split").get<int>();
  o.seed = j.at("seed").get<std::uint64_t>();
  o.logreg.seed = o.svm.seed = o.forest.seed = o.seed;
  return o;
}

json vocab_json(const TfidfVocabulary& v) {
  return {{"category", std::string(to_string(v.category))},
          {"selected", v.selected},
          {"idf", v.idf},
          {"document_frequency", v.document_frequency},
          {"documents", v.documents}};
}

TfidfVocabulary vocab_from(const json& j) {
  TfidfVocabulary v;
  const auto category = parse_feature_category(j.at("category").get<std::string>());
  if (!category) throw CorruptArtifact("unknown feature category");
  v.category = *category;
  v.selected = j.at("selected").get<std::vector<std::string>>();
  v.idf = j.at("idf").get<std::map<std::string, double>>();
  v.document_frequency = j.at("document_frequency").get<std::map<std::string, int>>();
  v.documents = j.at("documents").get<int>();
  return v;
}

json classifier_json(const Classifier& c) {
  json out = {{"kind", std::string(to_string(c.kind))},
              {"num_classes", c.num_classes},
              {"num_features", c.num_features}};
  if (c.kind == ClassifierKind::random_forest) {
    json trees = json::array();
    for (const auto& t : c.forest.trees) {
      json nodes = json::array();
      for (const auto& n : t.nodes) nodes.push_back({n.feature, n.threshold, n.left, n.right, n.label});
      trees.push_back(std::move(nodes));
    }
    out["forest"] = {{"trees", std::move(trees)}, {"oob_accuracy", c.forest.oob_accuracy}};
  } else {
    const auto& l = c.linear;
    out["linear"] = {{"mean", vector_json(l.scaler.mean)},
                     {"scale", vector_json(l.scaler.scale)},
                     {"weights", matrix_json(l.weights)},
                     {"bias", vector_json(l.bias)},
                     {"loss_history", l.loss_history}};
  }
  return out;
}

Classifier classifier_from(const json& j) {
  Classifier c;
  c.kind = parse_classifier_kind(j.at("kind").get<std::string>());
  c.num_classes = j.at("num_classes").get<int>();
  c.num_features = j.at("num_features").get<int>();
  if (c.kind == ClassifierKind::random_forest) {
    const auto& f = j.at("forest");
    c.forest.oob_accuracy = f.at("oob_accuracy").get<double>();
    for (const auto& t : f.at("trees")) {
      DecisionTree tree;
      for (const auto& n : t) {
        TreeNode node{n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(), n.at(3).get<int>(),
                      n.at(4).get<int>()};
        const auto size = static_cast<int>(t.size());
        if (node.feature >= c.num_features || node.left >= size || node.right >= size ||
            (node.feature >= 0 && (node.left < 0 || node.right < 0))) {
          throw CorruptArtifact("tree node out of range");
        }
        tree.nodes.push_back(node);
      }
      if (tree.nodes.empty()) throw CorruptArtifact("empty tree");
      c.forest.trees.push_back(std::move(tree));
    }
  } else {
    const auto& l = j.at("linear");
    c.linear.scaler.mean = vector_from(l.at("mean"));
    c.linear.scaler.scale = vector_from(l.at("scale"));
    c.linear.weights = matrix_from<Eigen::MatrixXd>(l.at("weights"));
    c.linear.bias = vector_from(l.at("bias"));
    c.linear.loss_history = l.at("loss_history").get<std::vector<double>>();
    if (c.linear.weights.rows() != c.num_classes || c.linear.weights.cols() != c.num_features ||
        c.linear.bias.size() != c.num_classes || c.linear.scaler.mean.size() != c.num_features ||
        c.linear.scaler.scale.size() != c.num_features) {
      throw CorruptArtifact("linear model shapes disagree");
    }
  }
  return c;
}

json embedding_json(const EmbeddingTable& e) {
  return {{"tokens", e.tokens},
          {"counts", e.counts},
          {"vectors", matrix_json(e.vectors)},
          {"epoch_loss", e.epoch_loss}};
}

EmbeddingTable embedding_from(const json& j, const EmbeddingOptions& options) {
  EmbeddingTable e;
  e.options = options;
  e.tokens = j.at("tokens").get<std::vector<std::string>>();
  e.counts = j.at("counts").get<std::vector<long long>>();
  e.vectors = matrix_from<RowMatrix>(j.at("vectors"));
  e.epoch_loss = j.at("epoch_loss").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(e.tokens.size()) != e.vectors.rows() || e.counts.size() != e.tokens.size()) {
    throw CorruptArtifact("embedding shapes disagree");
  }
  rebuild_index(e);
  return e;
}

}  // namespace

std::string serialize_model(const TrainedModel& model) {
  json vocabs = json::array();
  for (const auto& v : model.features.vocabs) vocabs.push_back(vocab_json(v));
  const json payload = {
      {"schema_version", kBundleSchemaVersion},
      {"options", options_json(model.options)},
      {"labels", model.labels},
      {"vocabularies", std::move(vocabs)},
      {"embedding", embedding_json(model.features.embedding)},
      {"classifier", classifier_json(model.classifier)},
  };
  const std::string body = payload.dump();
  std::string out(kMagic);
  put_le(out, kModelFormatVersion, 4);
  put_le(out, body.size(), 8);
  put_le(out, fnv1a(body), 8);
  out += body;
  return out;
}

TrainedModel deserialize_model(std::string_view bytes) {
  if (bytes.size() < kHeaderSize || bytes.substr(0, kMagic.size()) != kMagic) {
    throw CorruptArtifact("not a model artifact");
  }
  const auto version = get_le(bytes, 8, 4);
  if (version != kModelFormatVersion) {
    throw VersionMismatch("model format version " + std::to_string(version) + ", expected " +
                          std::to_string(kModelFormatVersion));
  }
  const auto length = get_le(bytes, 12, 8);
  const auto checksum = get_le(bytes, 20, 8);
  const auto body = bytes.substr(kHeaderSize);
  if (body.size() != length) throw CorruptArtifact("payload length mismatch (truncated file?)");
  if (fnv1a(body) != checksum) throw CorruptArtifact("payload checksum mismatch");

  try {
    const auto j = json::parse(body);
    TrainedModel model;
    model.options = options_from(j.at("options"));
    model.labels = j.at("labels").get<std::vector<std::string>>();
    const auto& vocabs = j.at("vocabularies");
    if (vocabs.size() != kCategoryCount) throw CorruptArtifact("expected six vocabularies");
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
      model.features.vocabs[i] = vocab_from(vocabs.at(i));
      if (model.features.vocabs[i].category != kAllCategories[i]) {
        throw CorruptArtifact("vocabularies out of category order");
      }
    }
    model.features.embedding = embedding_from(j.at("embedding"), model.options.embedding);
    model.classifier = classifier_from(j.at("classifier"));
    if (model.classifier.num_classes != static_cast<int>(model.labels.size())) {
      throw CorruptArtifact("label index does not match class count");
    }
    if (model.classifier.num_features !=
        fingerprint_layout(static_cast<int>(model.features.embedding.dimension())).length) {
      throw CorruptArtifact("classifier width does not match fingerprint length");
    }
    return model;
  } catch (const json::exception& e) {
    throw CorruptArtifact(std::string("unreadable model payload: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << serialize_model(model);
  if (!out) throw IoError("cannot write " + path);
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_model(buf.str());
}

}  // namespace authorprint
