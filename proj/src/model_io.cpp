#include <json.hpp>

#include "swingnam/csv.hpp"
#include "swingnam/models.hpp"

namespace swingnam {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void corrupt(std::string_view source, const std::string& what) {
  throw Error(ErrorCode::CorruptFile, std::string(source) + ": " + what);
}

ordered_json to_json(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vector_from(const nlohmann::json& arr, std::string_view source, const std::string& field) {
  if (!arr.is_array()) corrupt(source, field + " is not an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) corrupt(source, field + " holds a non-number");
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return v;
}

const nlohmann::json& field(const nlohmann::json& obj, const char* key, std::string_view source) {
  if (!obj.is_object()) corrupt(source, std::string("expected an object holding '") + key + "'");
  const auto it = obj.find(key);
  if (it == obj.end()) corrupt(source, std::string("missing field '") + key + "'");
  return *it;
}

ordered_json standardization_json(const Standardizer& s) {
  ordered_json out;
  out["convention"] = "population";
  out["mean"] = to_json(s.mean);
  out["scale"] = to_json(s.scale);
  ordered_json flags = ordered_json::array();
  for (bool c : s.constant) flags.push_back(c);
  out["constant"] = std::move(flags);
  return out;
}

Standardizer standardization_from(const nlohmann::json& j, std::string_view source) {
  Standardizer s;
  s.mean = vector_from(field(j, "mean", source), source, "standardization.mean");
  s.scale = vector_from(field(j, "scale", source), source, "standardization.scale");
  const auto& flags = field(j, "constant", source);
  if (!flags.is_array()) corrupt(source, "standardization.constant is not an array");
  for (const auto& f : flags) {
    if (!f.is_boolean()) corrupt(source, "standardization.constant holds a non-boolean");
    s.constant.push_back(f.get<bool>());
  }
  if (s.scale.size() != s.mean.size() || static_cast<Eigen::Index>(s.constant.size()) != s.mean.size()) {
    corrupt(source, "standardization arrays differ in length");
  }
  return s;
}

ordered_json header_parameters(const ModelHeader& h) {
  ordered_json p;
  p["target"] = h.target;
  p["feature_names"] = h.feature_names;
  return p;
}

ordered_json parameters_json(const LinearModel& m) {
  ordered_json p = header_parameters(m.header);
  p["weights"] = to_json(m.weights);
  p["bias"] = m.bias;
  return p;
}

ordered_json parameters_json(const AdditiveModel& m) {
  ordered_json p = header_parameters(m.header);
  p["bias"] = m.bias;
  p["activation"] = m.subnets.empty() ? "softplus" : std::string(to_string(m.subnets.front().activation));
  ordered_json nets = ordered_json::array();
  for (const ShapeNet& net : m.subnets) {
    ordered_json layers = ordered_json::array();
    for (const DenseLayer& layer : net.layers) {
      ordered_json l;
      l["rows"] = layer.weight.rows();
      l["cols"] = layer.weight.cols();
      l["weight"] = to_json(Eigen::Map<const Eigen::VectorXd>(layer.weight.data(), layer.weight.size()));
      l["bias"] = to_json(layer.bias);
      layers.push_back(std::move(l));
    }
    nets.push_back({{"layers", std::move(layers)}});
  }
  p["subnets"] = std::move(nets);
  return p;
}

}  // namespace

const ModelHeader& header_of(const Model& model) {
  return std::visit([](const auto& m) -> const ModelHeader& { return m.header; }, model);
}

double predict(const Model& model, const Eigen::VectorXd& raw) {
  return std::visit([&](const auto& m) { return predict(m, raw); }, model);
}

Eigen::VectorXd predict_rows(const Model& model, const Eigen::MatrixXd& raw) {
  Eigen::VectorXd out(raw.rows());
  for (Eigen::Index r = 0; r < raw.rows(); ++r) out(r) = predict(model, Eigen::VectorXd(raw.row(r).transpose()));
  return out;
}

std::string serialize_model(const Model& model) {
  const ModelHeader& h = header_of(model);
  ordered_json doc;
  doc["version"] = kModelFormatVersion;
  doc["task"] = std::string(to_string(h.task));
  doc["schema_fingerprint"] = schema_fingerprint(h.feature_names);
  doc["standardization"] = standardization_json(h.standardization);
  doc["model_kind"] = std::holds_alternative<LinearModel>(model) ? "linear" : "nam";
  doc["parameters"] = std::visit([](const auto& m) { return parameters_json(m); }, model);
  return doc.dump(1) + "\n";
}

Model parse_model(std::string_view text, std::string_view source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    corrupt(source, e.what());
  }
  try {
    const auto& version = field(doc, "version", source);
    if (!version.is_number_integer()) corrupt(source, "version is not an integer");
    if (version.get<int>() != kModelFormatVersion) {
      throw Error(ErrorCode::VersionMismatch, std::string(source) + ": model format version " +
                                                  std::to_string(version.get<int>()) + " is not supported (expected " +
                                                  std::to_string(kModelFormatVersion) + ")");
    }

    ModelHeader header;
    const std::string task = field(doc, "task", source).get<std::string>();
    if (task == "binary") {
      header.task = Task::Binary;
    } else if (task == "regression") {
      header.task = Task::Regression;
    } else {
      corrupt(source, "unknown task '" + task + "'");
    }
    header.standardization = standardization_from(field(doc, "standardization", source), source);
    const auto& params = field(doc, "parameters", source);
    header.target = field(params, "target", source).get<std::string>();
    header.feature_names = field(params, "feature_names", source).get<std::vector<std::string>>();
    const auto d = static_cast<Eigen::Index>(header.feature_names.size());
    if (field(doc, "schema_fingerprint", source).get<std::string>() != schema_fingerprint(header.feature_names)) {
      corrupt(source, "schema fingerprint does not match the feature names");
    }
    if (header.standardization.dims() != d) corrupt(source, "standardization width does not match feature count");

    const std::string kind = field(doc, "model_kind", source).get<std::string>();
    if (kind == "linear") {
      LinearModel m;
      m.header = std::move(header);
      m.weights = vector_from(field(params, "weights", source), source, "parameters.weights");
      m.bias = field(params, "bias", source).get<double>();
      if (m.weights.size() != d) corrupt(source, "weight count does not match feature count");
      return m;
    }
    if (kind != "nam") corrupt(source, "unknown model_kind '" + kind + "'");

    AdditiveModel m;
    m.header = std::move(header);
    m.bias = field(params, "bias", source).get<double>();
    const std::string act = field(params, "activation", source).get<std::string>();
    if (act != "softplus" && act != "tanh") corrupt(source, "unknown activation '" + act + "'");
    const Activation activation = act == "tanh" ? Activation::Tanh : Activation::Softplus;
    const auto& nets = field(params, "subnets", source);
    if (!nets.is_array() || static_cast<Eigen::Index>(nets.size()) != d) corrupt(source, "subnet count does not match feature count");
    for (const auto& jn : nets) {
      ShapeNet net;
      net.activation = activation;
      const auto& layers = field(jn, "layers", source);
      if (!layers.is_array() || layers.empty()) corrupt(source, "subnet has no layers");
      Eigen::Index expected_in = 1;
      for (const auto& jl : layers) {
        const auto rows = field(jl, "rows", source).get<Eigen::Index>();
        const auto cols = field(jl, "cols", source).get<Eigen::Index>();
        if (rows <= 0 || cols != expected_in) corrupt(source, "layer shapes do not chain");
        const Eigen::VectorXd w = vector_from(field(jl, "weight", source), source, "layer.weight");
        const Eigen::VectorXd b = vector_from(field(jl, "bias", source), source, "layer.bias");
        if (w.size() != rows * cols || b.size() != rows) corrupt(source, "layer arrays have the wrong size");
        net.layers.push_back({Eigen::Map<const Eigen::MatrixXd>(w.data(), rows, cols), b});
        expected_in = rows;
      }
      if (expected_in != 1) corrupt(source, "subnet output is not scalar");
      m.subnets.push_back(std::move(net));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    corrupt(source, e.what());
  }
}

void save_model(const Model& model, const std::filesystem::path& path) {
  io::write_text_file(path, serialize_model(model));
}

Model load_model(const std::filesystem::path& path) {
  return parse_model(io::read_text_file(path), path.string());
}

}  // namespace swingnam
