#include "run_config.hpp"

#include <fstream>
#include <map>
#include <set>

namespace tensordict::cli {

namespace {

using nlohmann::json;

enum class Kind { PositiveInt, NonNegativeInt, PositiveNumber, NonNegativeNumber, Bool, String, Object };

struct Field {
  Kind kind;
  std::set<std::string> choices = {};
};

using Schema = std::map<std::string, Field>;

const std::map<std::string, Schema>& sections() {
  static const std::map<std::string, Schema> s = {
      {"sgd",
       {{"eta", {Kind::PositiveNumber}},
        {"iters", {Kind::PositiveInt}},
        {"noise_scale", {Kind::NonNegativeNumber}},
        {"batch", {Kind::PositiveInt}},
        {"schedule", {Kind::String, {"constant", "inverse_t"}}},
        {"t_burn", {Kind::NonNegativeInt}},
        {"per_column_noise", {Kind::Bool}},
        {"trace_every", {Kind::PositiveInt}}}},
      {"als",
       {{"max_iters", {Kind::PositiveInt}},
        {"tol", {Kind::PositiveNumber}},
        {"pinv_cutoff", {Kind::PositiveNumber}},
        {"restarts", {Kind::PositiveInt}}}},
      {"altmin",
       {{"max_iters", {Kind::PositiveInt}},
        {"tol", {Kind::NonNegativeNumber}},
        {"activation_ridge", {Kind::NonNegativeNumber}},
        {"ridge_fallback", {Kind::PositiveNumber}}}},
      {"embed",
       {{"k", {Kind::PositiveInt}},
        {"n", {Kind::PositiveInt}},
        {"L", {Kind::PositiveInt}},
        {"kpool", {Kind::PositiveInt}},
        {"oov", {Kind::String, {"skip", "error"}}}}},
      {"decompose", {{"components", {Kind::PositiveInt}}, {"target_error", {Kind::PositiveNumber}}}},
  };
  return s;
}

const Schema& top_level() {
  static const Schema s = {{"seed", {Kind::NonNegativeInt}},
                           {"input", {Kind::String}},
                           {"output", {Kind::String}},
                           {"sgd", {Kind::Object}},
                           {"als", {Kind::Object}},
                           {"altmin", {Kind::Object}},
                           {"embed", {Kind::Object}},
                           {"decompose", {Kind::Object}}};
  return s;
}

void check(const std::string& key, const json& v, const Field& f) {
  auto fail = [&](const std::string& what) { throw ConfigError("config key '" + key + "' " + what); };
  switch (f.kind) {
    case Kind::PositiveInt:
      if (!v.is_number_integer() || v.get<long long>() < 1) fail("must be a positive integer");
      break;
    case Kind::NonNegativeInt:
      if (!v.is_number_integer() || v.get<long long>() < 0) fail("must be a non-negative integer");
      break;
    case Kind::PositiveNumber:
      if (!v.is_number() || !(v.get<double>() > 0)) fail("must be a positive number");
      break;
    case Kind::NonNegativeNumber:
      if (!v.is_number() || !(v.get<double>() >= 0)) fail("must be a non-negative number");
      break;
    case Kind::Bool:
      if (!v.is_boolean()) fail("must be true or false");
      break;
    case Kind::String:
      if (!v.is_string()) fail("must be a string");
      if (!f.choices.empty() && !f.choices.count(v.get<std::string>())) {
        std::string options;
        for (const auto& c : f.choices) options += (options.empty() ? "" : ", ") + c;
        fail("must be one of: " + options);
      }
      break;
    case Kind::Object:
      if (!v.is_object()) fail("must be an object");
      break;
  }
}

void check_object(const json& obj, const Schema& schema, const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    const auto it = schema.find(key);
    if (it == schema.end()) throw ConfigError("unknown config key '" + path + "'");
    check(path, value, it->second);
  }
}

template <typename T>
void set_if(const json& section, const char* key, T& target) {
  if (section.contains(key)) target = section.at(key).get<T>();
}

}  // namespace

RunConfig RunConfig::parse(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  check_object(doc, top_level(), "");
  for (const auto& [name, schema] : sections())
    if (doc.contains(name)) check_object(doc.at(name), schema, name);
  RunConfig cfg;
  cfg.doc_ = doc;
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse(doc);
}

std::optional<std::uint64_t> RunConfig::seed() const {
  if (!doc_.contains("seed")) return std::nullopt;
  return doc_.at("seed").get<std::uint64_t>();
}

std::optional<std::string> RunConfig::input() const {
  if (!doc_.contains("input")) return std::nullopt;
  return doc_.at("input").get<std::string>();
}

std::optional<std::string> RunConfig::output() const {
  if (!doc_.contains("output")) return std::nullopt;
  return doc_.at("output").get<std::string>();
}

std::optional<Index> RunConfig::components() const {
  if (!doc_.contains("decompose") || !doc_.at("decompose").contains("components")) return std::nullopt;
  return doc_.at("decompose").at("components").get<Index>();
}

std::optional<double> RunConfig::target_error() const {
  if (!doc_.contains("decompose") || !doc_.at("decompose").contains("target_error")) return std::nullopt;
  return doc_.at("decompose").at("target_error").get<double>();
}

void RunConfig::apply(saddle::SgdConfig& cfg) const {
  if (!doc_.contains("sgd")) return;
  const auto& s = doc_.at("sgd");
  set_if(s, "eta", cfg.eta);
  set_if(s, "iters", cfg.iters);
  set_if(s, "noise_scale", cfg.noise_scale);
  set_if(s, "batch", cfg.batch);
  set_if(s, "t_burn", cfg.t_burn);
  set_if(s, "per_column_noise", cfg.per_column_noise);
  set_if(s, "trace_every", cfg.trace_every);
  if (s.contains("schedule"))
    cfg.schedule = s.at("schedule") == "constant" ? saddle::Schedule::Constant : saddle::Schedule::InverseT;
}

void RunConfig::apply(conv::AlsConfig& cfg) const {
  if (!doc_.contains("als")) return;
  const auto& s = doc_.at("als");
  set_if(s, "max_iters", cfg.max_iters);
  set_if(s, "tol", cfg.tol);
  set_if(s, "pinv_cutoff", cfg.pinv_cutoff);
  set_if(s, "restarts", cfg.restarts);
}

void RunConfig::apply(conv::AltMinConfig& cfg) const {
  if (!doc_.contains("altmin")) return;
  const auto& s = doc_.at("altmin");
  set_if(s, "max_iters", cfg.max_iters);
  set_if(s, "tol", cfg.tol);
  set_if(s, "activation_ridge", cfg.activation_ridge);
  set_if(s, "ridge_fallback", cfg.ridge_fallback);
}

void RunConfig::apply(embed::EmbedConfig& cfg) const {
  apply(cfg.als);
  if (!doc_.contains("embed")) return;
  const auto& s = doc_.at("embed");
  set_if(s, "k", cfg.k);
  set_if(s, "n", cfg.n);
  set_if(s, "L", cfg.filters);
  set_if(s, "kpool", cfg.kpool);
  if (s.contains("oov")) cfg.oov = s.at("oov") == "error" ? embed::OovPolicy::Error : embed::OovPolicy::Skip;
}

}  // namespace tensordict::cli
