#include <fstream>

#include <json.hpp>

#include "tensordict/io.hpp"
#include "tensordict/seq_embed.hpp"

namespace tensordict::embed {

namespace {

constexpr const char* kFormat = "tensordict-embed-model";
constexpr int kVersion = 1;

}  // namespace

void save_model(const EmbedModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["format"] = kFormat;
  manifest["version"] = kVersion;
  manifest["k"] = model.k();
  manifest["n"] = model.n;
  manifest["L"] = model.filters;
  manifest["kpool"] = model.kpool;
  manifest["seed"] = model.seed;
  manifest["vocab"] = model.vocab.tokens();
  manifest["projection"] = "projection.dtns";
  auto banks = nlohmann::ordered_json::array();
  for (std::size_t j = 0; j < model.banks.size(); ++j) {
    if (model.banks[j]) {
      const std::string file = "bank_" + std::to_string(j) + ".dtns";
      io::write_matrix_dtns(dir / file, model.banks[j]->matrix());
      banks.push_back({{"active", true}, {"file", file}});
    } else {
      banks.push_back({{"active", false}});
    }
  }
  manifest["banks"] = banks;
  io::write_matrix_dtns(dir / "projection.dtns", model.basis);

  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw FormatError("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

EmbedModel load_model(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw FormatError("no trained model at " + dir.string() + " (manifest.json missing)");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
    if (manifest.at("format").get<std::string>() != kFormat)
      throw FormatError("unexpected model format in " + path.string());
    if (manifest.at("version").get<int>() != kVersion)
      throw FormatError("unsupported model version in " + path.string());

    EmbedModel model;
    model.vocab = Vocab(manifest.at("vocab").get<std::vector<std::string>>());
    model.n = manifest.at("n").get<Index>();
    model.filters = manifest.at("L").get<Index>();
    model.kpool = manifest.at("kpool").get<Index>();
    model.seed = manifest.at("seed").get<std::uint64_t>();
    model.basis = io::read_matrix_dtns(dir / manifest.at("projection").get<std::string>());
    const Index k = manifest.at("k").get<Index>();
    if (model.basis.rows() != model.vocab.size() || model.basis.cols() != k)
      throw FormatError("projection shape does not match the manifest");

    const auto& banks = manifest.at("banks");
    if (static_cast<Index>(banks.size()) != k) throw FormatError("manifest lists the wrong number of banks");
    for (const auto& entry : banks) {
      if (!entry.at("active").get<bool>()) {
        model.banks.emplace_back(std::nullopt);
        continue;
      }
      FilterBank bank(io::read_matrix_dtns(dir / entry.at("file").get<std::string>()));
      if (bank.length() != model.n || bank.count() != model.filters)
        throw FormatError("filter bank shape does not match the manifest");
      model.banks.emplace_back(std::move(bank));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed model manifest " + path.string() + ": " + e.what());
  }
}

}  // namespace tensordict::embed
