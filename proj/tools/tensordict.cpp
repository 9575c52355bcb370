// tensordict command-line tool.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 no convergence,
// 3 acceptance failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "run_config.hpp"
#include "tensordict/acceptance.hpp"
#include "tensordict/alt_min.hpp"
#include "tensordict/conv_als.hpp"
#include "tensordict/cumulant.hpp"
#include "tensordict/io.hpp"
#include "tensordict/parallel.hpp"
#include "tensordict/saddle_sgd.hpp"
#include "tensordict/seq_embed.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace tensordict;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitAcceptance = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_json(const fs::path& path, const ordered_json& doc) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

// Non-finite values have no JSON representation; they become null.
ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

cli::RunConfig load_config(const std::string& path) {
  return path.empty() ? cli::RunConfig{} : cli::RunConfig::load(path);
}

std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t value, const cli::RunConfig& cfg) {
  if (flag->count() > 0) return value;
  return cfg.seed().value_or(value);
}

// Filter banks are written one filter per row.
void write_bank_csv(const fs::path& path, const FilterBank& bank) {
  io::write_csv(path, bank.matrix().transpose());
}

// ---------------------------------------------------------------- decompose

struct DecomposeArgs {
  std::string mode;
  Index d = 10;
  Index k = 0;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  CLI::Option* seed_flag = nullptr;
  long iters = 0;
  double eta = 0;
  double target = 0.05;
  CLI::Option* target_flag = nullptr;
};

int cmd_decompose(const DecomposeArgs& a) {
  const auto cfg_file = load_config(a.config);
  const std::uint64_t seed = resolve_seed(a.seed_flag, a.seed, cfg_file);
  const Index k = a.k > 0 ? a.k : cfg_file.components().value_or(a.d);
  const double target = a.target_flag->count() ? a.target : cfg_file.target_error().value_or(a.target);
  if (a.d < 2) throw UsageError("--d must be at least 2");
  if (k < 1 || k > a.d) throw UsageError("--k must be in [1, d]");

  saddle::SgdConfig sgd;
  sgd.trace_every = 10;
  if (a.mode == "simple") {
    sgd.eta = 5e-3;
    sgd.iters = 10000;
  } else {
    if (k != a.d) throw UsageError("--mode ica needs k = d (square mixing matrix)");
    sgd.eta = 3e-3;
    sgd.iters = 20000;
    sgd.batch = 100;
    sgd.schedule = saddle::Schedule::InverseT;
    sgd.t_burn = 5000;
  }
  cfg_file.apply(sgd);
  if (a.iters > 0) sgd.iters = a.iters;
  if (a.eta > 0) sgd.eta = a.eta;
  sgd.seed = seed;
  sgd.validate();

  Rng rng(seed);
  const Eigen::MatrixXd basis = random_orthogonal(a.d, rng);
  const Eigen::MatrixXd truth = basis.leftCols(k);
  const auto initial = saddle::ComponentSet::random(a.d, k, rng);
  const auto oracle = a.mode == "simple" ? saddle::make_simple_oracle(truth, sgd.batch)
                                         : saddle::make_ica_oracle(truth, sgd.batch);

  fs::create_directories(a.out);
  const auto t0 = std::chrono::steady_clock::now();
  ordered_json report;
  report["mode"] = a.mode;
  report["d"] = a.d;
  report["k"] = k;
  report["seed"] = seed;
  report["eta"] = sgd.eta;
  report["batch"] = sgd.batch;
  report["schedule"] = sgd.schedule == saddle::Schedule::Constant ? "constant" : "inverse_t";
  report["target_error"] = target;
  int code = kExitOk;
  try {
    const auto res = saddle::noisy_pgd(oracle, saddle::orthogonal_evaluator(truth), sgd, initial, rng);
    io::write_csv(fs::path(a.out) / "components.csv", res.components.matrix());
    io::write_csv(fs::path(a.out) / "truth.csv", truth);
    std::vector<std::vector<double>> rows;
    for (const auto& p : res.trace) rows.push_back({double(p.iter), p.objective, p.recon_error});
    io::write_table_csv(fs::path(a.out) / "trace.csv", {"iter", "objective", "recon_error"}, rows);
    const double final_error = res.trace.back().recon_error;
    const bool converged = final_error <= target;
    report["iterations"] = res.iterations;
    report["final_recon_error"] = number(final_error);
    report["final_objective"] = number(res.trace.back().objective);
    report["converged"] = converged;
    if (!converged) code = kExitNoConvergence;
  } catch (const DivergenceError& e) {
    report["iterations"] = e.iteration();
    report["converged"] = false;
    report["error"] = e.what();
    code = kExitNoConvergence;
  }
  report["runtime_s"] = seconds_since(t0);
  write_json(fs::path(a.out) / "report.json", report);
  std::cout << "decompose: " << (code == kExitOk ? "converged" : "did not converge") << ", report in "
            << (fs::path(a.out) / "report.json").string() << "\n";
  return code;
}

// ------------------------------------------------------------ learn-filters

struct PlantSpec {
  Index n = 8;
  Index count = 2;
  cumulant::ActivationSpec act = cumulant::Poisson{0.5};
  Index samples = 100000;
  double noise = 0;
};

// "n=8,L=2,act=poisson:0.5,N=100000[,noise=0.1]"; act may also be
// "bg:p[:mean[:scale]]" for Bernoulli–Gaussian activations.
PlantSpec parse_plant(const std::string& spec) {
  PlantSpec p;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--plant entry '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "n") {
        p.n = std::stol(value);
      } else if (key == "L") {
        p.count = std::stol(value);
      } else if (key == "N") {
        p.samples = static_cast<Index>(std::stod(value));
      } else if (key == "noise") {
        p.noise = std::stod(value);
      } else if (key == "act") {
        std::vector<std::string> parts;
        std::stringstream as(value);
        std::string part;
        while (std::getline(as, part, ':')) parts.push_back(part);
        if (parts.size() == 2 && parts[0] == "poisson") {
          p.act = cumulant::Poisson{std::stod(parts[1])};
        } else if (parts.size() >= 2 && parts.size() <= 4 && parts[0] == "bg") {
          cumulant::BernoulliGaussian bg;
          bg.probability = std::stod(parts[1]);
          if (parts.size() > 2) bg.mean = std::stod(parts[2]);
          if (parts.size() > 3) bg.scale = std::stod(parts[3]);
          p.act = bg;
        } else {
          throw UsageError("--plant act must be poisson:MEAN or bg:P[:MEAN[:SCALE]]");
        }
      } else {
        throw UsageError("unknown --plant key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw UsageError("--plant value for '" + key + "' is not a number");
    }
  }
  cumulant::validate(p.act);
  if (p.samples < 2) throw UsageError("--plant N must be at least 2");
  return p;
}

Eigen::MatrixXd read_samples(const fs::path& path) {
  if (path.extension() == ".csv") return io::read_csv(path);
  return io::read_matrix_dtns(path);
}

struct LearnArgs {
  Index n = 0;
  Index count = 0;
  std::string input;
  std::string plant;
  std::string baseline = "altmin";
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  CLI::Option* seed_flag = nullptr;
};

int cmd_learn_filters(const LearnArgs& a) {
  const auto cfg_file = load_config(a.config);
  const std::uint64_t seed = resolve_seed(a.seed_flag, a.seed, cfg_file);
  const std::string input = !a.input.empty() ? a.input : cfg_file.input().value_or("");
  if (input.empty() == a.plant.empty()) throw UsageError("give exactly one of --input or --plant");

  Rng rng(seed);
  std::optional<FilterBank> truth;
  std::optional<cumulant::SampleSet> samples;
  Index n = a.n;
  Index count = a.count;
  if (!a.plant.empty()) {
    PlantSpec spec = parse_plant(a.plant);
    if (n > 0 && n != spec.n) throw UsageError("--n disagrees with --plant n");
    if (count > 0 && count != spec.count) throw UsageError("--L disagrees with --plant L");
    n = spec.n;
    count = spec.count;
    if (count >= n) throw UsageError("L must be below n (requires nL<n² or L<n)");
    truth = FilterBank::random(n, count, rng);
    samples = cumulant::synth_conv_ica(*truth, spec.act, spec.samples, rng, spec.noise).samples;
  } else {
    samples = cumulant::SampleSet(read_samples(input));
    if (n > 0 && n != samples->dim())
      throw UsageError("--n " + std::to_string(n) + " disagrees with the data dimension " +
                       std::to_string(samples->dim()));
    n = samples->dim();
    if (count < 1) throw UsageError("--L is required with --input");
    if (count >= n) throw UsageError("L must be below n (requires nL<n² or L<n)");
  }

  conv::AlsConfig als;
  cfg_file.apply(als);
  als.seed = seed;
  conv::AltMinConfig am;
  cfg_file.apply(am);
  am.seed = seed;

  const fs::path out(a.out);
  fs::create_directories(out);
  ordered_json report;
  report["n"] = n;
  report["L"] = count;
  report["samples"] = samples->count();
  report["seed"] = seed;
  report["planted"] = truth.has_value();
  if (truth) write_bank_csv(out / "filters_truth.csv", *truth);

  auto t0 = std::chrono::steady_clock::now();
  const auto c3 = cumulant::third_cumulant(*samples);
  const double cumulant_seconds = seconds_since(t0);
  Rng ct_rng(seed + 1);
  t0 = std::chrono::steady_clock::now();
  const auto ct = conv::ct_als(c3, count, als, ct_rng);
  const double ct_seconds = seconds_since(t0);
  write_bank_csv(out / "filters_ct.csv", ct.f);
  {
    std::vector<std::vector<double>> rows;
    for (const auto& p : ct.trace) rows.push_back({double(p.iter), p.recon_error, p.filter_change});
    io::write_table_csv(out / "trace_ct.csv", {"iter", "recon_error", "filter_change"}, rows);
  }
  ordered_json ct_report;
  ct_report["iters"] = ct.iterations;
  ct_report["converged"] = ct.converged;
  ct_report["final_recon_error"] = number(ct.trace.back().recon_error);
  if (truth) ct_report["recovery_error"] = conv::filter_recovery_error(ct.f, *truth);
  ct_report["cumulant_seconds"] = cumulant_seconds;
  ct_report["seconds"] = ct_seconds;
  ct_report["seconds_per_iter"] = ct_seconds / double(std::max(1L, ct.iterations));
  ct_report["per_iter"] = ordered_json::array();
  for (const auto& p : ct.trace) ct_report["per_iter"].push_back(number(p.recon_error));
  report["ct"] = ct_report;

  if (a.baseline == "altmin") {
    Rng am_rng(seed + 2);
    t0 = std::chrono::steady_clock::now();
    const auto alt = conv::alt_min_baseline(*samples, count, am, am_rng);
    const double am_seconds = seconds_since(t0);
    write_bank_csv(out / "filters_altmin.csv", alt.filters);
    std::vector<std::vector<double>> rows;
    for (const auto& p : alt.trace) rows.push_back({double(p.iter), double(p.stage), p.residual, p.objective});
    io::write_table_csv(out / "trace_altmin.csv", {"iter", "stage", "residual", "objective"}, rows);
    ordered_json am_report;
    am_report["iters"] = alt.iterations;
    am_report["final_residual"] = number(alt.trace.back().residual);
    am_report["final_objective"] = number(alt.trace.back().objective);
    if (truth) am_report["recovery_error"] = conv::filter_recovery_error(alt.filters, *truth);
    am_report["seconds"] = am_seconds;
    am_report["seconds_per_iter"] = am_seconds / double(std::max(1L, alt.iterations));
    am_report["per_iter"] = ordered_json::array();
    for (const auto& p : alt.trace)
      if (p.stage == 2) am_report["per_iter"].push_back(number(p.residual));
    report["altmin"] = am_report;
    if (truth)
      report["ct_better"] = report["ct"]["recovery_error"].get<double>() <
                            am_report["recovery_error"].get<double>();
  }
  write_json(out / "report.json", report);
  std::cout << "learn-filters: CT-ALS " << ct.iterations << " iterations, recon error "
            << ct.trace.back().recon_error << "; report in " << (out / "report.json").string() << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------- embed

struct EmbedTrainArgs {
  std::string corpus;
  std::string config;
  std::string out;
  Index k = 0, n = 0, count = 0, kpool = 0;
  std::uint64_t seed = 0;
  CLI::Option* seed_flag = nullptr;
  std::string oov;
};

embed::OovPolicy parse_oov(const std::string& s, embed::OovPolicy fallback) {
  if (s.empty()) return fallback;
  return s == "error" ? embed::OovPolicy::Error : embed::OovPolicy::Skip;
}

int cmd_embed_train(const EmbedTrainArgs& a) {
  const auto cfg_file = load_config(a.config);
  embed::EmbedConfig cfg;
  cfg_file.apply(cfg);
  if (a.k > 0) cfg.k = a.k;
  if (a.n > 0) cfg.n = a.n;
  if (a.count > 0) cfg.filters = a.count;
  if (a.kpool > 0) cfg.kpool = a.kpool;
  cfg.oov = parse_oov(a.oov, cfg.oov);
  cfg.seed = resolve_seed(a.seed_flag, a.seed, cfg_file);
  cfg.als.seed = cfg.seed;
  if (!fs::exists(a.corpus)) throw UsageError("corpus file " + a.corpus + " does not exist");
  const auto corpus = embed::read_corpus(a.corpus);
  const auto model = embed::train_embed_model(corpus, cfg);
  embed::save_model(model, a.out);
  Index active = 0;
  for (const auto& b : model.banks) active += b.has_value();
  std::cout << "embed train: vocabulary " << model.vocab.size() << ", k=" << model.k() << " (" << active
            << " active), model in " << a.out << "\n";
  return kExitOk;
}

struct EmbedApplyArgs {
  std::string model;
  std::string corpus;
  std::string out;
  bool pairs = false;
  bool norm_pairs = false;
  double sts = 0;
  CLI::Option* sts_flag = nullptr;
  std::string range = "0:5";
  std::string oov;
};

std::string format_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::pair<int, int> parse_range(const std::string& range) {
  const auto colon = range.find(':');
  if (colon == std::string::npos) throw UsageError("--range must look like K1:K2");
  try {
    return {std::stoi(range.substr(0, colon)), std::stoi(range.substr(colon + 1))};
  } catch (const std::logic_error&) {
    throw UsageError("--range must look like K1:K2 with integers");
  }
}

int cmd_embed_apply(const EmbedApplyArgs& a) {
  if (a.sts_flag->count() > 0) {
    const auto [k1, k2] = parse_range(a.range);
    const Eigen::VectorXd p = embed::discretize_similarity(a.sts, k1, k2);
    std::string line;
    for (Index i = 0; i < p.size(); ++i) line += (i ? "," : "") + format_short(p[i]);
    std::cout << line << "\n";
    return kExitOk;
  }
  if (a.model.empty() || a.corpus.empty() || a.out.empty())
    throw UsageError("embed apply needs --model, --corpus and --out (or --sts-discretize)");
  const auto model = embed::load_model(a.model);
  const auto policy = parse_oov(a.oov, embed::OovPolicy::Skip);
  std::ifstream in(a.corpus);
  if (!in) throw UsageError("corpus file " + a.corpus + " does not exist");

  std::vector<Eigen::VectorXd> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (a.pairs) {
      const auto tab = line.find('\t');
      if (tab == std::string::npos) throw FormatError("--pairs expects 'left<TAB>right' on every line");
      const auto left = embed::embed(embed::tokenize(line.substr(0, tab)), model, policy);
      const auto right = embed::embed(embed::tokenize(line.substr(tab + 1)), model, policy);
      rows.push_back(embed::pair_features(left, right, a.norm_pairs));
    } else {
      rows.push_back(embed::embed(embed::tokenize(line), model, policy));
    }
  }
  const Index width = rows.empty() ? 0 : rows.front().size();
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), width);
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = rows[i].transpose();
  io::write_csv(a.out, out);
  std::cout << "embed apply: " << rows.size() << " rows of width " << width << " in " << a.out << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- benchmark

struct BenchmarkArgs {
  std::vector<std::string> only;
  std::string out = "benchmark-report";
};

int cmd_benchmark(const BenchmarkArgs& a) {
  acceptance::Options options;
  for (const auto& g : a.only) {
    static const std::set<std::string> known = {"saddle", "cumulant", "als", "embed"};
    if (!known.count(g)) throw UsageError("--only must be one of saddle, cumulant, als, embed");
    options.groups.insert(g);
  }
  const fs::path out(a.out);
  fs::create_directories(out / "curves");
  options.scratch_dir = (out / "scratch").string();
  fs::create_directories(options.scratch_dir);

  const auto results = acceptance::run_all(options);
  ordered_json report = ordered_json::array();
  std::ostringstream md;
  md << "# Acceptance report\n\n| # | criterion | group | result | seconds | detail |\n|---|---|---|---|---|---|\n";
  std::vector<int> failed;
  for (const auto& r : results) {
    ordered_json entry;
    entry["id"] = r.id;
    entry["name"] = r.name;
    entry["group"] = r.group;
    entry["passed"] = r.passed;
    entry["seconds"] = r.seconds;
    entry["detail"] = r.detail;
    ordered_json metrics = ordered_json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = number(v);
    entry["metrics"] = metrics;
    ordered_json curves = ordered_json::array();
    for (const auto& c : r.curves) {
      const std::string file = "curves/criterion" + std::to_string(r.id) + "_" + c.name + ".csv";
      io::write_table_csv(out / file, c.columns, c.rows);
      curves.push_back(file);
    }
    entry["curves"] = curves;
    report.push_back(entry);
    md << "| " << r.id << " | " << r.name << " | " << r.group << " | " << (r.passed ? "PASS" : "FAIL")
       << " | " << format_short(r.seconds) << " | " << r.detail << " |\n";
    std::cout << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << "\n";
    if (!r.passed) failed.push_back(r.id);
  }
  write_json(out / "report.json", report);
  std::ofstream(out / "report.md") << md.str();
  fs::remove_all(options.scratch_dir);
  if (!failed.empty()) {
    std::cerr << "failed criteria:";
    for (int id : failed) std::cerr << " " << id;
    std::cerr << "\n";
    return kExitAcceptance;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor decompositions, convolutional dictionaries and sequence embeddings"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: TENSORDICT_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  DecomposeArgs dec;
  auto* decompose = app.add_subcommand("decompose", "orthogonal 4th-order decomposition by noisy SGD");
  decompose->add_option("--mode", dec.mode, "gradient oracle")->required()->check(CLI::IsMember({"simple", "ica"}));
  decompose->add_option("--d", dec.d, "dimension")->capture_default_str();
  decompose->add_option("--k", dec.k, "number of components (default d)");
  decompose->add_option("--config", dec.config, "JSON run configuration");
  decompose->add_option("--out", dec.out, "output directory")->required();
  dec.seed_flag = decompose->add_option("--seed", dec.seed, "random seed");
  decompose->add_option("--iters", dec.iters, "iteration budget");
  decompose->add_option("--eta", dec.eta, "step size");
  dec.target_flag = decompose->add_option("--target", dec.target, "convergence threshold on the final error")
                        ->capture_default_str();

  LearnArgs learn;
  auto* learn_cmd = app.add_subcommand("learn-filters", "convolutional filters by CT-ALS, with a baseline");
  learn_cmd->add_option("--n", learn.n, "filter length");
  learn_cmd->add_option("--L", learn.count, "number of filters");
  learn_cmd->add_option("--input", learn.input, "samples as an n×N .dtns or .csv matrix");
  learn_cmd->add_option("--plant", learn.plant, "synthetic data, e.g. n=8,L=2,act=poisson:0.5,N=100000");
  learn_cmd->add_option("--baseline", learn.baseline, "comparison method")
      ->check(CLI::IsMember({"altmin", "none"}))
      ->capture_default_str();
  learn_cmd->add_option("--config", learn.config, "JSON run configuration");
  learn_cmd->add_option("--out", learn.out, "output directory")->required();
  learn.seed_flag = learn_cmd->add_option("--seed", learn.seed, "random seed");

  auto* embed_cmd = app.add_subcommand("embed", "word-sequence embeddings");
  embed_cmd->require_subcommand(1);
  EmbedTrainArgs train;
  auto* train_cmd = embed_cmd->add_subcommand("train", "fit projection and per-coordinate filters");
  train_cmd->add_option("--corpus", train.corpus, "one sequence per line")->required();
  train_cmd->add_option("--out", train.out, "model directory")->required();
  train_cmd->add_option("--config", train.config, "JSON run configuration");
  train_cmd->add_option("--k", train.k, "projection dimension (default 8)");
  train_cmd->add_option("--n", train.n, "patch length (default 5)");
  train_cmd->add_option("--L", train.count, "filters per coordinate (default 3)");
  train_cmd->add_option("--kpool", train.kpool, "values kept by max-k pooling (default 2)");
  train_cmd->add_option("--oov", train.oov, "out-of-vocabulary policy")->check(CLI::IsMember({"skip", "error"}));
  train.seed_flag = train_cmd->add_option("--seed", train.seed, "random seed");

  EmbedApplyArgs apply;
  auto* apply_cmd = embed_cmd->add_subcommand("apply", "embed sequences with a trained model");
  apply_cmd->add_option("--model", apply.model, "model directory");
  apply_cmd->add_option("--corpus", apply.corpus, "one sequence per line (or left<TAB>right with --pairs)");
  apply_cmd->add_option("--out", apply.out, "output CSV");
  apply_cmd->add_flag("--pairs", apply.pairs, "emit pair features for tab-separated sequence pairs");
  apply_cmd->add_flag("--pair-norm", apply.norm_pairs, "use the scalar ‖a−b‖ instead of |a−b|");
  apply_cmd->add_option("--oov", apply.oov, "out-of-vocabulary policy")->check(CLI::IsMember({"skip", "error"}));
  apply.sts_flag = apply_cmd->add_option("--sts-discretize", apply.sts, "print the rating distribution for tau");
  apply_cmd->add_option("--range", apply.range, "rating range K1:K2")->capture_default_str();

  BenchmarkArgs bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "run the acceptance suite and write reports");
  bench_cmd->add_option("--only", bench.only, "restrict to groups: saddle, cumulant, als, embed");
  bench_cmd->add_option("--out", bench.out, "report directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (threads > 0) set_thread_count(threads);

  try {
    if (decompose->parsed()) return cmd_decompose(dec);
    if (learn_cmd->parsed()) return cmd_learn_filters(learn);
    if (train_cmd->parsed()) return cmd_embed_train(train);
    if (apply_cmd->parsed()) return cmd_embed_apply(apply);
    if (bench_cmd->parsed()) return cmd_benchmark(bench);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
