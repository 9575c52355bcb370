#include "tensordict/seq_embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tensordict/circulant.hpp"
#include "tensordict/cumulant.hpp"
#include "tensordict/parallel.hpp"

namespace tensordict::embed {

Sequence tokenize(const std::string& line) {
  Sequence out;
  std::istringstream in(line);
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

Corpus read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open corpus " + path.string());
  Corpus corpus;
  std::string line;
  while (std::getline(in, line)) corpus.push_back(tokenize(line));
  return corpus;
}

Vocab::Vocab(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i)
    if (!lookup_.emplace(tokens_[i], static_cast<Index>(i)).second)
      throw PreconditionError("duplicate vocabulary token '" + tokens_[i] + "'");
}

Vocab Vocab::from_corpus(const Corpus& corpus) {
  std::vector<std::string> tokens;
  std::unordered_map<std::string, Index> seen;
  for (const auto& seq : corpus)
    for (const auto& tok : seq)
      if (seen.emplace(tok, static_cast<Index>(tokens.size())).second) tokens.push_back(tok);
  return Vocab(std::move(tokens));
}

std::optional<Index> Vocab::index(const std::string& token) const {
  const auto it = lookup_.find(token);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Eigen::MatrixXd encode_one_hot(const Sequence& tokens, const Vocab& vocab, OovPolicy policy) {
  std::vector<Index> ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (const auto id = vocab.index(tok)) {
      ids.push_back(*id);
    } else if (policy == OovPolicy::Error) {
      throw PreconditionError("token '" + tok + "' is not in the vocabulary");
    } else {
      warn("skipping out-of-vocabulary token '" + tok + "'");
    }
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(vocab.size(), static_cast<Index>(ids.size()));
  for (std::size_t t = 0; t < ids.size(); ++t) out(ids[t], static_cast<Index>(t)) = 1.0;
  return out;
}

Eigen::MatrixXd fit_projection(const Corpus& corpus, const Vocab& vocab, Index k, OovPolicy policy) {
  const Index d = vocab.size();
  if (corpus.empty()) throw PreconditionError("fit_projection needs a nonempty corpus");
  if (k < 1 || k > d)
    throw PreconditionError("fit_projection: k must be in [1, " + std::to_string(d) + "]");

  // Left singular vectors of S are the eigenvectors of S·Sᵀ.
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  for (const auto& seq : corpus) {
    const Eigen::MatrixXd s = encode_one_hot(seq, vocab, policy);
    gram.noalias() += s * s.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd values = eig.eigenvalues();
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values[a] > values[b]; });

  const double tol = std::max(values.cwiseAbs().maxCoeff(), 1.0) * static_cast<double>(d) * 1e-12;
  const Index rank = static_cast<Index>(std::count_if(order.begin(), order.end(),
                                                      [&](Index i) { return values[i] > tol; }));
  if (rank == 0) throw DegenerateError("fit_projection: the corpus encodes to a zero matrix");
  if (k > rank) {
    warn("fit_projection: k=" + std::to_string(k) + " exceeds the encoding rank " +
         std::to_string(rank) + "; using k=" + std::to_string(rank));
    k = rank;
  }

  Eigen::MatrixXd basis(d, k);
  for (Index j = 0; j < k; ++j) {
    Eigen::VectorXd u = eig.eigenvectors().col(order[static_cast<std::size_t>(j)]);
    Index peak = 0;
    u.cwiseAbs().maxCoeff(&peak);
    if (u[peak] < 0) u = -u;
    basis.col(j) = u;
  }
  return basis;
}

Eigen::MatrixXd project(const Eigen::MatrixXd& encoded, const Eigen::MatrixXd& basis) {
  if (encoded.rows() != basis.rows())
    throw ShapeError("project: encoding has " + std::to_string(encoded.rows()) +
                     " rows, basis has " + std::to_string(basis.rows()));
  return basis.transpose() * encoded;
}

Eigen::MatrixXd extract_patches(const Eigen::VectorXd& y, Index n) {
  if (n < 1) throw PreconditionError("extract_patches needs n >= 1");
  const Index len = y.size();
  if (len == 0) return Eigen::MatrixXd(n, 0);
  const Index count = len <= n ? 1 : len;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, count);
  for (Index p = 0; p < count; ++p) {
    const Index take = std::min(n, len - p);
    out.col(p).head(take) = y.segment(p, take);
  }
  return out;
}

namespace {

// Filter spectra at length N: zero-padded when N >= n, folded cyclically otherwise.
Eigen::MatrixXcd padded_spectra(const FilterBank& bank, Index len) {
  Eigen::MatrixXcd out(len, bank.count());
  for (Index l = 0; l < bank.count(); ++l) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(len);
    for (Index i = 0; i < bank.length(); ++i) f[i % len] += bank.matrix()(i, l);
    out.col(l) = circulant::fft(f);
  }
  return out;
}

}  // namespace

Eigen::VectorXd deconv_decode(const Eigen::VectorXd& y, const FilterBank& bank) {
  const Index len = y.size();
  const Index count = bank.count();
  if (len == 0) return {};
  const Eigen::MatrixXcd fh = padded_spectra(bank, len);
  const Eigen::VectorXcd yh = circulant::fft(y);
  const Eigen::VectorXd energy = fh.rowwise().squaredNorm();
  const double floor = 1e-12 * energy.maxCoeff();

  Eigen::VectorXd w(len * count);
  for (Index l = 0; l < count; ++l) {
    Eigen::VectorXcd wh(len);
    for (Index k = 0; k < len; ++k)
      wh[k] = energy[k] > floor ? std::conj(fh(k, l)) * yh[k] / energy[k] : 0.0;
    w.segment(l * len, len) = circulant::ifft(wh).real();
  }
  return w;
}

Eigen::VectorXd deconv_synthesize(const Eigen::VectorXd& w, const FilterBank& bank) {
  const Index count = bank.count();
  if (w.size() % count != 0) throw ShapeError("deconv_synthesize: length is not a multiple of L");
  const Index len = w.size() / count;
  if (len == 0) return {};
  const Eigen::MatrixXcd fh = padded_spectra(bank, len);
  Eigen::VectorXcd yh = Eigen::VectorXcd::Zero(len);
  for (Index l = 0; l < count; ++l)
    yh += fh.col(l).cwiseProduct(circulant::fft(Eigen::VectorXd(w.segment(l * len, len))));
  return circulant::ifft(yh).real();
}

Eigen::VectorXd max_k_pool(const Eigen::VectorXd& w, Index channels, Index kpool) {
  if (kpool < 1) throw PreconditionError("max_k_pool needs kpool >= 1");
  if (channels < 1 || w.size() % channels != 0)
    throw ShapeError("max_k_pool: length is not a multiple of the channel count");
  const Index len = w.size() / channels;
  Eigen::VectorXd out(channels * kpool);
  for (Index c = 0; c < channels; ++c) {
    std::vector<double> vals(w.data() + c * len, w.data() + (c + 1) * len);
    std::sort(vals.begin(), vals.end(), std::greater<>());
    const double pad = vals.empty() ? 0.0 : vals.back();
    for (Index i = 0; i < kpool; ++i)
      out[c * kpool + i] = i < len ? vals[static_cast<std::size_t>(i)] : pad;
  }
  return out;
}

void EmbedConfig::validate() const {
  if (k < 1) throw PreconditionError("k must be >= 1");
  if (n < 2) throw PreconditionError("patch length n must be >= 2");
  if (filters < 1) throw PreconditionError("L must be >= 1");
  if (filters >= n) throw PreconditionError("L must be below n (requires nL<n² or L<n)");
  if (kpool < 1) throw PreconditionError("kpool must be >= 1");
  als.validate();
}

std::optional<FilterBank> train_coordinate_bank(const std::vector<Eigen::VectorXd>& signals, Index n,
                                                Index filters, const conv::AlsConfig& als,
                                                std::uint64_t seed) {
  std::vector<Eigen::MatrixXd> parts;
  Index total = 0;
  for (const auto& y : signals) {
    parts.push_back(extract_patches(y, n));
    total += parts.back().cols();
  }
  if (total < 2) return std::nullopt;
  Eigen::MatrixXd patches(n, total);
  Index at = 0;
  for (const auto& p : parts) {
    patches.middleCols(at, p.cols()) = p;
    at += p.cols();
  }
  if (patches.cwiseAbs().maxCoeff() == 0.0) return std::nullopt;

  const auto c3 = cumulant::third_cumulant(cumulant::SampleSet(std::move(patches)));
  if (c3.matrix().norm() == 0.0) return std::nullopt;
  Rng rng(seed);
  try {
    return conv::ct_als(c3, filters, als, rng).f;
  } catch (const DegenerateError& e) {
    warn(std::string("coordinate marked inactive: ") + e.what());
    return std::nullopt;
  }
}

EmbedModel train_embed_model(const Corpus& corpus, const EmbedConfig& cfg) {
  cfg.validate();
  EmbedModel model;
  model.vocab = Vocab::from_corpus(corpus);
  if (model.vocab.size() == 0) throw PreconditionError("corpus has no tokens");
  model.basis = fit_projection(corpus, model.vocab, std::min(cfg.k, model.vocab.size()), cfg.oov);
  if (cfg.k > model.vocab.size())
    warn("k=" + std::to_string(cfg.k) + " exceeds the vocabulary size; using " +
         std::to_string(model.basis.cols()));
  model.n = cfg.n;
  model.filters = cfg.filters;
  model.kpool = cfg.kpool;
  model.seed = cfg.seed;

  std::vector<Eigen::MatrixXd> projected;
  projected.reserve(corpus.size());
  for (const auto& seq : corpus)
    projected.push_back(project(encode_one_hot(seq, model.vocab, cfg.oov), model.basis));

  const Index k = model.basis.cols();
  model.banks.assign(static_cast<std::size_t>(k), std::nullopt);
  parallel_for(0, k, [&](Index j) {
    std::vector<Eigen::VectorXd> signals;
    signals.reserve(projected.size());
    for (const auto& y : projected) signals.push_back(y.row(j).transpose());
    model.banks[static_cast<std::size_t>(j)] = train_coordinate_bank(
        signals, cfg.n, cfg.filters, cfg.als, cfg.seed + static_cast<std::uint64_t>(j));
  });
  return model;
}

Eigen::VectorXd embed(const Sequence& tokens, const EmbedModel& model, OovPolicy policy) {
  const Eigen::MatrixXd y = project(encode_one_hot(tokens, model.vocab, policy), model.basis);
  const Index block = model.filters * model.kpool;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(model.embedding_length());
  for (Index j = 0; j < model.k(); ++j) {
    const auto& bank = model.banks[static_cast<std::size_t>(j)];
    if (!bank) continue;
    const Eigen::VectorXd w = deconv_decode(y.row(j).transpose(), *bank);
    out.segment(j * block, block) = max_k_pool(w, model.filters, model.kpool);
  }
  return out;
}

Eigen::VectorXd pair_features(const Eigen::VectorXd& a, const Eigen::VectorXd& b, bool norm_variant) {
  if (a.size() != b.size()) throw ShapeError("pair_features: embeddings differ in length");
  const Index len = a.size();
  Eigen::VectorXd out(norm_variant ? len + 1 : 2 * len);
  out.head(len) = a.cwiseProduct(b);
  if (norm_variant)
    out[len] = (a - b).norm();
  else
    out.tail(len) = (a - b).cwiseAbs();
  return out;
}

Eigen::VectorXd discretize_similarity(double tau, int k1, int k2) {
  if (k1 >= k2) throw PreconditionError("discretize_similarity needs K1 < K2");
  if (!(tau >= k1 && tau <= k2))
    throw PreconditionError("rating " + std::to_string(tau) + " outside [" + std::to_string(k1) +
                            ", " + std::to_string(k2) + "]");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(k2 - k1 + 1);
  const double fl = std::floor(tau);
  const Index i = static_cast<Index>(fl) - k1;  // 0-based slot of ⌊τ⌋
  p[i] = fl - tau + 1.0;
  if (i + 1 < p.size()) p[i + 1] = tau - fl;
  return p;
}

double expected_rating(const Eigen::VectorXd& p, int k1) {
  double total = 0.0;
  for (Index i = 0; i < p.size(); ++i) total += (k1 + static_cast<double>(i)) * p[i];
  return total;
}

}  // namespace tensordict::embed
