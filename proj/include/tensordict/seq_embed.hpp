#pragma once

// Word-sequence embeddings: one-hot encoding, PCA projection, per-coordinate
// convolutional filters, deconvolutional decoding and max-k pooling.

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tensordict/conv_als.hpp"
#include "tensordict/filter_bank.hpp"

namespace tensordict::embed {

using Sequence = std::vector<std::string>;
using Corpus = std::vector<Sequence>;

/// Whitespace tokenization of one line.
Sequence tokenize(const std::string& line);
/// One sequence per line; blank lines become empty sequences.
Corpus read_corpus(const std::filesystem::path& path);

/// Token → 0-based index, in order of first appearance.
class Vocab {
 public:
  Vocab() = default;
  explicit Vocab(std::vector<std::string> tokens);
  static Vocab from_corpus(const Corpus& corpus);

  Index size() const { return static_cast<Index>(tokens_.size()); }
  std::optional<Index> index(const std::string& token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Index> lookup_;
};

enum class OovPolicy { Skip, Error };

/// d×N one-hot matrix; out-of-vocabulary tokens are dropped with a warning
/// (Skip) or raise PreconditionError (Error).
Eigen::MatrixXd encode_one_hot(const Sequence& tokens, const Vocab& vocab,
                               OovPolicy policy = OovPolicy::Skip);

/// Top-k left singular vectors of the stacked encodings, as a d×k matrix.
/// Each column's largest-magnitude entry is positive. When k exceeds the rank
/// of the stacked encodings, k is reduced with a warning.
Eigen::MatrixXd fit_projection(const Corpus& corpus, const Vocab& vocab, Index k,
                               OovPolicy policy = OovPolicy::Skip);

/// Y = Uᵀ S.
Eigen::MatrixXd project(const Eigen::MatrixXd& encoded, const Eigen::MatrixXd& basis);

/// Stride-1 windows of length n as columns. A signal longer than n yields one
/// patch per position with the tail zero-padded; a signal of length 1..n
/// yields a single zero-padded patch; an empty signal yields none.
Eigen::MatrixXd extract_patches(const Eigen::VectorXd& y, Index n);

/// Least-norm activations for y = Σ_l f_l ⊛ w_l with the filters zero-padded
/// to length N (folded cyclically when N < n). Output is [w_1; ...; w_L].
Eigen::VectorXd deconv_decode(const Eigen::VectorXd& y, const FilterBank& bank);

/// Σ_l f_l ⊛ w_l with the same padding as deconv_decode.
Eigen::VectorXd deconv_synthesize(const Eigen::VectorXd& w, const FilterBank& bank);

/// Per channel of length N = w.size()/channels: the kpool largest values in
/// descending order. Short channels are padded with their minimum (zeros when
/// N = 0).
Eigen::VectorXd max_k_pool(const Eigen::VectorXd& w, Index channels, Index kpool);

struct EmbedConfig {
  Index k = 8;
  Index n = 5;
  Index filters = 3;
  Index kpool = 2;
  conv::AlsConfig als{};
  std::uint64_t seed = 0;
  OovPolicy oov = OovPolicy::Skip;

  void validate() const;
};

struct EmbedModel {
  Vocab vocab;
  /// d×k projection basis.
  Eigen::MatrixXd basis;
  /// One bank per coordinate; nullopt marks an inactive coordinate.
  std::vector<std::optional<FilterBank>> banks;
  Index n = 0;
  Index filters = 0;
  Index kpool = 0;
  std::uint64_t seed = 0;

  Index k() const { return basis.cols(); }
  Index embedding_length() const { return k() * filters * kpool; }
};

/// Filters for one coordinate from the patches of its signals. Returns nullopt
/// when there are fewer than two patches, all patches vanish, or the
/// decomposition degenerates.
std::optional<FilterBank> train_coordinate_bank(const std::vector<Eigen::VectorXd>& signals, Index n,
                                                Index filters, const conv::AlsConfig& als,
                                                std::uint64_t seed);

/// Coordinate j uses seed + j, so results do not depend on thread count.
EmbedModel train_embed_model(const Corpus& corpus, const EmbedConfig& cfg);

/// Length k·L·kpool, coordinate-major then filter; inactive coordinates give zeros.
Eigen::VectorXd embed(const Sequence& tokens, const EmbedModel& model,
                      OovPolicy policy = OovPolicy::Skip);

/// [a .* b, |a − b|]; with norm_variant the second half is the scalar ‖a − b‖.
Eigen::VectorXd pair_features(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                              bool norm_variant = false);

/// Spreads a rating τ ∈ [k1, k2] over the two neighbouring integers.
Eigen::VectorXd discretize_similarity(double tau, int k1, int k2);
double expected_rating(const Eigen::VectorXd& p, int k1);

/// Directory with manifest.json plus one .dtns file per array.
void save_model(const EmbedModel& model, const std::filesystem::path& dir);
EmbedModel load_model(const std::filesystem::path& dir);

}  // namespace tensordict::embed
