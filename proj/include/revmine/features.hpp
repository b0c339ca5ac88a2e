#ifndef REVMINE_FEATURES_HPP
#define REVMINE_FEATURES_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "revmine/corpus.hpp"

namespace revmine {

/// Which feature templates extract_features emits.
struct FeatureTemplateConfig {
  int window = 2;                            // word/POS context t-window..t+window
  std::set<int> affix_lengths{1, 2, 3, 4};   // subset of {1,2,3,4}
  bool use_pos = true;
  bool use_position = true;    // pos_in_sent=first|inner|last
  bool use_stylistics = true;  // style[0]=init_cap|all_caps|has_digit|has_symbol|alnum
  bool use_embeddings = false;
  int embedding_dim = 0;  // expected table dimension when use_embeddings is set

  bool operator==(const FeatureTemplateConfig&) const = default;
};

/// Features for one token: binary ids plus continuous (id, value) pairs.
/// Ids look like `w[-1]=upload`, `suf3[0]=ing`, `pos[+2]=NN`,
/// `pos_in_sent=first`, `style[0]=init_cap`, `emb[7]`.
struct FeatureVector {
  std::vector<std::string> binary;  // no duplicates
  std::vector<std::pair<std::string, double>> continuous;

  bool operator==(const FeatureVector&) const = default;
};

struct EmbeddingTable {
  int dim = 0;
  std::map<std::string, std::vector<double>> vectors;  // every vector has length dim
  bool lowercase_lookup = true;

  /// Vector for `word`, honoring lowercase_lookup; nullptr when out of
  /// vocabulary.
  const std::vector<double>* lookup(const std::string& word) const;
};

/// Reads whitespace-separated `word v1 ... vD` lines; an optional first line
/// `N D` (two integers) declares the count and dimension. A repeated word
/// overwrites the earlier vector and logs a warning.
/// Throws IoError when the file cannot be read, ParseError on a non-numeric
/// value or a line whose dimension disagrees with the rest of the file.
EmbeddingTable load_embeddings(const std::string& path);

/// Features of token `t` (0-based, t < sentence size).
///
/// Emitted ids:
///   - `w[o]=<lowercased text>` for every offset o in [-window, +window];
///     out-of-bounds offsets yield `w[o]=<PAD>`.
///   - `pos[o]=<tag>` when use_pos, for in-bounds offsets whose token has a
///     non-empty tag.
///   - for offset 0 only:
///       prefixes/suffixes `pre<L>[0]=...` / `suf<L>[0]=...` of the
///       lowercased word for each configured length L <= min(4, word length),
///       measured in UTF-8 code points;
///       `pos_in_sent=first|inner|last` when use_position (a one-token
///       sentence counts as first);
///       `style[0]=...` flags when use_stylistics; any subset of init_cap,
///       all_caps, has_digit, has_symbol, alnum may fire together;
///       continuous `emb[d]` features when use_embeddings and a table is
///       given, 0.0 for out-of-vocabulary words.
FeatureVector extract_features(const Sentence& sentence, int t,
                               const FeatureTemplateConfig& config,
                               const EmbeddingTable* embeddings = nullptr);

}  // namespace revmine

#endif  // REVMINE_FEATURES_HPP
