#ifndef REVMINE_CORPUS_IO_HPP
#define REVMINE_CORPUS_IO_HPP

#include <string>
#include <string_view>

#include "revmine/corpus.hpp"

namespace revmine {

enum class CorpusFormat { jsonl, conll };

/// Maps "jsonl"/"conll" to CorpusFormat. Throws ConfigError on anything else.
CorpusFormat parse_format(std::string_view name);

/// Picks a format from the file extension (.jsonl / .conll / .tsv).
/// Throws ConfigError when the extension is not recognized.
CorpusFormat detect_format(const std::string& path);

/// Reads a corpus. The result is validated and canonicalized. CoNLL label
/// sequences that are not valid BIO are repaired (stray I becomes B); the
/// number of repairs lands in metadata["bio_repairs"] when non-zero.
/// Throws IoError (unreadable file), ParseError (malformed content, with
/// line number) or DataError (invariant violations).
Corpus load_corpus(const std::string& path, CorpusFormat format);

/// Writes a corpus. JSONL carries everything; CoNLL holds at most one
/// annotator's spans and throws ConfigError when the corpus has more.
/// load_corpus(save_corpus(c)) reproduces c's reviews and annotations
/// (metadata is provenance-only and is not persisted).
void save_corpus(const Corpus& corpus, const std::string& path, CorpusFormat format);

}  // namespace revmine

#endif  // REVMINE_CORPUS_IO_HPP
