#ifndef REVMINE_ASPECT_XML_HPP
#define REVMINE_ASPECT_XML_HPP

#include <string>

#include "revmine/corpus.hpp"

namespace revmine {

/// Reads an aspect-term XML file of the shape
///   <sentences>
///     <sentence id="..."><text>...</text>
///       <aspectTerms><aspectTerm term="..." from="..." to="..."/>...</aspectTerms>
///     </sentence>
///   </sentences>
/// Every sentence element becomes a one-sentence review carrying the given
/// app and category, a neutral placeholder rating of 3, and annotator "gold".
/// Tokens are maximal alphanumeric runs (bytes >= 0x80 count as letters) or
/// single punctuation characters; from/to character offsets refer to the
/// entity-decoded text and must land exactly on token boundaries, otherwise
/// the span is dropped with a warning. Sets metadata language=english and
/// source=path.
/// Throws IoError when unreadable, ParseError on malformed markup, DataError
/// when the resulting corpus violates corpus invariants (e.g. repeated ids).
Corpus load_aspect_xml(const std::string& path, const std::string& app,
                       const std::string& category);

}  // namespace revmine

#endif  // REVMINE_ASPECT_XML_HPP
