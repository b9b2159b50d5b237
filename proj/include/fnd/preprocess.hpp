#pragma once

#include <string>
#include <vector>

namespace fnd {

// Ordered, lowercase, whitespace-free tokens.
using TokenStream = std::vector<std::string>;

// Classical = lowercase + tokenize; Neural adds Porter stemming per token.
enum class PipelineKind { Classical, Neural };

// Maximal runs of Unicode alphanumeric characters from the lowercased
// text. Punctuation, emoji, '#', '@' and URL separators all delimit.
TokenStream tokenize(const std::string& text);

// Classic 5-step suffix stripping. Tokens that are not pure ASCII letters
// (or are shorter than 3 chars) pass through unchanged.
std::string porter_stem(const std::string& token);

TokenStream preprocess(const std::string& text, PipelineKind kind);

std::string pipeline_name(PipelineKind kind);
PipelineKind parse_pipeline(const std::string& name);

}  // namespace fnd
