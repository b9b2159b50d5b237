#include "fnd/preprocess.hpp"

#include <stdexcept>

#include "fnd/unicode_tables.hpp"

namespace fnd {

namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes the codepoint at i, advancing i. Malformed bytes consume one
// byte and decode as kInvalid, which acts as a delimiter downstream.
char32_t decode_utf8(const std::string& s, std::size_t& i) {
    const auto c0 = static_cast<unsigned char>(s[i]);
    if (c0 < 0x80) {
        ++i;
        return c0;
    }
    int len;
    if ((c0 & 0xE0) == 0xC0) {
        len = 2;
    } else if ((c0 & 0xF0) == 0xE0) {
        len = 3;
    } else if ((c0 & 0xF8) == 0xF0) {
        len = 4;
    } else {
        ++i;
        return kInvalid;
    }
    if (i + len > s.size()) {
        ++i;
        return kInvalid;
    }
    char32_t cp = c0 & (0xFF >> (len + 1));
    for (int k = 1; k < len; ++k) {
        const auto c = static_cast<unsigned char>(s[i + k]);
        if ((c & 0xC0) != 0x80) {
            ++i;
            return kInvalid;
        }
        cp = (cp << 6) | (c & 0x3F);
    }
    i += len;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return kInvalid;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

}  // namespace

TokenStream tokenize(const std::string& text) {
    TokenStream tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        char32_t cp = decode_utf8(text, i);
        if (cp != kInvalid) cp = detail::simple_lowercase(cp);
        if (cp != kInvalid && detail::is_alnum_codepoint(cp)) {
            append_utf8(current, cp);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

TokenStream preprocess(const std::string& text, PipelineKind kind) {
    TokenStream tokens = tokenize(text);
    if (kind == PipelineKind::Neural) {
        for (std::string& token : tokens) token = porter_stem(token);
    }
    return tokens;
}

std::string pipeline_name(PipelineKind kind) {
    return kind == PipelineKind::Classical ? "classical" : "neural";
}

PipelineKind parse_pipeline(const std::string& name) {
    if (name == "classical") return PipelineKind::Classical;
    if (name == "neural") return PipelineKind::Neural;
    throw std::invalid_argument("unknown pipeline \"" + name + "\"");
}

}  // namespace fnd
