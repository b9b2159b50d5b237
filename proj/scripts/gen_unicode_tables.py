#!/usr/bin/env python3
"""Regenerates src/unicode_tables.cpp from Python's unicodedata.

Alphanumeric = general categories L* and N*. Lowercase map keeps only
1:1 mappings (multi-codepoint lowerings such as U+0130 pass through).
"""

import sys
import unicodedata


def alnum_ranges():
    ranges = []
    start = None
    for cp in range(0x110000):
        cat = unicodedata.category(chr(cp))
        is_alnum = cat[0] in ("L", "N")
        if is_alnum and start is None:
            start = cp
        elif not is_alnum and start is not None:
            ranges.append((start, cp - 1))
            start = None
    if start is not None:
        ranges.append((start, 0x10FFFF))
    return ranges


def lowercase_pairs():
    pairs = []
    for cp in range(0x110000):
        low = chr(cp).lower()
        if len(low) == 1 and ord(low) != cp:
            pairs.append((cp, ord(low)))
    return pairs


def main():
    out = sys.stdout
    ranges = alnum_ranges()
    pairs = lowercase_pairs()
    out.write("// Generated by scripts/gen_unicode_tables.py from Unicode %s data.\n" % unicodedata.unidata_version)
    out.write("// Do not edit by hand.\n\n")
    out.write('#include "fnd/unicode_tables.hpp"\n\n')
    out.write("#include <algorithm>\n\n")
    out.write("namespace fnd::detail {\n\n")
    out.write("namespace {\n\n")
    out.write("struct CpRange { char32_t first; char32_t last; };\n")
    out.write("struct CaseMap { char32_t from; char32_t to; };\n\n")
    out.write("constexpr CpRange kAlnumRanges[] = {\n")
    for i, (a, b) in enumerate(ranges):
        sep = "\n" if (i + 1) % 4 == 0 else " "
        out.write("    {0x%X, 0x%X}," % (a, b) + sep)
    out.write("\n};\n\n")
    out.write("constexpr CaseMap kLowercaseMap[] = {\n")
    for i, (a, b) in enumerate(pairs):
        sep = "\n" if (i + 1) % 4 == 0 else " "
        out.write("    {0x%X, 0x%X}," % (a, b) + sep)
    out.write("\n};\n\n")
    out.write("}  // namespace\n\n")
    out.write("""bool is_alnum_codepoint(char32_t cp) {
    auto it = std::upper_bound(
        std::begin(kAlnumRanges), std::end(kAlnumRanges), cp,
        [](char32_t v, const CpRange& r) { return v < r.first; });
    if (it == std::begin(kAlnumRanges)) return false;
    --it;
    return cp >= it->first && cp <= it->last;
}

char32_t simple_lowercase(char32_t cp) {
    auto it = std::lower_bound(
        std::begin(kLowercaseMap), std::end(kLowercaseMap), cp,
        [](const CaseMap& m, char32_t v) { return m.from < v; });
    if (it != std::end(kLowercaseMap) && it->from == cp) return it->to;
    return cp;
}

}  // namespace fnd::detail
""")


if __name__ == "__main__":
    main()
