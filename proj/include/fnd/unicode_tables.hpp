#pragma once

namespace fnd::detail {

// General categories L* and N*.
bool is_alnum_codepoint(char32_t cp);

// 1:1 lowercase mapping; codepoints without one map to themselves.
char32_t simple_lowercase(char32_t cp);

}  // namespace fnd::detail
