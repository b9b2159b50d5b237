#include "fnd/preprocess.hpp"

#include <string_view>

namespace fnd {

namespace {

// Working buffer with the live end index k and the suffix split point j,
// following the classic description of the algorithm.
struct Stemmer {
    std::string word;
    int k = 0;
    int j = 0;

    bool consonant(int i) const {
        switch (word[static_cast<std::size_t>(i)]) {
            case 'a':
            case 'e':
            case 'i':
            case 'o':
            case 'u':
                return false;
            case 'y':
                return i == 0 ? true : !consonant(i - 1);
            default:
                return true;
        }
    }

    // Number of vowel-consonant sequences in word[0..j].
    int measure() const {
        int n = 0;
        int i = 0;
        while (true) {
            if (i > j) return n;
            if (!consonant(i)) break;
            ++i;
        }
        ++i;
        while (true) {
            while (true) {
                if (i > j) return n;
                if (consonant(i)) break;
                ++i;
            }
            ++i;
            ++n;
            while (true) {
                if (i > j) return n;
                if (!consonant(i)) break;
                ++i;
            }
            ++i;
        }
    }

    bool stem_has_vowel() const {
        for (int i = 0; i <= j; ++i) {
            if (!consonant(i)) return true;
        }
        return false;
    }

    bool double_consonant(int i) const {
        if (i < 1) return false;
        if (word[static_cast<std::size_t>(i)] != word[static_cast<std::size_t>(i - 1)]) return false;
        return consonant(i);
    }

    // consonant-vowel-consonant ending at i, last consonant not w/x/y.
    bool cvc(int i) const {
        if (i < 2 || !consonant(i) || consonant(i - 1) || !consonant(i - 2)) return false;
        const char c = word[static_cast<std::size_t>(i)];
        return c != 'w' && c != 'x' && c != 'y';
    }

    char at(int i) const { return word[static_cast<std::size_t>(i)]; }

    bool ends(std::string_view suffix) {
        const int len = static_cast<int>(suffix.size());
        if (len > k + 1) return false;
        if (word.compare(static_cast<std::size_t>(k - len + 1), static_cast<std::size_t>(len),
                         suffix) != 0) {
            return false;
        }
        j = k - len;
        return true;
    }

    void set_suffix(std::string_view s) {
        word.replace(static_cast<std::size_t>(j + 1), static_cast<std::size_t>(k - j), s);
        k = j + static_cast<int>(s.size());
    }

    void replace_if_stem(std::string_view s) {
        if (measure() > 0) set_suffix(s);
    }

    // Plurals and -ed/-ing.
    void step1ab() {
        if (at(k) == 's') {
            if (ends("sses")) {
                k -= 2;
            } else if (ends("ies")) {
                set_suffix("i");
            } else if (at(k - 1) != 's') {
                --k;
            }
        }
        if (ends("eed")) {
            if (measure() > 0) --k;
        } else if ((ends("ed") || ends("ing")) && stem_has_vowel()) {
            k = j;
            if (ends("at")) {
                set_suffix("ate");
            } else if (ends("bl")) {
                set_suffix("ble");
            } else if (ends("iz")) {
                set_suffix("ize");
            } else if (double_consonant(k)) {
                --k;
                const char c = at(k);
                if (c == 'l' || c == 's' || c == 'z') ++k;
            } else if (measure() == 1 && cvc(k)) {
                set_suffix("e");
            }
        }
    }

    // Terminal y -> i when the stem contains a vowel.
    void step1c() {
        if (ends("y") && stem_has_vowel()) {
            word[static_cast<std::size_t>(k)] = 'i';
        }
    }

    struct Rule {
        std::string_view suffix;
        std::string_view replacement;
    };

    void apply_first(std::initializer_list<Rule> rules) {
        for (const Rule& rule : rules) {
            if (ends(rule.suffix)) {
                replace_if_stem(rule.replacement);
                return;
            }
        }
    }

    // Double suffixes to single ones, dispatched on the penultimate char.
    void step2() {
        if (k < 1) return;
        switch (at(k - 1)) {
            case 'a':
                apply_first({{"ational", "ate"}, {"tional", "tion"}});
                break;
            case 'c':
                apply_first({{"enci", "ence"}, {"anci", "ance"}});
                break;
            case 'e':
                apply_first({{"izer", "ize"}});
                break;
            case 'l':
                apply_first({{"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"},
                             {"ousli", "ous"}});
                break;
            case 'o':
                apply_first({{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}});
                break;
            case 's':
                apply_first({{"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"},
                             {"ousness", "ous"}});
                break;
            case 't':
                apply_first({{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}});
                break;
            case 'g':
                apply_first({{"logi", "log"}});
                break;
            default:
                break;
        }
    }

    // -ic-, -full, -ness etc.
    void step3() {
        switch (at(k)) {
            case 'e':
                apply_first({{"icate", "ic"}, {"ative", ""}, {"alize", "al"}});
                break;
            case 'i':
                apply_first({{"iciti", "ic"}});
                break;
            case 'l':
                apply_first({{"ical", "ic"}, {"ful", ""}});
                break;
            case 's':
                apply_first({{"ness", ""}});
                break;
            default:
                break;
        }
    }

    // Drops -ant, -ence, etc. in context m > 1.
    void step4() {
        if (k < 1) return;
        bool matched = false;
        switch (at(k - 1)) {
            case 'a':
                matched = ends("al");
                break;
            case 'c':
                matched = ends("ance") || ends("ence");
                break;
            case 'e':
                matched = ends("er");
                break;
            case 'i':
                matched = ends("ic");
                break;
            case 'l':
                matched = ends("able") || ends("ible");
                break;
            case 'n':
                matched = ends("ant") || ends("ement") || ends("ment") || ends("ent");
                break;
            case 'o':
                matched = (ends("ion") && j >= 0 && (at(j) == 's' || at(j) == 't')) || ends("ou");
                break;
            case 's':
                matched = ends("ism");
                break;
            case 't':
                matched = ends("ate") || ends("iti");
                break;
            case 'u':
                matched = ends("ous");
                break;
            case 'v':
                matched = ends("ive");
                break;
            case 'z':
                matched = ends("ize");
                break;
            default:
                return;
        }
        if (matched && measure() > 1) k = j;
    }

    // Final -e and -ll cleanup.
    void step5() {
        j = k;
        if (at(k) == 'e') {
            const int a = measure();
            if (a > 1 || (a == 1 && !cvc(k - 1))) --k;
        }
        if (at(k) == 'l' && double_consonant(k) && measure() > 1) --k;
    }
};

}  // namespace

std::string porter_stem(const std::string& token) {
    if (token.size() <= 2) return token;
    for (char c : token) {
        if (c < 'a' || c > 'z') return token;
    }
    Stemmer s;
    s.word = token;
    s.k = static_cast<int>(token.size()) - 1;
    s.step1ab();
    s.step1c();
    s.step2();
    s.step3();
    s.step4();
    s.step5();
    return s.word.substr(0, static_cast<std::size_t>(s.k) + 1);
}

}  // namespace fnd
