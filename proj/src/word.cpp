#include "nht/word.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace nht {

Word Word::parse(const std::string& s) {
    std::vector<int> letters;
    for (char ch : s) {
        if (ch == ' ' || ch == '\t') continue;
        if (ch == '1' && s.size() <= 2) continue;  // "1" denotes the empty word
        if (std::islower(static_cast<unsigned char>(ch))) letters.push_back(ch - 'a' + 1);
        else if (std::isupper(static_cast<unsigned char>(ch))) letters.push_back(-(ch - 'A' + 1));
        else throw std::invalid_argument(std::string("bad word character: ") + ch);
    }
    return Word(letters);
}

std::string Word::str() const {
    std::string out;
    out.reserve(letters_.size());
    for (int c : letters_) {
        int idx = std::abs(c) - 1;
        if (idx >= 26) throw std::out_of_range("word alphabet exceeds 26 letters");
        out.push_back(static_cast<char>((c > 0 ? 'a' : 'A') + idx));
    }
    return out;
}

std::string fingerprint_hex(const std::string& payload) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(payload)));
    return std::string(buf);
}

}  // namespace nht
