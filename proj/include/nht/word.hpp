#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nht {

// A freely reduced word over an indexed alphabet. Letters are nonzero ints:
// +i means generator i, -i its inverse (i is 1-based). Used both for
// provenance words over tuple indices and for vertices of the Cayley tree
// of a free group.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<int> letters) : letters_(std::move(letters)) { reduce(); }

    static Word letter(int index, int exponent) { return Word({exponent > 0 ? index : -index}); }

    const std::vector<int>& letters() const { return letters_; }
    bool empty() const { return letters_.empty(); }
    size_t size() const { return letters_.size(); }
    int operator[](size_t i) const { return letters_[i]; }

    Word inverse() const {
        std::vector<int> out;
        out.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(-*it);
        Word w;
        w.letters_ = std::move(out);  // inverse of a reduced word is reduced
        return w;
    }

    Word operator*(const Word& rhs) const {
        std::vector<int> out = letters_;
        for (int c : rhs.letters_) {
            if (!out.empty() && out.back() == -c) out.pop_back();
            else out.push_back(c);
        }
        Word w;
        w.letters_ = std::move(out);
        return w;
    }

    bool operator==(const Word& o) const { return letters_ == o.letters_; }
    bool operator!=(const Word& o) const { return !(*this == o); }
    bool operator<(const Word& o) const {  // length, then lexicographic; deterministic tie-break
        if (letters_.size() != o.letters_.size()) return letters_.size() < o.letters_.size();
        for (size_t i = 0; i < letters_.size(); ++i) {
            int a = key(letters_[i]), b = key(o.letters_[i]);
            if (a != b) return a < b;
        }
        return false;
    }

    // w = u v u^-1 with v cyclically reduced; returns (u, v).
    std::pair<Word, Word> cyclic_split() const {
        size_t a = 0, b = letters_.size();
        while (b > a + 1 && letters_[a] == -letters_[b - 1]) { ++a; --b; }
        Word u, v;
        u.letters_.assign(letters_.begin(), letters_.begin() + a);
        v.letters_.assign(letters_.begin() + a, letters_.begin() + b);
        return {u, v};
    }

    Word cyclic_reduction() const { return cyclic_split().second; }

    // Length of the longest common prefix with another word.
    size_t common_prefix_len(const Word& o) const {
        size_t n = std::min(letters_.size(), o.letters_.size()), i = 0;
        while (i < n && letters_[i] == o.letters_[i]) ++i;
        return i;
    }

    Word prefix(size_t n) const {
        Word w;
        w.letters_.assign(letters_.begin(), letters_.begin() + std::min(n, letters_.size()));
        return w;
    }

    int max_index() const {
        int m = 0;
        for (int c : letters_) m = std::max(m, std::abs(c));
        return m;
    }

    // "aBc" style: lowercase = generator, uppercase = inverse; spaces ignored.
    static Word parse(const std::string& s);
    std::string str() const;

private:
    static int key(int c) { return std::abs(c) * 2 + (c < 0 ? 1 : 0); }
    void reduce() {
        std::vector<int> out;
        out.reserve(letters_.size());
        for (int c : letters_) {
            if (c == 0) continue;
            if (!out.empty() && out.back() == -c) out.pop_back();
            else out.push_back(c);
        }
        letters_ = std::move(out);
    }
    std::vector<int> letters_;
};

// FNV-1a over a byte view; used for deterministic fingerprints.
inline uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fingerprint_hex(const std::string& payload);

}  // namespace nht
