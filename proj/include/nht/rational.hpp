#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace nht {

// Exact rational scalar. Offsets of tree points and entries of matrices in
// rational mode use this type so that identity tests and replays are exact.
using Rat = mpq_class;

inline Rat rat_from_double(double x) {
    Rat q;
    mpq_set_d(q.get_mpq_t(), x);  // exact: doubles are dyadic rationals
    return q;
}

inline double rat_to_double(const Rat& q) { return q.get_d(); }

// Parses "p/q", "p", or a decimal like "-1.25" into an exact rational.
inline Rat rat_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rat q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
        q.canonicalize();
        if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
        return q;
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t frac = s.size() - dot - 1;
        mpz_class num(digits), den(1);
        for (size_t i = 0; i < frac; ++i) den *= 10;
        Rat q(num, den);
        q.canonicalize();
        return q;
    }
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad integer: " + s);
    q.canonicalize();
    return q;
}

inline std::string rat_to_string(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace nht
