#ifndef CSYNC_TEST_HELPERS_HPP
#define CSYNC_TEST_HELPERS_HPP

#include <random>

#include "csync/automata.hpp"
#include "csync/text_format.hpp"

namespace csync::testing {

inline Dcsa random_dcsa(std::mt19937& rng, int letters, int states)
{
    Dcsa a(Alphabet::standard(letters), states);
    std::uniform_int_distribution<int> target(1, states);
    for (int q = 1; q <= states; ++q) {
        for (int x = 0; x < letters; ++x) {
            a.set_transition(q, x, target(rng));
        }
    }
    return a;
}

// Each transition is undefined with probability 1/(states+1).
inline Pdfa random_pdfa(std::mt19937& rng, int letters, int states)
{
    Pdfa b(Alphabet::standard(letters), states);
    std::uniform_int_distribution<int> target(0, states);
    std::bernoulli_distribution coin(0.5);
    for (int p = 1; p <= states; ++p) {
        for (int x = 0; x < letters; ++x) {
            int q = target(rng);
            if (q != 0) {
                b.set_transition(p, x, q);
            }
        }
        b.set_final(p, coin(rng));
    }
    return b;
}

inline Pdfa re(const char* expr, int letters = 2)
{
    return from_regex(expr, Alphabet::standard(letters));
}

inline Word w(const char* text, int letters = 3)
{
    return parse_word(Alphabet::standard(letters), text);
}

}  // namespace csync::testing

#endif
