#ifndef CSYNC_SRC_NFA_HPP
#define CSYNC_SRC_NFA_HPP

// Internal nondeterministic automaton used as an intermediate step of
// concatenation, star, suffix closure and homomorphic images. States are
// 0-based here; determinize() produces a 1-based Pdfa.

#include <vector>

#include "csync/automata.hpp"

namespace csync::detail {

struct Nfa {
    Alphabet alphabet;
    int states = 0;
    std::vector<std::vector<int>> next;  // next[s * k + x]
    std::vector<std::vector<int>> eps;   // eps[s]
    std::vector<int> initial;
    std::vector<char> final;

    explicit Nfa(Alphabet a) : alphabet(std::move(a)) {}

    int add_state()
    {
        next.resize(next.size() + static_cast<std::size_t>(alphabet.size()));
        eps.emplace_back();
        final.push_back(0);
        return states++;
    }
    void add(int s, int x, int t) { next[static_cast<std::size_t>(s) * alphabet.size() + x].push_back(t); }
    void add_eps(int s, int t) { eps[s].push_back(t); }

    // Copies the states of `b` and returns the offset of its state 1.
    int embed(const Pdfa& b);
};

// Subset construction restricted to accessible subsets; respects the
// global subset-state cap.
Pdfa determinize(const Nfa& n);

}  // namespace csync::detail

#endif
