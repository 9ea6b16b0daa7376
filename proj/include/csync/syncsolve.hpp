#ifndef CSYNC_SYNCSOLVE_HPP
#define CSYNC_SYNCSOLVE_HPP

#include <cstddef>
#include <optional>

#include "csync/automata.hpp"

namespace csync {

struct SyncResult {
    bool yes = false;
    std::optional<Word> witness;
    std::size_t explored = 0;
};

struct SolverConfig {
    int max_input_states = 24;  // subset search cap on |Q|
};

// Pair-merging algorithm; the witness has length at most |Q|^3 but is not
// necessarily shortest.
SyncResult find_sync_word(const Dcsa& a);

// Exact breadth-first search over (subset of Q, constraint state). The
// witness is the least accepted word in length-then-lexicographic order.
SyncResult constrained_sync(const Dcsa& a, const Pdfa& b, const SolverConfig& cfg = {});

// Words of length ≤ max_len in radix order; the first word in L(b) that
// synchronizes `a` is returned. Words that reach the same (image set,
// constraint state) at the same length have the same continuations, so only
// the radix-least of them is extended further.
SyncResult oracle_enumerate(const Dcsa& a, const Pdfa& b, int max_len);

// Literal enumeration of every word up to max_len, without merging. Only
// for small bounds.
SyncResult oracle_brute_force(const Dcsa& a, const Pdfa& b, int max_len);

bool validate_witness(const Dcsa& a, const Pdfa& b, const Word& w);
bool is_synchronizing_word(const Dcsa& a, const Word& w);

Dcsa cerny_automaton(int n);

}  // namespace csync

#endif
