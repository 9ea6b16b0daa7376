#ifndef CSYNC_AUTOMATA_HPP
#define CSYNC_AUTOMATA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace csync {

// Ordered list of distinct letter tokens. The order is the tie-break order
// used for every "least word" choice in the library.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> letters);

    // a, b, c, ... of the given size.
    static Alphabet standard(int size);

    int size() const { return static_cast<int>(letters_.size()); }
    const std::string& operator[](int x) const { return letters_[x]; }
    const std::vector<std::string>& letters() const { return letters_; }
    int index_of(std::string_view token) const;  // -1 when absent
    bool single_char_tokens() const;

    bool operator==(const Alphabet& other) const { return letters_ == other.letters_; }
    bool operator!=(const Alphabet& other) const { return !(*this == other); }

private:
    std::vector<std::string> letters_;
};

// Letter indices into an Alphabet; the empty vector is the empty word.
using Word = std::vector<int>;

// Subset of an alphabet of at most 32 letters.
class LetterSet {
public:
    LetterSet() = default;
    explicit LetterSet(std::uint32_t bits) : bits_(bits) {}
    static LetterSet of(std::initializer_list<int> letters);
    static LetterSet full(int alphabet_size);

    bool contains(int x) const { return (bits_ >> x) & 1U; }
    void insert(int x) { bits_ |= (1U << x); }
    void erase(int x) { bits_ &= ~(1U << x); }
    bool empty() const { return bits_ == 0; }
    int size() const;
    std::uint32_t bits() const { return bits_; }
    std::vector<int> elements() const;

    LetterSet operator|(LetterSet o) const { return LetterSet(bits_ | o.bits_); }
    LetterSet operator&(LetterSet o) const { return LetterSet(bits_ & o.bits_); }
    LetterSet minus(LetterSet o) const { return LetterSet(bits_ & ~o.bits_); }
    bool subset_of(LetterSet o) const { return (bits_ & ~o.bits_) == 0; }
    bool operator==(const LetterSet& o) const { return bits_ == o.bits_; }
    bool operator!=(const LetterSet& o) const { return bits_ != o.bits_; }

private:
    std::uint32_t bits_ = 0;
};

// Partial deterministic finite automaton with states 1..n. A transition
// target of 0 means "undefined".
class Pdfa {
public:
    Pdfa() = default;
    Pdfa(Alphabet alphabet, int states);

    const Alphabet& alphabet() const { return alphabet_; }
    int states() const { return states_; }
    int initial() const { return initial_; }
    int next(int p, int x) const { return delta_[index(p, x)]; }
    bool is_final(int p) const { return finals_[p - 1] != 0; }
    std::vector<int> finals() const;

    void set_transition(int p, int x, int q);
    void clear_transition(int p, int x) { delta_[index(p, x)] = 0; }
    void set_initial(int p);
    void set_final(int p, bool value = true);
    void clear_finals();

    bool is_complete() const;
    std::size_t transition_count() const;

    bool operator==(const Pdfa& other) const = default;

private:
    std::size_t index(int p, int x) const
    {
        return static_cast<std::size_t>(p - 1) * static_cast<std::size_t>(alphabet_.size()) +
               static_cast<std::size_t>(x);
    }

    Alphabet alphabet_;
    int states_ = 0;
    int initial_ = 1;
    std::vector<int> delta_;
    std::vector<char> finals_;
};

// Deterministic complete semi-automaton with states 1..n.
class Dcsa {
public:
    Dcsa() = default;
    Dcsa(Alphabet alphabet, int states);  // every letter initially a self-loop

    const Alphabet& alphabet() const { return alphabet_; }
    int states() const { return states_; }
    int next(int q, int x) const
    {
        return delta_[static_cast<std::size_t>(q - 1) * static_cast<std::size_t>(alphabet_.size()) +
                      static_cast<std::size_t>(x)];
    }
    void set_transition(int q, int x, int target);

    // Fails with InputError unless every transition of `b` is defined.
    static Dcsa from_complete(const Pdfa& b);

    bool operator==(const Dcsa& other) const = default;

private:
    Alphabet alphabet_;
    int states_ = 0;
    std::vector<int> delta_;
};

struct Homomorphism {
    Alphabet source;
    Alphabet target;
    std::vector<Word> image;  // image[x] for each source letter x

    static Homomorphism identity(const Alphabet& alphabet);
    Word apply(const Word& w) const;
};

enum class ProductMode { intersection, union_, difference };

struct SccDecomposition {
    std::vector<int> component;                // component[p-1], components numbered 0..k-1
    std::vector<std::vector<int>> members;     // states of each component, ascending
    std::vector<std::vector<int>> successors;  // condensation DAG edges, ascending, no self-edges
    std::vector<bool> nontrivial;              // component carries a cycle
    int count() const { return static_cast<int>(members.size()); }
};

struct FirstReturns {
    bool infinite = false;
    std::vector<Word> words;  // radix order; meaningful only when !infinite
};

// Configurable cap on subset constructions (default 1,000,000 states).
std::size_t subset_state_cap();
void set_subset_state_cap(std::size_t cap);

// --- running -------------------------------------------------------------
std::optional<int> run(const Pdfa& b, int from, const Word& w);
int run(const Dcsa& a, int from, const Word& w);
std::vector<int> run_set(const Dcsa& a, const std::vector<int>& states, const Word& w);
bool accepts(const Pdfa& b, const Word& w);
LetterSet sigma_ij(const Pdfa& b, int i, int j);

// --- structure -----------------------------------------------------------
Pdfa empty_pdfa(const Alphabet& alphabet);
Pdfa universal_pdfa(const Alphabet& alphabet);
Pdfa trim(const Pdfa& b);
bool is_trim(const Pdfa& b);
std::vector<bool> accessible_states(const Pdfa& b);
std::vector<bool> coaccessible_states(const Pdfa& b);
SccDecomposition sccs(const Pdfa& b);
SccDecomposition sccs(const Dcsa& a);
bool is_returning(const Pdfa& b);
Pdfa with_initial(const Pdfa& b, int p);
Pdfa with_finals(const Pdfa& b, const std::vector<int>& finals);

// --- boolean operations and decision procedures --------------------------
Pdfa complete(const Pdfa& b);
Pdfa product(const Pdfa& x, const Pdfa& y, ProductMode mode);
Pdfa complement(const Pdfa& b);
bool is_empty(const Pdfa& b);
bool is_finite(const Pdfa& b);
// True iff L(y) ⊆ L(x), i.e. "x includes y".
bool includes(const Pdfa& x, const Pdfa& y);
bool equivalent(const Pdfa& x, const Pdfa& y);
// Minimal trim recognizer, states numbered in breadth-first order from the
// initial state with letters in alphabet order.
Pdfa minimize(const Pdfa& b);
// Text key identifying the language: equal keys iff equal languages.
std::string canonical_key(const Pdfa& b);
// Least word of the language in length-then-lexicographic order.
std::optional<Word> shortest_word(const Pdfa& b);

// --- derived languages ---------------------------------------------------
Pdfa pref_automaton(const Pdfa& b);
Pdfa suff_automaton(const Pdfa& b);
Pdfa fact_automaton(const Pdfa& b);
Pdfa ideal_automaton(const Word& u, const Alphabet& alphabet);
Pdfa left_quotient(const Pdfa& b, const Word& u);
Pdfa concat(const Pdfa& x, const Pdfa& y);
Pdfa star(const Pdfa& x);
Pdfa word_language(const std::vector<Word>& words, const Alphabet& alphabet);
Pdfa letters_star(LetterSet gamma, const Alphabet& alphabet);
Pdfa restrict_to_ideal(const Pdfa& b, const Word& u);  // L(b) ∩ Σ*uΣ*
Pdfa restrict_to_factor_ideal(const Pdfa& b, const Pdfa& factor);  // L(b) ∩ Σ*·L(factor)·Σ*
Pdfa hom_image(const Pdfa& b, const Homomorphism& phi);
Pdfa hom_preimage(const Pdfa& b, const Homomorphism& phi);

// --- cycles, boundedness -------------------------------------------------
FirstReturns first_return_words(const Pdfa& b, int p, std::optional<int> max_len = std::nullopt);
bool is_polycyclic(const Pdfa& b);
bool is_bounded(const Pdfa& b);

// --- renaming ------------------------------------------------------------
// perm[x] is the new index of letter x.
Pdfa relabel(const Pdfa& b, const std::vector<int>& perm);
std::optional<std::vector<int>> equal_up_to_letter_renaming(const Pdfa& x, const Pdfa& y);
std::vector<int> inverse_permutation(const std::vector<int>& perm);

// --- words ---------------------------------------------------------------
std::string format_word(const Alphabet& alphabet, const Word& w);
Word parse_word(const Alphabet& alphabet, std::string_view text);
bool is_prefix_free(const std::vector<Word>& words);
bool radix_less(const Word& x, const Word& y);
// Every word of length ≤ max_len in radix order.
std::vector<Word> words_up_to(int alphabet_size, int max_len);

}  // namespace csync

#endif
