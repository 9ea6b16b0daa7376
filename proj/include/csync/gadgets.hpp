#ifndef CSYNC_GADGETS_HPP
#define CSYNC_GADGETS_HPP

#include <string>
#include <vector>

#include "csync/automata.hpp"

namespace csync {

// A constructed instance and the two sides of its reduction: `instance`
// has a synchronizing word in L(transformed_constraint) iff the base
// automaton has one in L(base_constraint).
struct GadgetOutput {
    Dcsa instance;
    Pdfa transformed_constraint;
    Pdfa base_constraint;
    std::string provenance;
};

// A × (Σ*uΣ* tracker), states (q, t) ↦ (q-1)·(|u|+1) + t. For every L the
// instance question under L matches the base question under L ∩ Σ*uΣ*;
// L defaults to Σ*.
GadgetOutput ideal_product(const Dcsa& a, const Word& u);
GadgetOutput ideal_product(const Dcsa& a, const Word& u, const Pdfa& constraint);

// Letters of the source alphabet act as their images. The instance
// question under L matches the base question under φ(L); L defaults to
// the source Σ*.
GadgetOutput hom_preimage_instance(const Dcsa& a, const Homomorphism& phi);
GadgetOutput hom_preimage_instance(const Dcsa& a, const Homomorphism& phi, const Pdfa& constraint);

enum class UcConstruction {
    // The prefix-tree layer plus S × (T \ {t_f}). Correct only when reading u
    // collapses the prefix-tree layer onto s′; this is checked up front.
    literal,
    // The prefix-tree layer also tracks occurrences of u and resets to s′ at
    // each one. Correct when u occurs exactly once in every word of uC*.
    tracked,
};

// Reduction from a(b+c)*-synchronization: `a` has letters a, b, c (indices
// 0, 1, 2), the instance is over `sigma` and is read against Γ*uC*.
// Throws HypothesisError naming the failing clause.
GadgetOutput uc_gadget(const Dcsa& a, const Alphabet& sigma, LetterSet gamma, const Word& u,
                       const std::vector<Word>& c, UcConstruction construction = UcConstruction::literal);

// Expected state counts of the two uc_gadget constructions.
int uc_gadget_state_count(const Dcsa& a, const Word& u, const std::vector<Word>& c, UcConstruction construction);

// Reduction from (a+b)*c-synchronization for inputs whose state s is a
// sink entered from other states only by c; the instance is read against
// C*uΓ*. x ∈ C is the closure letter.
GadgetOutput cstar_u_gadget(const Dcsa& a, const Alphabet& sigma, LetterSet gamma, const Word& u,
                            const std::vector<Word>& c, const Word& x);

// The sink s used by cstar_u_gadget, or 0 when `a` has none.
int sink_entered_only_by_c(const Dcsa& a);

// Doubled automaton where Γ idles on the copy, copy of q is q + |Q|. The
// instance question under Γ*·L matches the base question under L, for L
// whose start state has no outgoing Γ transition; L defaults to
// ε + (Σ∖Γ)Σ*.
GadgetOutput add_loops_gadget(const Dcsa& a, LetterSet gamma);
GadgetOutput add_loops_gadget(const Dcsa& a, LetterSet gamma, const Pdfa& constraint);

// Γ*uC* and C*uΓ* as automata.
Pdfa gamma_u_c_language(const Alphabet& sigma, LetterSet gamma, const Word& u, const std::vector<Word>& c);
Pdfa c_u_gamma_language(const Alphabet& sigma, LetterSet gamma, const Word& u, const std::vector<Word>& c);

}  // namespace csync

#endif
