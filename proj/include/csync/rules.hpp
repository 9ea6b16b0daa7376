#ifndef CSYNC_RULES_HPP
#define CSYNC_RULES_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "csync/automata.hpp"

namespace csync {

enum class Lower { NoBound, NPHard, PSPACEHard };
enum class Upper { P, NP, PSPACE };

const char* to_string(Lower l);
const char* to_string(Upper u);

struct Certificate;
using CertRef = std::shared_ptr<const Certificate>;

// Payloads. The subject language of a certificate is always the language
// it is replayed against; inner certificates are about derived languages.
struct FiniteCert {};
struct ReturningCert {};
struct StartEqualsFinalCert {};
struct PolycyclicCert {};

// L = U·V·W with V recognized by an automaton whose initial state is its
// unique final state, U ⊆ Suff(V) and W ⊆ Pref(V).
struct UvwCert {
    Pdfa u, v, w;
};

struct UnionPart {
    Pdfa language;
    CertRef certificate;
};
// L is the union of the parts; the parts' upper bounds carry over.
struct UnionCert {
    std::vector<UnionPart> parts;
};

enum class HomDirection {
    // L = φ(L(source)): an upper bound of the source carries over to L.
    image_of_source,
    // φ(L) = L(source): a lower bound of the source carries over to L.
    source_is_image,
};
struct HomCert {
    Homomorphism phi;
    Pdfa source;
    HomDirection direction = HomDirection::image_of_source;
    CertRef inner;
};

// L ⊆ Fact(L') and L' ⊆ Fact(L); bounds carry over in both directions.
struct FactorEqCert {
    Pdfa other;
    CertRef inner;
};

// Lower bounds of L ∩ Σ*uΣ* carry over to L, and likewise for any
// regular two-sided ideal.
// With `factor` set the ideal is Σ*·L(factor)·Σ* instead, and u is empty.
struct IdealRestrictionCert {
    Word u;
    CertRef inner;
    std::optional<Pdfa> factor;
};

enum class UcVariant { gamma_u_c, c_u_gamma };
struct UcCert {
    LetterSet gamma;
    Word u;
    std::vector<Word> c;
    UcVariant variant = UcVariant::gamma_u_c;
};

// L = u·v*·U with u ∉ Fact(v*), v ∉ Fact(U), Pref(v*) ∩ U = ∅.
struct UvuCert {
    Word u;
    Word v;
    Pdfa big_u;
};

struct KnownLanguageCert {
    std::string id;
    std::vector<int> permutation;  // relabel(entry, permutation) ≡ L
};

struct TwoStateFormulaCert {
    LetterSet s11, s12, s21, s22;
};

// L = Γ*·L(base) where no Γ-transition leaves the initial state of base;
// lower bounds of base carry over to L.
struct AddPrefixLoopsCert {
    LetterSet gamma;
    Pdfa base;
    CertRef inner;
};

using CertificateBody = std::variant<FiniteCert, ReturningCert, StartEqualsFinalCert, UvwCert, UnionCert, HomCert,
                                     FactorEqCert, IdealRestrictionCert, UcCert, UvuCert, PolycyclicCert,
                                     KnownLanguageCert, TwoStateFormulaCert, AddPrefixLoopsCert>;

struct Certificate {
    CertificateBody body;
    // The bounds the certificate claims for its subject language.
    std::optional<Lower> lower;
    std::optional<Upper> upper;
};

const char* certificate_kind(const Certificate& c);
CertRef make_cert(CertificateBody body, std::optional<Lower> lower, std::optional<Upper> upper);

struct Verdict {
    Lower lower = Lower::NoBound;
    Upper upper = Upper::PSPACE;
    std::vector<Certificate> certificates;

    bool resolved() const;
    // "P", "NP-complete", "PSPACE-complete" or "unresolved (...)".
    std::string summary() const;
};

// Raises EngineError when lower and upper contradict each other.
void check_consistency(Lower lower, Upper upper);
// Folds the claims of `certs` into a verdict.
Verdict verdict_from(std::vector<Certificate> certs);

struct ClassifyConfig {
    int max_u_len = 5;
    int max_c_len = 4;
    int max_depth = 3;
    bool use_knowledge_base = true;
};

Verdict classify(const Pdfa& b, const ClassifyConfig& cfg = {});

// Re-derives every hypothesis of `c` against `subject`.
bool replay(const Certificate& c, const Pdfa& subject);
bool replay_all(const Verdict& v, const Pdfa& subject);

struct Normalized {
    Pdfa automaton;
    std::string note;
    bool changed = false;
    bool start_is_unique_final = false;
};
Normalized normalize_final_states(const Pdfa& b);

Verdict two_state_classify(const Pdfa& b);

bool verify_uvw(const Pdfa& u, const Pdfa& v, const Pdfa& w);
bool verify_uc(LetterSet gamma, const Word& u, const std::vector<Word>& c, const Pdfa& target, UcVariant variant);
// Hypotheses of the uC construction without the language equality;
// returns the first failing clause, or nullopt when all hold.
std::optional<std::string> uc_hypothesis_failure(LetterSet gamma, const Word& u, const std::vector<Word>& c,
                                                 const Alphabet& alphabet, UcVariant variant);
// ∃x closure condition for D = C ∪ {u}: vxw ∈ D* implies vx ∈ D*.
bool uc_closure_letter(const std::vector<Word>& c, const Word& u, const Word& x, const Alphabet& alphabet);
// The same condition read off the prefix tree of D; requires D prefix-free.
bool uc_closure_letter_trie(const std::vector<Word>& c, const Word& u, const Word& x);
bool verify_uvU(const Word& u, const Word& v, const Pdfa& big_u, const Pdfa& target);

std::optional<Certificate> find_uc_pattern(const Pdfa& b, const ClassifyConfig& cfg = {});
std::optional<Certificate> find_uvU_pattern(const Pdfa& b, const ClassifyConfig& cfg = {});
std::vector<Pdfa> union_split(const Pdfa& b);
// `known` is a verdict for φ(L(b)); its lower bound carries over to L(b).
std::optional<Certificate> hom_image_rule(const Pdfa& b, const Homomorphism& phi, const Verdict& known);
bool factor_equiv_rule(const Pdfa& b, const Pdfa& b2);
std::optional<Certificate> knowledge_base_lookup(const Pdfa& b);

struct MetaCheck {
    bool applicable = false;
    bool consistent = true;
    int scc_count = 0;
    std::string message;
};
// Consistency of a verdict with the SCC count of a trim
// three-state binary automaton.
MetaCheck three_state_meta_check(const Pdfa& b, const Verdict& v);

// Knowledge base access.
struct KnownLanguage {
    std::string id;
    std::string description;
    Pdfa automaton;
    std::optional<Lower> lower;
    std::optional<Upper> upper;
};
const std::vector<KnownLanguage>& knowledge_base();
const KnownLanguage* find_known(const std::string& id);
// The twelve ternary PSPACE-complete two-state languages.
std::vector<std::string> ternary_pspace_ids();

// Reports.
std::string verdict_report(const Verdict& v, const Alphabet& alphabet);
std::string verdict_to_json(const Verdict& v, const Alphabet& alphabet);
Verdict verdict_from_json(const std::string& text);

}  // namespace csync

#endif
