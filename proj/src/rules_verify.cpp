// Verifiers for the individual rules and certificate replay.

#include <algorithm>
#include <sstream>

#include "csync/errors.hpp"
#include "csync/rules.hpp"

namespace csync {

const char* to_string(Lower l)
{
    switch (l) {
    case Lower::NoBound:
        return "none";
    case Lower::NPHard:
        return "NP-hard";
    case Lower::PSPACEHard:
        return "PSPACE-hard";
    }
    return "?";
}

const char* to_string(Upper u)
{
    switch (u) {
    case Upper::P:
        return "P";
    case Upper::NP:
        return "NP";
    case Upper::PSPACE:
        return "PSPACE";
    }
    return "?";
}

CertRef make_cert(CertificateBody body, std::optional<Lower> lower, std::optional<Upper> upper)
{
    return std::make_shared<const Certificate>(Certificate{std::move(body), lower, upper});
}

const char* certificate_kind(const Certificate& c)
{
    struct Names {
        const char* operator()(const FiniteCert&) const { return "Finite"; }
        const char* operator()(const ReturningCert&) const { return "Returning"; }
        const char* operator()(const StartEqualsFinalCert&) const { return "StartEqualsFinal"; }
        const char* operator()(const UvwCert&) const { return "UVW"; }
        const char* operator()(const UnionCert&) const { return "Union"; }
        const char* operator()(const HomCert&) const { return "Hom"; }
        const char* operator()(const FactorEqCert&) const { return "FactorEq"; }
        const char* operator()(const IdealRestrictionCert&) const { return "IdealRestriction"; }
        const char* operator()(const UcCert&) const { return "UCPattern"; }
        const char* operator()(const UvuCert&) const { return "UVUPattern"; }
        const char* operator()(const PolycyclicCert&) const { return "Polycyclic"; }
        const char* operator()(const KnownLanguageCert&) const { return "KnownLanguage"; }
        const char* operator()(const TwoStateFormulaCert&) const { return "TwoStateFormula"; }
        const char* operator()(const AddPrefixLoopsCert&) const { return "AddPrefixLoops"; }
    };
    return std::visit(Names{}, c.body);
}

// --- verdicts --------------------------------------------------------------

void check_consistency(Lower lower, Upper upper)
{
    bool ok = lower == Lower::NoBound || (lower == Lower::NPHard && upper != Upper::P) ||
              (lower == Lower::PSPACEHard && upper == Upper::PSPACE);
    if (!ok) {
        throw EngineError(std::string("inconsistent verdict: lower bound ") + to_string(lower) +
                          " with upper bound " + to_string(upper));
    }
}

bool Verdict::resolved() const
{
    return (lower == Lower::NoBound && upper == Upper::P) || (lower == Lower::NPHard && upper == Upper::NP) ||
           (lower == Lower::PSPACEHard && upper == Upper::PSPACE);
}

std::string Verdict::summary() const
{
    if (upper == Upper::P) {
        return "P";
    }
    if (lower == Lower::NPHard && upper == Upper::NP) {
        return "NP-complete";
    }
    if (lower == Lower::PSPACEHard) {
        return "PSPACE-complete";
    }
    return std::string("unresolved (lower ") + to_string(lower) + ", upper " + to_string(upper) + ")";
}

Verdict verdict_from(std::vector<Certificate> certs)
{
    Verdict v;
    for (const auto& c : certs) {
        if (c.lower && *c.lower > v.lower) {
            v.lower = *c.lower;
        }
        if (c.upper && *c.upper < v.upper) {
            v.upper = *c.upper;
        }
    }
    check_consistency(v.lower, v.upper);
    v.certificates = std::move(certs);
    return v;
}

// --- normalization ---------------------------------------------------------

Normalized normalize_final_states(const Pdfa& b)
{
    Pdfa t = trim(b);
    Normalized out{t, "", false, false};
    auto finals = t.finals();
    if (finals.empty()) {
        out.note = "empty language";
        return out;
    }
    if (finals.size() == 1 && finals[0] == t.initial()) {
        out.start_is_unique_final = true;
        out.note = "P via start-final";
        return out;
    }
    if (finals.size() == 1) {
        out.note = "final set already a singleton";
    } else {
        // Keep a single final state f that every other final state reaches;
        // then L ⊆ Fact(L') and L' ⊆ L, so both problems are equivalent.
        std::optional<int> pick;
        for (auto it = finals.rbegin(); it != finals.rend(); ++it) {
            int f = *it;
            if (f == t.initial()) {
                continue;
            }
            Pdfa probe = with_finals(t, {f});
            auto co = coaccessible_states(probe);
            bool all = std::all_of(finals.begin(), finals.end(), [&](int g) { return co[g]; });
            if (all) {
                pick = f;
                break;
            }
        }
        if (!pick) {
            out.note = "no single final state is reachable from all final states";
            return out;
        }
        out.automaton = trim(with_finals(t, {*pick}));
        out.changed = true;
        out.note = "final set reduced to a single state reachable from every final state";
    }
    // Renumber so that the unique final state is the last state.
    Pdfa& a = out.automaton;
    auto fin = a.finals();
    if (fin.size() == 1 && fin[0] != a.states() && a.states() > 1 && a.initial() == 1) {
        const int f = fin[0], last = a.states();
        auto swap_state = [&](int p) { return p == f ? last : (p == last ? f : p); };
        Pdfa r(a.alphabet(), a.states());
        for (int p = 1; p <= a.states(); ++p) {
            for (int x = 0; x < a.alphabet().size(); ++x) {
                if (int q = a.next(p, x); q != 0) {
                    r.set_transition(swap_state(p), x, swap_state(q));
                }
            }
        }
        r.set_final(last);
        r.set_initial(swap_state(a.initial()));
        a = r;
    }
    return out;
}

// --- two-state formula -----------------------------------------------------

namespace {

bool formula_pspace(LetterSet s11, LetterSet s12, LetterSet s21, LetterSet s22)
{
    return !s12.empty() && s21.empty() && !(s11 | s12).minus(s22).empty() && std::max(s11.size(), s22.size()) >= 2;
}

std::optional<TwoStateFormulaCert> two_state_sets(const Pdfa& b)
{
    if (b.states() == 2 && b.initial() == 1 && b.finals() == std::vector<int>{2}) {
        return TwoStateFormulaCert{sigma_ij(b, 1, 1), sigma_ij(b, 1, 2), sigma_ij(b, 2, 1), sigma_ij(b, 2, 2)};
    }
    Normalized n = normalize_final_states(b);
    const Pdfa& a = n.automaton;
    if (a.states() != 2 || a.initial() != 1 || a.finals() != std::vector<int>{2}) {
        return std::nullopt;
    }
    return TwoStateFormulaCert{sigma_ij(a, 1, 1), sigma_ij(a, 1, 2), sigma_ij(a, 2, 1), sigma_ij(a, 2, 2)};
}

}  // namespace

Verdict two_state_classify(const Pdfa& b)
{
    auto sets = two_state_sets(b);
    if (!sets) {
        throw InputError("two_state_classify: automaton does not normalize to two states with final set {2}");
    }
    bool hard = formula_pspace(sets->s11, sets->s12, sets->s21, sets->s22);
    Certificate c{*sets, hard ? std::optional<Lower>(Lower::PSPACEHard) : std::nullopt,
                  hard ? std::nullopt : std::optional<Upper>(Upper::P)};
    return verdict_from({c});
}

// --- UV*W --------------------------------------------------------------------

bool verify_uvw(const Pdfa& u, const Pdfa& v, const Pdfa& w)
{
    if (u.alphabet() != v.alphabet() || w.alphabet() != v.alphabet()) {
        return false;
    }
    Pdfa tv = trim(v);
    if (tv.finals() != std::vector<int>{tv.initial()}) {
        return false;
    }
    return includes(suff_automaton(v), u) && includes(pref_automaton(v), w);
}

// --- uC ------------------------------------------------------------------------

namespace {

bool unbordered(const Word& u)
{
    for (std::size_t len = 1; len < u.size(); ++len) {
        if (std::equal(u.begin(), u.begin() + static_cast<long>(len), u.end() - static_cast<long>(len))) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool uc_closure_letter(const std::vector<Word>& c, const Word& u, const Word& x, const Alphabet& alphabet)
{
    // vxw ∈ D* implies vx ∈ D*  ⇔  Pref(D*) ∩ Σ*x ⊆ D*.
    std::vector<Word> d = c;
    d.push_back(u);
    Pdfa dstar = star(word_language(d, alphabet));
    Pdfa ends_in_x = concat(universal_pdfa(alphabet), word_language({x}, alphabet));
    return includes(dstar, product(pref_automaton(dstar), ends_in_x, ProductMode::intersection));
}

bool uc_closure_letter_trie(const std::vector<Word>& c, const Word& u, const Word& x)
{
    // Prefix tree of D = C ∪ {u}: nodes are proper prefixes, completing a
    // word of D returns to the root. The condition "vxw ∈ D* implies
    // vx ∈ D*" holds iff every defined x-run from a node ends at the root.
    std::vector<Word> d = c;
    d.push_back(u);
    std::vector<Word> nodes{Word{}};
    for (const Word& w : d) {
        for (std::size_t len = 1; len < w.size(); ++len) {
            Word p(w.begin(), w.begin() + static_cast<long>(len));
            if (std::find(nodes.begin(), nodes.end(), p) == nodes.end()) {
                nodes.push_back(p);
            }
        }
    }
    auto step = [&](const Word& node, int z) -> std::optional<Word> {
        Word next = node;
        next.push_back(z);
        if (std::find(d.begin(), d.end(), next) != d.end()) {
            return Word{};
        }
        if (std::find(nodes.begin(), nodes.end(), next) != nodes.end()) {
            return next;
        }
        return std::nullopt;
    };
    for (const Word& node : nodes) {
        std::optional<Word> cur = node;
        for (int z : x) {
            cur = step(*cur, z);
            if (!cur) {
                break;
            }
        }
        if (cur && !cur->empty()) {
            return false;
        }
    }
    return true;
}

std::optional<std::string> uc_hypothesis_failure(LetterSet gamma, const Word& u, const std::vector<Word>& c,
                                                 const Alphabet& alphabet, UcVariant variant)
{
    if (u.empty()) {
        return std::string("u must be non-empty");
    }
    std::vector<Word> sorted = c;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        return std::string("C contains duplicate words");
    }
    if (c.size() < 2) {
        return std::string("C must have at least two elements");
    }
    if (!is_prefix_free(c)) {
        return std::string("C must be prefix-free");
    }
    if (!is_empty(product(star(word_language(c, alphabet)), ideal_automaton(u, alphabet), ProductMode::intersection))) {
        return std::string("C* must not meet Σ*uΣ*");
    }
    if (std::all_of(u.begin(), u.end(), [&](int x) { return gamma.contains(x); })) {
        return std::string("u must use a letter outside Γ");
    }
    if (variant == UcVariant::c_u_gamma) {
        if (!unbordered(u)) {
            return std::string("Suff(u) ∩ Pref(u) must be {ε, u}");
        }
        bool any = std::any_of(c.begin(), c.end(),
                               [&](const Word& x) { return uc_closure_letter(c, u, x, alphabet); });
        if (!any) {
            return std::string("no x ∈ C satisfies the closure condition on (C ∪ {u})*");
        }
    }
    return std::nullopt;
}

bool verify_uc(LetterSet gamma, const Word& u, const std::vector<Word>& c, const Pdfa& target, UcVariant variant)
{
    const Alphabet& sigma = target.alphabet();
    for (const Word& w : c) {
        for (int x : w) {
            if (x < 0 || x >= sigma.size()) {
                return false;
            }
        }
    }
    if (uc_hypothesis_failure(gamma, u, c, sigma, variant)) {
        return false;
    }
    Pdfa g = letters_star(gamma, sigma);
    Pdfa uw = word_language({u}, sigma);
    Pdfa cs = star(word_language(c, sigma));
    Pdfa shape = variant == UcVariant::gamma_u_c ? concat(concat(g, uw), cs) : concat(concat(cs, uw), g);
    return equivalent(shape, target);
}

// --- uv*U ------------------------------------------------------------------

bool verify_uvU(const Word& u, const Word& v, const Pdfa& big_u, const Pdfa& target)
{
    const Alphabet& sigma = target.alphabet();
    if (big_u.alphabet() != sigma || is_empty(big_u)) {
        return false;
    }
    Pdfa vstar = star(word_language({v}, sigma));
    if (accepts(fact_automaton(vstar), u)) {
        return false;
    }
    if (accepts(fact_automaton(big_u), v)) {
        return false;
    }
    if (!is_empty(product(pref_automaton(vstar), big_u, ProductMode::intersection))) {
        return false;
    }
    return equivalent(concat(concat(word_language({u}, sigma), vstar), big_u), target);
}

// --- union, factors, homomorphisms -----------------------------------------

std::vector<Pdfa> union_split(const Pdfa& b)
{
    Pdfa t = trim(b);
    std::vector<Pdfa> parts;
    auto finals = t.finals();
    if (finals.size() > 1) {
        for (int f : finals) {
            parts.push_back(minimize(with_finals(t, {f})));
        }
    } else if (!finals.empty()) {
        // One part per first letter, plus {ε} when the initial state is final.
        const int k = t.alphabet().size();
        for (int x = 0; x < k; ++x) {
            int q = t.next(t.initial(), x);
            if (q == 0) {
                continue;
            }
            Pdfa part(t.alphabet(), t.states() + 1);
            const int fresh = t.states() + 1;
            for (int p = 1; p <= t.states(); ++p) {
                for (int y = 0; y < k; ++y) {
                    if (int r = t.next(p, y); r != 0) {
                        part.set_transition(p, y, r);
                    }
                }
                part.set_final(p, t.is_final(p));
            }
            part.set_transition(fresh, x, q);
            part.set_initial(fresh);
            parts.push_back(minimize(part));
        }
        if (t.is_final(t.initial())) {
            parts.push_back(word_language({Word{}}, t.alphabet()));
        }
    }
    if (parts.empty()) {
        parts.push_back(minimize(t));
    }
    Pdfa all = empty_pdfa(t.alphabet());
    for (const Pdfa& p : parts) {
        all = product(all, p, ProductMode::union_);
    }
    if (!equivalent(all, t)) {
        throw EngineError("union_split: parts do not cover the language");
    }
    return parts;
}

bool factor_equiv_rule(const Pdfa& b, const Pdfa& b2)
{
    if (b.alphabet() != b2.alphabet()) {
        return false;
    }
    return includes(fact_automaton(b2), b) && includes(fact_automaton(b), b2);
}

std::optional<Certificate> hom_image_rule(const Pdfa& b, const Homomorphism& phi, const Verdict& known)
{
    if (phi.source != b.alphabet()) {
        return std::nullopt;
    }
    const Certificate* best = nullptr;
    for (const auto& c : known.certificates) {
        if (c.lower && (!best || *c.lower > *best->lower)) {
            best = &c;
        }
    }
    if (!best || *best->lower == Lower::NoBound) {
        return std::nullopt;
    }
    Pdfa image = minimize(hom_image(b, phi));
    if (!replay(*best, image)) {
        return std::nullopt;
    }
    return Certificate{HomCert{phi, image, HomDirection::source_is_image, std::make_shared<const Certificate>(*best)},
                       best->lower, std::nullopt};
}

// --- three-state SCC consistency ---------------------------------------------

MetaCheck three_state_meta_check(const Pdfa& b, const Verdict& v)
{
    MetaCheck m;
    Pdfa t = trim(b);
    if (t.states() != 3 || t.alphabet().size() != 2 || t.finals().empty()) {
        return m;
    }
    m.applicable = true;
    m.scc_count = sccs(t).count();
    std::ostringstream why;
    if (m.scc_count == 1 && v.upper != Upper::P) {
        why << "strongly connected automaton without a P verdict";
    } else if (m.scc_count == 2 && v.lower == Lower::NPHard && v.upper == Upper::NP) {
        why << "two components but NP-complete";
    } else if (m.scc_count == 3 && v.lower == Lower::PSPACEHard) {
        why << "three components but PSPACE-hard";
    } else if (m.scc_count != 2 && v.lower == Lower::PSPACEHard) {
        why << "PSPACE-hard outside the two-component case";
    }
    m.message = why.str();
    m.consistent = m.message.empty();
    return m;
}

// --- replay ----------------------------------------------------------------

namespace {

bool claims_subset(const Certificate& outer, const Certificate& inner)
{
    if (outer.lower && (!inner.lower || *outer.lower > *inner.lower)) {
        return false;
    }
    if (outer.upper && (!inner.upper || *outer.upper < *inner.upper)) {
        return false;
    }
    return true;
}

struct Replayer {
    const Pdfa& subject;
    const Certificate& cert;

    bool only_upper(Upper u) const { return !cert.lower && cert.upper && *cert.upper >= u; }
    bool only_lower(Lower l) const { return cert.lower && !cert.upper && *cert.lower <= l; }

    bool operator()(const FiniteCert&) const { return only_upper(Upper::P) && is_finite(subject); }
    bool operator()(const ReturningCert&) const { return only_upper(Upper::P) && is_returning(minimize(subject)); }
    bool operator()(const StartEqualsFinalCert&) const
    {
        Pdfa t = minimize(subject);
        return only_upper(Upper::P) && t.finals() == std::vector<int>{t.initial()};
    }
    bool operator()(const PolycyclicCert&) const { return only_upper(Upper::NP) && is_polycyclic(minimize(subject)); }
    bool operator()(const UvwCert& c) const
    {
        return only_upper(Upper::P) && verify_uvw(c.u, c.v, c.w) && equivalent(concat(concat(c.u, c.v), c.w), subject);
    }
    bool operator()(const UnionCert& c) const
    {
        if (cert.lower || !cert.upper || c.parts.empty()) {
            return false;
        }
        Pdfa all = empty_pdfa(subject.alphabet());
        Upper worst = Upper::P;
        for (const auto& part : c.parts) {
            if (!part.certificate || !part.certificate->upper || !replay(*part.certificate, part.language)) {
                return false;
            }
            worst = std::max(worst, *part.certificate->upper);
            all = product(all, part.language, ProductMode::union_);
        }
        return *cert.upper >= worst && equivalent(all, subject);
    }
    bool operator()(const HomCert& c) const
    {
        if (!c.inner || !claims_subset(cert, *c.inner) || !replay(*c.inner, c.source)) {
            return false;
        }
        if (c.direction == HomDirection::image_of_source) {
            return !cert.lower && c.phi.source == c.source.alphabet() && c.phi.target == subject.alphabet() &&
                   equivalent(hom_image(c.source, c.phi), subject);
        }
        return !cert.upper && c.phi.source == subject.alphabet() && c.phi.target == c.source.alphabet() &&
               equivalent(hom_image(subject, c.phi), c.source);
    }
    bool operator()(const FactorEqCert& c) const
    {
        return c.inner && claims_subset(cert, *c.inner) && factor_equiv_rule(subject, c.other) &&
               replay(*c.inner, c.other);
    }
    bool operator()(const IdealRestrictionCert& c) const
    {
        if (!c.inner || cert.upper || !claims_subset(cert, *c.inner)) {
            return false;
        }
        if (c.factor) {
            if (!c.u.empty() || !(c.factor->alphabet() == subject.alphabet())) {
                return false;
            }
            return replay(*c.inner, restrict_to_factor_ideal(subject, *c.factor));
        }
        return !c.u.empty() && replay(*c.inner, restrict_to_ideal(subject, c.u));
    }
    bool operator()(const UcCert& c) const
    {
        return only_lower(Lower::PSPACEHard) && verify_uc(c.gamma, c.u, c.c, subject, c.variant);
    }
    bool operator()(const UvuCert& c) const
    {
        return only_lower(Lower::NPHard) && verify_uvU(c.u, c.v, c.big_u, subject);
    }
    bool operator()(const KnownLanguageCert& c) const
    {
        const KnownLanguage* k = find_known(c.id);
        if (!k || k->automaton.alphabet().size() != subject.alphabet().size() ||
            static_cast<int>(c.permutation.size()) != subject.alphabet().size()) {
            return false;
        }
        Certificate entry{FiniteCert{}, k->lower, k->upper};
        if (!claims_subset(cert, entry)) {
            return false;
        }
        Pdfa moved = relabel(k->automaton, c.permutation);
        Pdfa same(subject.alphabet(), moved.states());
        for (int p = 1; p <= moved.states(); ++p) {
            for (int x = 0; x < moved.alphabet().size(); ++x) {
                if (int q = moved.next(p, x); q != 0) {
                    same.set_transition(p, x, q);
                }
            }
            same.set_final(p, moved.is_final(p));
        }
        same.set_initial(moved.initial());
        return equivalent(same, subject);
    }
    bool operator()(const TwoStateFormulaCert& c) const
    {
        auto sets = two_state_sets(subject);
        if (!sets || sets->s11 != c.s11 || sets->s12 != c.s12 || sets->s21 != c.s21 || sets->s22 != c.s22) {
            sets = two_state_sets(minimize(subject));
        }
        if (!sets || sets->s11 != c.s11 || sets->s12 != c.s12 || sets->s21 != c.s21 || sets->s22 != c.s22) {
            return false;
        }
        if (formula_pspace(c.s11, c.s12, c.s21, c.s22)) {
            return only_lower(Lower::PSPACEHard);
        }
        return only_upper(Upper::P);
    }
    bool operator()(const AddPrefixLoopsCert& c) const
    {
        if (!c.inner || cert.upper || !claims_subset(cert, *c.inner) || c.gamma.empty()) {
            return false;
        }
        if (c.base.alphabet() != subject.alphabet()) {
            return false;
        }
        for (int x : c.gamma.elements()) {
            if (c.base.next(c.base.initial(), x) != 0) {
                return false;
            }
        }
        return equivalent(concat(letters_star(c.gamma, subject.alphabet()), c.base), subject) &&
               replay(*c.inner, c.base);
    }
};

}  // namespace

bool replay(const Certificate& c, const Pdfa& subject)
{
    if (!c.lower && !c.upper) {
        return false;
    }
    return std::visit(Replayer{subject, c}, c.body);
}

bool replay_all(const Verdict& v, const Pdfa& subject)
{
    for (const auto& c : v.certificates) {
        if (!replay(c, subject)) {
            return false;
        }
    }
    Verdict again = verdict_from(v.certificates);
    return again.lower == v.lower && again.upper == v.upper;
}

}  // namespace csync
