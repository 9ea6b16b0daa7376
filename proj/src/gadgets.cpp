#include "csync/gadgets.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "csync/errors.hpp"
#include "csync/rules.hpp"
#include "csync/text_format.hpp"

namespace csync {

namespace {

std::string words_text(const Alphabet& sigma, const std::vector<Word>& ws)
{
    std::string s = "{";
    for (std::size_t i = 0; i < ws.size(); ++i) {
        s += (i ? "," : "") + format_word(sigma, ws[i]);
    }
    return s + "}";
}

std::string letters_text(const Alphabet& sigma, LetterSet g)
{
    std::string s = "{";
    bool first = true;
    for (int x : g.elements()) {
        s += (first ? "" : ",") + sigma[x];
        first = false;
    }
    return s + "}";
}

void check_word(const Alphabet& sigma, const Word& w, const char* what)
{
    for (int x : w) {
        if (x < 0 || x >= sigma.size()) {
            throw InputError(std::string(what) + " uses a letter outside the alphabet");
        }
    }
}

void check_base_abc(const Dcsa& a)
{
    if (a.alphabet().size() != 3) {
        throw InputError("base automaton must have exactly three letters a, b, c");
    }
}

// Proper prefixes of a prefix-free set, ε first, indexed for state numbering.
struct PrefixTree {
    std::vector<Word> nodes;
    std::map<Word, int> index;
    std::set<Word> members;

    explicit PrefixTree(const std::vector<Word>& words) : members(words.begin(), words.end())
    {
        std::set<Word> inner;
        for (const Word& w : words) {
            for (std::size_t k = 0; k < w.size(); ++k) {
                inner.insert(Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k)));
            }
        }
        nodes.assign(inner.begin(), inner.end());
        std::sort(nodes.begin(), nodes.end(), radix_less);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            index[nodes[i]] = static_cast<int>(i);
        }
    }

    int size() const { return static_cast<int>(nodes.size()); }
    // Node reached by wz, or -1 when wz is a member or leaves the tree.
    int child(int w, int z) const
    {
        Word wz = nodes[static_cast<std::size_t>(w)];
        wz.push_back(z);
        auto it = index.find(wz);
        return it == index.end() ? -1 : it->second;
    }
    bool completes(int w, int z, const Word& target) const
    {
        Word wz = nodes[static_cast<std::size_t>(w)];
        wz.push_back(z);
        return wz == target;
    }
    bool completes_member(int w, int z) const
    {
        Word wz = nodes[static_cast<std::size_t>(w)];
        wz.push_back(z);
        return members.count(wz) > 0;
    }
};

std::vector<Word> sorted_code(const std::vector<Word>& c)
{
    std::vector<Word> out = c;
    std::sort(out.begin(), out.end(), radix_less);
    return out;
}

// KMP tracker for u over states 0..|u|-1; reaching |u| counts as an
// occurrence.
struct Tracker {
    Pdfa ideal;
    int m;
    int border;

    Tracker(const Word& u, const Alphabet& sigma) : ideal(ideal_automaton(u, sigma)), m(static_cast<int>(u.size()))
    {
        border = 0;
        for (int b = m - 1; b > 0; --b) {
            if (std::equal(u.begin(), u.begin() + b, u.end() - b)) {
                border = b;
                break;
            }
        }
    }
    int step(int r, int z) const { return ideal.next(r + 1, z) - 1; }
};

std::vector<int> image_of(const Dcsa& a, int x)
{
    std::vector<int> s;
    for (int q = 1; q <= a.states(); ++q) {
        s.push_back(a.next(q, x));
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

// Reading u from every state of the literal construction must end in S:
// at s′ right after a fallout, or at a state carried over from the
// tracking layer with no codeword applied since.
std::optional<std::string> literal_collapse_failure(const PrefixTree& tree, const Tracker& tr, const Word& u,
                                                    const Word& x, const Word& y)
{
    enum Tag { dirty, fresh, carrier };
    struct Abstract {
        bool tracking;
        int pos;
        Tag tag;
    };
    std::vector<Abstract> starts;
    for (int w = 0; w < tree.size(); ++w) {
        starts.push_back({false, w, dirty});
    }
    for (int r = 0; r < tr.m; ++r) {
        starts.push_back({true, r, carrier});
    }
    for (Abstract s : starts) {
        for (int z : u) {
            if (s.tracking) {
                int r = tr.step(s.pos, z);
                s = r == tr.m ? Abstract{false, 0, carrier} : Abstract{true, r, carrier};
                continue;
            }
            if (tree.completes(s.pos, z, x) || tree.completes(s.pos, z, y)) {
                s = {false, 0, dirty};
            } else if (tree.completes_member(s.pos, z)) {
                s.pos = 0;
            } else if (int n = tree.child(s.pos, z); n >= 0) {
                s.pos = n;
            } else {
                s = {false, 0, fresh};
            }
        }
        if (s.tracking || s.pos != 0 || s.tag == dirty) {
            return std::string("reading u does not collapse the prefix-tree layer onto s′");
        }
    }
    return std::nullopt;
}

}  // namespace

Pdfa gamma_u_c_language(const Alphabet& sigma, LetterSet gamma, const Word& u, const std::vector<Word>& c)
{
    return minimize(concat(concat(letters_star(gamma, sigma), word_language({u}, sigma)), star(word_language(c, sigma))));
}

Pdfa c_u_gamma_language(const Alphabet& sigma, LetterSet gamma, const Word& u, const std::vector<Word>& c)
{
    return minimize(concat(concat(star(word_language(c, sigma)), word_language({u}, sigma)), letters_star(gamma, sigma)));
}

GadgetOutput ideal_product(const Dcsa& a, const Word& u)
{
    return ideal_product(a, u, universal_pdfa(a.alphabet()));
}

GadgetOutput ideal_product(const Dcsa& a, const Word& u, const Pdfa& constraint)
{
    const Alphabet& sigma = a.alphabet();
    if (constraint.alphabet() != sigma) {
        throw InputError("ideal_product: constraint alphabet differs from the automaton alphabet");
    }
    if (u.empty()) {
        throw InputError("ideal_product: u must be non-empty");
    }
    check_word(sigma, u, "ideal_product: u");
    const Pdfa t = ideal_automaton(u, sigma);
    const int m = t.states();
    Dcsa out(sigma, a.states() * m);
    for (int q = 1; q <= a.states(); ++q) {
        for (int r = 1; r <= m; ++r) {
            for (int x = 0; x < sigma.size(); ++x) {
                out.set_transition((q - 1) * m + r, x, (a.next(q, x) - 1) * m + t.next(r, x));
            }
        }
    }
    return {out, minimize(constraint), restrict_to_ideal(constraint, u),
            "ideal product with the u-tracker, u = " + format_word(sigma, u)};
}

GadgetOutput hom_preimage_instance(const Dcsa& a, const Homomorphism& phi)
{
    return hom_preimage_instance(a, phi, universal_pdfa(phi.source));
}

GadgetOutput hom_preimage_instance(const Dcsa& a, const Homomorphism& phi, const Pdfa& constraint)
{
    if (phi.target != a.alphabet()) {
        throw InputError("hom_preimage_instance: homomorphism target differs from the automaton alphabet");
    }
    if (constraint.alphabet() != phi.source) {
        throw InputError("hom_preimage_instance: constraint alphabet differs from the homomorphism source");
    }
    if (static_cast<int>(phi.image.size()) != phi.source.size()) {
        throw InputError("hom_preimage_instance: homomorphism must give an image for every letter");
    }
    Dcsa out(phi.source, a.states());
    for (int q = 1; q <= a.states(); ++q) {
        for (int x = 0; x < phi.source.size(); ++x) {
            check_word(phi.target, phi.image[static_cast<std::size_t>(x)], "hom_preimage_instance: image");
            out.set_transition(q, x, run(a, q, phi.image[static_cast<std::size_t>(x)]));
        }
    }
    std::ostringstream prov;
    prov << "homomorphism preimage instance, φ:";
    for (int x = 0; x < phi.source.size(); ++x) {
        prov << ' ' << phi.source[x] << "->" << format_word(phi.target, phi.image[static_cast<std::size_t>(x)]);
    }
    return {out, minimize(constraint), minimize(hom_image(constraint, phi)), prov.str()};
}

int uc_gadget_state_count(const Dcsa& a, const Word& u, const std::vector<Word>& c, UcConstruction construction)
{
    const int tree = PrefixTree(c).size();
    const int s = static_cast<int>(image_of(a, 0).size());
    const int m = static_cast<int>(u.size());
    return construction == UcConstruction::literal ? a.states() * tree + s * m : a.states() * tree * m + s * m;
}

GadgetOutput uc_gadget(const Dcsa& a, const Alphabet& sigma, LetterSet gamma, const Word& u,
                       const std::vector<Word>& c_in, UcConstruction construction)
{
    check_base_abc(a);
    check_word(sigma, u, "uc_gadget: u");
    for (const Word& w : c_in) {
        check_word(sigma, w, "uc_gadget: C");
    }
    if (auto e = uc_hypothesis_failure(gamma, u, c_in, sigma, UcVariant::gamma_u_c)) {
        throw HypothesisError("uc_gadget: " + *e);
    }
    const std::vector<Word> c = sorted_code(c_in);
    const Word& x = c[0];
    const Word& y = c[1];
    const PrefixTree tree(c);
    const Tracker tr(u, sigma);
    if (construction == UcConstruction::literal) {
        if (auto e = literal_collapse_failure(tree, tr, u, x, y)) {
            throw HypothesisError("uc_gadget (literal): " + *e);
        }
    } else {
        std::vector<Word> letters;
        for (int z = 0; z < sigma.size(); ++z) {
            letters.push_back(Word{z});
        }
        Pdfa shifted = concat(word_language(letters, sigma), ideal_automaton(u, sigma));  // Σ⁺uΣ*
        Pdfa ucs = concat(word_language({u}, sigma), star(word_language(c, sigma)));
        if (!is_empty(product(ucs, shifted, ProductMode::intersection))) {
            throw HypothesisError("uc_gadget (tracked): u must occur exactly once in every word of uC*");
        }
    }

    const std::vector<int> s_set = image_of(a, 0);
    const int s_prime = s_set.front();
    const int nq = a.states();
    const int nt = tree.size();
    const int m = tr.m;
    const bool tracked = construction == UcConstruction::tracked;
    const int layer2 = tracked ? nq * nt * m : nq * nt;
    const int total = layer2 + static_cast<int>(s_set.size()) * m;

    // Prefix-tree layer: q at node w (tracker r in the tracked variant).
    auto l2 = [&](int q, int w, int r) { return tracked ? (r * nt + w) * nq + q : w * nq + q; };
    auto l1 = [&](int si, int r) { return layer2 + si * m + r + 1; };

    Dcsa out(sigma, total);
    // One step of the codeword simulation from q at node w.
    auto simulate = [&](int q, int w, int z, int r) {
        if (tree.completes(w, z, x)) {
            return l2(a.next(q, 1), 0, r);
        }
        if (tree.completes(w, z, y)) {
            return l2(a.next(q, 2), 0, r);
        }
        if (tree.completes_member(w, z)) {
            return l2(q, 0, r);
        }
        if (int n = tree.child(w, z); n >= 0) {
            return l2(q, n, r);
        }
        return l2(s_prime, 0, r);
    };
    for (int q = 1; q <= nq; ++q) {
        for (int w = 0; w < nt; ++w) {
            if (!tracked) {
                for (int z = 0; z < sigma.size(); ++z) {
                    out.set_transition(l2(q, w, 0), z, simulate(q, w, z, 0));
                }
                continue;
            }
            for (int r = 0; r < m; ++r) {
                for (int z = 0; z < sigma.size(); ++z) {
                    int r2 = tr.step(r, z);
                    int target = r2 == m ? l2(s_prime, 0, tr.border) : simulate(q, w, z, r2);
                    out.set_transition(l2(q, w, r), z, target);
                }
            }
        }
    }
    for (std::size_t si = 0; si < s_set.size(); ++si) {
        for (int r = 0; r < m; ++r) {
            for (int z = 0; z < sigma.size(); ++z) {
                int r2 = tr.step(r, z);
                int target = r2 < m ? l1(static_cast<int>(si), r2)
                                    : l2(s_set[si], 0, tracked ? tr.border : 0);
                out.set_transition(l1(static_cast<int>(si), r), z, target);
            }
        }
    }
    std::string prov = std::string("uC reduction from a(b+c)*, ") + (tracked ? "tracked" : "literal") +
                       " construction, Γ = " + letters_text(sigma, gamma) + ", u = " + format_word(sigma, u) +
                       ", C = " + words_text(sigma, c) + ", x = " + format_word(sigma, x) + " for b, y = " +
                       format_word(sigma, y) + " for c, s′ = " + std::to_string(s_prime);
    return {out, gamma_u_c_language(sigma, gamma, u, c), from_regex("a(b+c)*", Alphabet::standard(3)), prov};
}

int sink_entered_only_by_c(const Dcsa& a)
{
    if (a.alphabet().size() != 3) {
        return 0;
    }
    for (int s = 1; s <= a.states(); ++s) {
        bool sink = a.next(s, 0) == s && a.next(s, 1) == s && a.next(s, 2) == s;
        for (int q = 1; q <= a.states() && sink; ++q) {
            sink = q == s || (a.next(q, 0) != s && a.next(q, 1) != s);
        }
        if (sink) {
            return s;
        }
    }
    return 0;
}

GadgetOutput cstar_u_gadget(const Dcsa& a, const Alphabet& sigma, LetterSet gamma, const Word& u,
                            const std::vector<Word>& c_in, const Word& x)
{
    check_base_abc(a);
    check_word(sigma, u, "cstar_u_gadget: u");
    for (const Word& w : c_in) {
        check_word(sigma, w, "cstar_u_gadget: C");
    }
    if (auto e = uc_hypothesis_failure(gamma, u, c_in, sigma, UcVariant::c_u_gamma)) {
        throw HypothesisError("cstar_u_gadget: " + *e);
    }
    const std::vector<Word> c = sorted_code(c_in);
    if (std::find(c.begin(), c.end(), x) == c.end()) {
        throw HypothesisError("cstar_u_gadget: x must be an element of C");
    }
    if (!uc_closure_letter(c, u, x, sigma)) {
        throw HypothesisError("cstar_u_gadget: x violates the closure condition vxw ∈ (C ∪ {u})* ⇒ vx ∈ (C ∪ {u})*");
    }
    std::vector<Word> d = c;
    d.push_back(u);
    if (!is_prefix_free(d)) {
        throw HypothesisError("cstar_u_gadget: C ∪ {u} must be prefix-free");
    }
    const int s = sink_entered_only_by_c(a);
    if (s == 0) {
        throw HypothesisError("cstar_u_gadget: base automaton needs a sink entered from other states only by c");
    }
    const Word& y = *std::find_if(c.begin(), c.end(), [&](const Word& w) { return w != x; });
    const PrefixTree tree(d);

    // Γ-words read from a codeword boundary must stay in the prefix tree
    // and never complete u.
    std::set<int> seen{0};
    std::vector<int> todo{0};
    while (!todo.empty()) {
        int w = todo.back();
        todo.pop_back();
        for (int z : gamma.elements()) {
            int n = -1;
            if (tree.completes(w, z, u)) {
                throw HypothesisError("cstar_u_gadget: a word of Γ* completes u after a codeword boundary");
            }
            if (tree.completes_member(w, z)) {
                n = 0;
            } else {
                n = tree.child(w, z);
            }
            if (n < 0) {
                throw HypothesisError("cstar_u_gadget: a word of Γ* leaves Pref(C*) after a codeword boundary");
            }
            if (seen.insert(n).second) {
                todo.push_back(n);
            }
        }
    }

    std::vector<int> others;
    std::vector<int> rank(static_cast<std::size_t>(a.states()) + 1, -1);
    for (int q = 1; q <= a.states(); ++q) {
        if (q != s) {
            rank[static_cast<std::size_t>(q)] = static_cast<int>(others.size());
            others.push_back(q);
        }
    }
    const int nq = static_cast<int>(others.size());
    const int sink_state = nq * tree.size() + 1;
    auto at = [&](int q, int w) { return q == s ? sink_state : w * nq + rank[static_cast<std::size_t>(q)] + 1; };

    Dcsa out(sigma, sink_state);
    for (int q : others) {
        for (int w = 0; w < tree.size(); ++w) {
            for (int z = 0; z < sigma.size(); ++z) {
                int target;
                if (tree.completes(w, z, x)) {
                    target = at(a.next(q, 0), 0);
                } else if (tree.completes(w, z, y)) {
                    target = at(a.next(q, 1), 0);
                } else if (tree.completes(w, z, u)) {
                    target = at(a.next(q, 2), 0);
                } else if (tree.completes_member(w, z)) {
                    target = at(q, 0);
                } else if (int n = tree.child(w, z); n >= 0) {
                    target = at(q, n);
                } else {
                    target = sink_state;
                }
                out.set_transition(at(q, w), z, target);
            }
        }
    }
    std::string prov = "C*uΓ* reduction from (a+b)*c, Γ = " + letters_text(sigma, gamma) +
                       ", u = " + format_word(sigma, u) + ", C = " + words_text(sigma, c) + ", x = " +
                       format_word(sigma, x) + " for a, y = " + format_word(sigma, y) + " for b, sink " +
                       std::to_string(s) + " ↦ " + std::to_string(sink_state);
    return {out, c_u_gamma_language(sigma, gamma, u, c), from_regex("(a+b)*c", Alphabet::standard(3)), prov};
}

GadgetOutput add_loops_gadget(const Dcsa& a, LetterSet gamma)
{
    const Alphabet& sigma = a.alphabet();
    Pdfa l(sigma, 2);
    l.set_final(1);
    l.set_final(2);
    for (int x = 0; x < sigma.size(); ++x) {
        if (!gamma.contains(x)) {
            l.set_transition(1, x, 2);
        }
        l.set_transition(2, x, 2);
    }
    return add_loops_gadget(a, gamma, l);
}

GadgetOutput add_loops_gadget(const Dcsa& a, LetterSet gamma, const Pdfa& constraint)
{
    const Alphabet& sigma = a.alphabet();
    if (a.states() < 2) {
        throw InputError("add_loops_gadget: base automaton needs at least two states");
    }
    if (!gamma.subset_of(LetterSet::full(sigma.size()))) {
        throw InputError("add_loops_gadget: Γ uses a letter outside the alphabet");
    }
    if (constraint.alphabet() != sigma) {
        throw InputError("add_loops_gadget: constraint alphabet differs from the automaton alphabet");
    }
    const Pdfa l = minimize(constraint);
    for (int x : gamma.elements()) {
        if (l.states() > 0 && l.next(l.initial(), x) != 0) {
            throw HypothesisError("add_loops_gadget: the constraint's start state has an outgoing transition on " +
                                  sigma[x] + " ∈ Γ");
        }
    }
    const int n = a.states();
    Dcsa out(sigma, 2 * n);
    for (int q = 1; q <= n; ++q) {
        for (int x = 0; x < sigma.size(); ++x) {
            out.set_transition(q, x, a.next(q, x));
            out.set_transition(n + q, x, gamma.contains(x) ? n + q : a.next(q, x));
        }
    }
    return {out, minimize(concat(letters_star(gamma, sigma), l)), l,
            "start-state loops Γ = " + letters_text(sigma, gamma) + ", copy of state q is q + " + std::to_string(n)};
}

}  // namespace csync
