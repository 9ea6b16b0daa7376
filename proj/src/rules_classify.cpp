// The classification pipeline: P rules, NP upper bound, hardness search.

#include <algorithm>
#include <map>
#include <set>

#include "csync/errors.hpp"
#include "csync/rules.hpp"

namespace csync {

namespace {

CertRef share(const Certificate& c)
{
    return std::make_shared<const Certificate>(c);
}

Certificate wrap_factor(const Pdfa& other, const Certificate& inner)
{
    return Certificate{FactorEqCert{other, share(inner)}, inner.lower, inner.upper};
}

// Automata with the same complexity: the start state moved inside its
// strongly connected component and/or the final set replaced by a state
// that every final state reaches. Small automata also try every other
// choice of start and final state, kept when factor equivalence holds.
std::vector<Pdfa> factor_variants(const Pdfa& t)
{
    std::vector<Pdfa> out;
    if (t.finals().empty()) {
        return out;
    }
    const auto d = sccs(t);
    const auto finals = t.finals();
    std::vector<int> sinks;
    for (int p = 1; p <= t.states(); ++p) {
        auto co = coaccessible_states(with_finals(t, {p}));
        if (std::all_of(finals.begin(), finals.end(), [&](int f) { return co[f]; })) {
            sinks.push_back(p);
        }
    }
    std::set<std::string> seen{canonical_key(t)};
    for (int q : d.members[d.component[t.initial() - 1]]) {
        for (int p : sinks) {
            Pdfa v = minimize(with_finals(with_initial(t, q), {p}));
            if (seen.insert(canonical_key(v)).second) {
                out.push_back(v);
            }
        }
    }
    if (t.states() <= 4) {
        for (int q = 1; q <= t.states(); ++q) {
            std::vector<Pdfa> choices{minimize(with_initial(t, q))};
            for (int p = 1; p <= t.states(); ++p) {
                choices.push_back(minimize(with_finals(with_initial(t, q), {p})));
            }
            for (Pdfa& v : choices) {
                if (!is_empty(v) && seen.insert(canonical_key(v)).second && factor_equiv_rule(t, v)) {
                    out.push_back(std::move(v));
                }
            }
        }
    }
    return out;
}

// Removes a state q that is neither initial nor final and has no
// self-loop: every path p -x-> q -y-> r becomes p -<xy>-> r with a fresh
// letter <xy>, and φ(<xy>) = xy, so that φ(L(source)) = L(t).
std::vector<std::pair<Homomorphism, Pdfa>> contractions(const Pdfa& t)
{
    std::vector<std::pair<Homomorphism, Pdfa>> out;
    const Alphabet& sigma = t.alphabet();
    const int k = sigma.size();
    if (!sigma.single_char_tokens()) {
        return out;
    }
    for (int q = 1; q <= t.states(); ++q) {
        if (q == t.initial() || t.is_final(q)) {
            continue;
        }
        bool loop = false;
        for (int x = 0; x < k; ++x) {
            loop = loop || t.next(q, x) == q;
        }
        if (loop) {
            continue;
        }
        std::vector<std::string> letters = sigma.letters();
        std::vector<Word> images;
        for (int x = 0; x < k; ++x) {
            images.push_back(Word{x});
        }
        std::map<Word, int> fresh;
        for (int p = 1; p <= t.states(); ++p) {
            for (int x = 0; x < k; ++x) {
                if (t.next(p, x) != q) {
                    continue;
                }
                for (int y = 0; y < k; ++y) {
                    if (t.next(q, y) != 0 && !fresh.count(Word{x, y})) {
                        fresh[Word{x, y}] = static_cast<int>(letters.size());
                        letters.push_back("<" + sigma[x] + sigma[y] + ">");
                        images.push_back(Word{x, y});
                    }
                }
            }
        }
        Alphabet delta(letters);
        std::vector<int> rename(static_cast<std::size_t>(t.states()) + 1, 0);
        for (int p = 1, n = 0; p <= t.states(); ++p) {
            if (p != q) {
                rename[p] = ++n;
            }
        }
        Pdfa s(delta, t.states() - 1);
        for (int p = 1; p <= t.states(); ++p) {
            if (p == q) {
                continue;
            }
            for (int x = 0; x < k; ++x) {
                int r = t.next(p, x);
                if (r == 0) {
                    continue;
                }
                if (r != q) {
                    s.set_transition(rename[p], x, rename[r]);
                    continue;
                }
                for (int y = 0; y < k; ++y) {
                    if (int r2 = t.next(q, y); r2 != 0) {
                        s.set_transition(rename[p], fresh.at(Word{x, y}), rename[r2]);
                    }
                }
            }
            s.set_final(rename[p], t.is_final(p));
        }
        s.set_initial(rename[t.initial()]);
        out.emplace_back(Homomorphism{delta, sigma, images}, minimize(s));
    }
    return out;
}

std::vector<Word> words_to(const Pdfa& t, int f, int max_len)
{
    std::vector<Word> out;
    Pdfa target = with_finals(t, {f});
    for (const Word& w : words_up_to(t.alphabet().size(), max_len)) {
        if (!w.empty() && accepts(target, w)) {
            out.push_back(w);
        }
    }
    return out;
}

std::vector<LetterSet> subsets_desc(LetterSet s)
{
    std::vector<LetterSet> out;
    for (std::uint32_t m = s.bits();; m = (m - 1) & s.bits()) {
        out.push_back(LetterSet(m));
        if (m == 0) {
            break;
        }
    }
    return out;
}

bool finite_code(const FirstReturns& fr, int max_len)
{
    if (fr.infinite || fr.words.size() < 2) {
        return false;
    }
    return std::all_of(fr.words.begin(), fr.words.end(),
                       [&](const Word& w) { return static_cast<int>(w.size()) <= max_len; });
}

// Finite prefix codes read off first returns, used as candidates for C.
std::vector<std::vector<Word>> codes_of(const Pdfa& t, int max_len)
{
    std::vector<std::vector<Word>> out;
    for (int p = 1; p <= t.states(); ++p) {
        FirstReturns fr = first_return_words(t, p);
        if (finite_code(fr, max_len) && std::find(out.begin(), out.end(), fr.words) == out.end()) {
            out.push_back(fr.words);
        }
    }
    return out;
}

// t = Γ*uC* or t = C*uΓ*, parameters read off the automaton. For C*uΓ*
// the code may also come from `extra` (codes of a language that t was
// restricted from).
std::optional<Certificate> uc_direct(const Pdfa& t, const ClassifyConfig& cfg,
                                     const std::vector<std::vector<Word>>& extra)
{
    const Alphabet& sigma = t.alphabet();
    for (int f : t.finals()) {
        FirstReturns fr = first_return_words(t, f);
        if (!finite_code(fr, cfg.max_c_len)) {
            continue;
        }
        Pdfa cstar = star(word_language(fr.words, sigma));
        if (!equivalent(with_initial(t, f), cstar)) {
            continue;
        }
        Pdfa cfact = fact_automaton(cstar);
        for (const Word& u : words_to(t, f, cfg.max_u_len)) {
            if (accepts(cfact, u)) {
                continue;
            }
            LetterSet gmax;
            for (int x = 0; x < sigma.size(); ++x) {
                Word xu{x};
                xu.insert(xu.end(), u.begin(), u.end());
                if (accepts(t, xu)) {
                    gmax.insert(x);
                }
            }
            for (LetterSet g : subsets_desc(gmax)) {
                if (verify_uc(g, u, fr.words, t, UcVariant::gamma_u_c)) {
                    return Certificate{UcCert{g, u, fr.words, UcVariant::gamma_u_c}, Lower::PSPACEHard, std::nullopt};
                }
            }
        }
    }
    std::vector<std::vector<Word>> codes = codes_of(t, cfg.max_c_len);
    for (const auto& c : extra) {
        if (std::find(codes.begin(), codes.end(), c) == codes.end()) {
            codes.push_back(c);
        }
    }
    for (int f : t.finals()) {
        if (f == t.initial()) {
            continue;
        }
        LetterSet g;
        for (int x = 0; x < sigma.size(); ++x) {
            if (t.next(f, x) == f) {
                g.insert(x);
            }
        }
        if (!equivalent(with_initial(t, f), letters_star(g, sigma))) {
            continue;
        }
        for (const Word& u : words_to(t, f, cfg.max_u_len)) {
            for (const auto& c : codes) {
                Word cu = c.front();
                cu.insert(cu.end(), u.begin(), u.end());
                if (accepts(t, cu) && verify_uc(g, u, c, t, UcVariant::c_u_gamma)) {
                    return Certificate{UcCert{g, u, c, UcVariant::c_u_gamma}, Lower::PSPACEHard, std::nullopt};
                }
            }
        }
    }
    return std::nullopt;
}

// t = u·v*·U with v the unique first return at the state reached by u.
std::optional<Certificate> uvu_direct(const Pdfa& t, const ClassifyConfig& cfg)
{
    const Alphabet& sigma = t.alphabet();
    for (const Word& u : words_up_to(sigma.size(), cfg.max_u_len)) {
        if (u.empty()) {
            continue;
        }
        auto q = run(t, t.initial(), u);
        if (!q || *q == 0) {
            continue;
        }
        FirstReturns fr = first_return_words(t, *q);
        if (fr.infinite || fr.words.size() != 1 || static_cast<int>(fr.words[0].size()) > cfg.max_c_len) {
            continue;
        }
        const Word& v = fr.words[0];
        Pdfa v_any = concat(word_language({v}, sigma), universal_pdfa(sigma));
        Pdfa big_u = minimize(product(with_initial(t, *q), v_any, ProductMode::difference));
        if (is_empty(big_u)) {
            continue;
        }
        if (verify_uvU(u, v, big_u, t)) {
            return Certificate{UvuCert{u, v, big_u}, Lower::NPHard, std::nullopt};
        }
    }
    return std::nullopt;
}

struct SearchRules {
    bool kb = true;
    bool uc = true;
    bool uvu = true;
    bool add_loops = true;
};

class Engine {
public:
    explicit Engine(const ClassifyConfig& cfg) : cfg_(cfg) {}

    Verdict run(const Pdfa& b);

    // Hardness search on L(t); `want` is the bound being looked for.
    std::optional<Certificate> hard_search(const Pdfa& t, Lower want, const SearchRules& rules, int depth);

private:
    std::optional<Certificate> p_direct(const Pdfa& t);
    std::optional<Certificate> p_search(const Pdfa& t, int depth);
    std::optional<Certificate> hard_direct(const Pdfa& t, Lower want, const SearchRules& rules);
    std::optional<Certificate> hard_with_variants(const Pdfa& t, Lower want, const SearchRules& rules);

    const ClassifyConfig& cfg_;
    std::vector<std::vector<Word>> extra_codes_;
    std::map<std::pair<std::string, int>, std::optional<Certificate>> p_memo_;
    std::map<std::pair<std::string, int>, std::optional<Certificate>> hard_memo_;
};

std::optional<Certificate> Engine::p_direct(const Pdfa& t)
{
    if (is_finite(t)) {
        return Certificate{FiniteCert{}, std::nullopt, Upper::P};
    }
    if (t.finals() == std::vector<int>{t.initial()}) {
        return Certificate{StartEqualsFinalCert{}, std::nullopt, Upper::P};
    }
    if (is_returning(t)) {
        return Certificate{ReturningCert{}, std::nullopt, Upper::P};
    }
    Normalized n = normalize_final_states(t);
    if (n.automaton.states() == 2 && n.automaton.finals() == std::vector<int>{2}) {
        Verdict v = two_state_classify(t);
        if (v.upper == Upper::P) {
            return v.certificates.front();
        }
    }
    for (int p = 1; p <= t.states(); ++p) {
        Pdfa u = minimize(with_finals(t, {p}));
        Pdfa v = minimize(with_initial(with_finals(t, {p}), p));
        Pdfa w = minimize(with_initial(t, p));
        if (verify_uvw(u, v, w) && equivalent(concat(concat(u, v), w), t)) {
            return Certificate{UvwCert{u, v, w}, std::nullopt, Upper::P};
        }
    }
    return std::nullopt;
}

std::optional<Certificate> Engine::p_search(const Pdfa& t, int depth)
{
    auto key = std::make_pair(canonical_key(t), depth);
    if (auto it = p_memo_.find(key); it != p_memo_.end()) {
        return it->second;
    }
    std::optional<Certificate> found = p_direct(t);
    if (!found && depth > 0) {
        for (const Pdfa& v : factor_variants(t)) {
            if (auto c = p_direct(v)) {
                found = wrap_factor(v, *c);
                break;
            }
        }
    }
    if (!found && depth > 0) {
        for (const auto& [phi, source] : contractions(t)) {
            if (auto c = p_search(source, depth - 1)) {
                found = Certificate{HomCert{phi, source, HomDirection::image_of_source, share(*c)}, std::nullopt,
                                    Upper::P};
                break;
            }
        }
    }
    if (!found && depth > 0) {
        std::vector<Pdfa> parts = union_split(t);
        if (parts.size() > 1) {
            UnionCert u;
            for (const Pdfa& part : parts) {
                auto c = p_search(part, depth - 1);
                if (!c) {
                    u.parts.clear();
                    break;
                }
                u.parts.push_back({part, share(*c)});
            }
            if (!u.parts.empty()) {
                found = Certificate{u, std::nullopt, Upper::P};
            }
        }
    }
    p_memo_[key] = found;
    return found;
}

std::optional<Certificate> Engine::hard_direct(const Pdfa& t, Lower want, const SearchRules& rules)
{
    if (rules.kb && cfg_.use_knowledge_base) {
        if (auto c = knowledge_base_lookup(t); c && c->lower && *c->lower >= want) {
            Certificate lower_only = *c;
            lower_only.upper.reset();
            return lower_only;
        }
    }
    if (want == Lower::PSPACEHard) {
        Normalized n = normalize_final_states(t);
        if (rules.kb && n.automaton.states() == 2 && n.automaton.finals() == std::vector<int>{2}) {
            Verdict v = two_state_classify(t);
            if (v.lower == Lower::PSPACEHard) {
                return v.certificates.front();
            }
        }
        if (rules.uc && !is_polycyclic(t)) {
            return uc_direct(t, cfg_, extra_codes_);
        }
        return std::nullopt;
    }
    if (rules.uvu) {
        return uvu_direct(t, cfg_);
    }
    return std::nullopt;
}

std::optional<Certificate> Engine::hard_with_variants(const Pdfa& t, Lower want, const SearchRules& rules)
{
    if (auto c = hard_direct(t, want, rules)) {
        return c;
    }
    for (const Pdfa& v : factor_variants(t)) {
        if (auto c = hard_direct(v, want, rules)) {
            return wrap_factor(v, *c);
        }
    }
    return std::nullopt;
}

std::optional<Certificate> Engine::hard_search(const Pdfa& t, Lower want, const SearchRules& rules, int depth)
{
    auto key = std::make_pair(canonical_key(t) + (want == Lower::PSPACEHard ? "/S" : "/N"), depth);
    if (auto it = hard_memo_.find(key); it != hard_memo_.end()) {
        return it->second;
    }
    std::optional<Certificate> found = hard_with_variants(t, want, rules);
    if (!found) {
        std::set<std::string> seen{canonical_key(t)};
        for (const Word& u : words_up_to(t.alphabet().size(), cfg_.max_u_len)) {
            if (u.empty()) {
                continue;
            }
            Pdfa r = minimize(restrict_to_ideal(t, u));
            if (is_empty(r) || !seen.insert(canonical_key(r)).second) {
                continue;
            }
            if (auto c = hard_with_variants(r, want, rules)) {
                found = Certificate{IdealRestrictionCert{u, share(*c), std::nullopt}, c->lower, std::nullopt};
                break;
            }
        }
        // Ideals generated by x·y⁺·z.
        const Alphabet& sigma = t.alphabet();
        const std::vector<Word> ends = words_up_to(sigma.size(), 1);
        for (std::size_t i = 0; i < ends.size() && !found; ++i) {
            for (int y = 0; y < sigma.size() && !found; ++y) {
                for (std::size_t j = 0; j < ends.size() && !found; ++j) {
                    Pdfa ys = word_language({Word{y}}, sigma);
                    Pdfa gen = minimize(concat(concat(word_language({ends[i]}, sigma), concat(ys, star(ys))),
                                               word_language({ends[j]}, sigma)));
                    Pdfa r = restrict_to_factor_ideal(t, gen);
                    if (is_empty(r) || !seen.insert(canonical_key(r)).second) {
                        continue;
                    }
                    if (auto c = hard_with_variants(r, want, rules)) {
                        found = Certificate{IdealRestrictionCert{Word{}, share(*c), gen}, c->lower, std::nullopt};
                    }
                }
            }
        }
    }
    if (!found && rules.add_loops && depth > 0) {
        // Γ loops at a start state that has no other incoming transitions.
        LetterSet gamma;
        bool entered = false;
        for (int p = 1; p <= t.states(); ++p) {
            for (int x = 0; x < t.alphabet().size(); ++x) {
                if (t.next(p, x) == t.initial()) {
                    if (p == t.initial()) {
                        gamma.insert(x);
                    } else {
                        entered = true;
                    }
                }
            }
        }
        if (!gamma.empty() && !entered) {
            Pdfa base = t;
            for (int x : gamma.elements()) {
                base.clear_transition(t.initial(), x);
            }
            base = minimize(base);
            if (!is_empty(base)) {
                if (auto c = hard_search(base, want, rules, depth - 1)) {
                    found = Certificate{AddPrefixLoopsCert{gamma, base, share(*c)}, c->lower, std::nullopt};
                }
            }
        }
    }
    hard_memo_[key] = found;
    return found;
}

Verdict Engine::run(const Pdfa& b)
{
    // Work on the minimal automaton so that the verdict depends only on
    // the language.
    Pdfa t = minimize(b);
    if (t.finals().empty()) {
        return verdict_from({Certificate{FiniteCert{}, std::nullopt, Upper::P}});
    }
    Normalized n = normalize_final_states(t);
    if (n.start_is_unique_final) {
        return verdict_from({Certificate{StartEqualsFinalCert{}, std::nullopt, Upper::P}});
    }
    const Pdfa m = minimize(t);
    const Pdfa w = n.changed ? minimize(n.automaton) : m;
    auto lift = [&](const Certificate& c) { return n.changed ? wrap_factor(w, c) : c; };

    if (auto c = p_direct(m)) {
        return verdict_from({*c});
    }
    // The two-state formula decides both sides at once.
    if (w.states() == 2 && w.finals().size() == 1 && w.finals()[0] != w.initial()) {
        Verdict v = two_state_classify(w);
        return verdict_from({lift(v.certificates.front())});
    }
    if (auto c = p_search(w, cfg_.max_depth)) {
        return verdict_from({lift(*c)});
    }
    if (w != m) {
        if (auto c = p_search(m, cfg_.max_depth)) {
            return verdict_from({*c});
        }
    }

    std::vector<Certificate> certs;
    const bool bounded = is_polycyclic(m);
    if (bounded) {
        certs.push_back(Certificate{PolycyclicCert{}, std::nullopt, Upper::NP});
    }
    const Lower want = bounded ? Lower::NPHard : Lower::PSPACEHard;
    extra_codes_ = codes_of(w, cfg_.max_c_len);
    for (auto& c : codes_of(m, cfg_.max_c_len)) {
        if (std::find(extra_codes_.begin(), extra_codes_.end(), c) == extra_codes_.end()) {
            extra_codes_.push_back(std::move(c));
        }
    }
    SearchRules rules;
    if (auto c = hard_search(w, want, rules, cfg_.max_depth)) {
        certs.push_back(lift(*c));
    } else if (w != m) {
        if (auto c2 = hard_search(m, want, rules, cfg_.max_depth)) {
            certs.push_back(*c2);
        }
    }
    return verdict_from(std::move(certs));
}

}  // namespace

Verdict classify(const Pdfa& b, const ClassifyConfig& cfg)
{
    return Engine(cfg).run(b);
}

std::optional<Certificate> find_uc_pattern(const Pdfa& b, const ClassifyConfig& cfg)
{
    Pdfa t = minimize(b);
    if (t.finals().empty()) {
        return std::nullopt;
    }
    SearchRules rules{false, true, false, false};
    return Engine(cfg).hard_search(t, Lower::PSPACEHard, rules, 0);
}

std::optional<Certificate> find_uvU_pattern(const Pdfa& b, const ClassifyConfig& cfg)
{
    Pdfa t = minimize(b);
    if (t.finals().empty()) {
        return std::nullopt;
    }
    SearchRules rules{false, false, true, false};
    return Engine(cfg).hard_search(t, Lower::NPHard, rules, 0);
}

}  // namespace csync
