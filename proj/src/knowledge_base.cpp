// Seeded languages with known complexity, matched up to letter renaming.

#include <utility>

#include "csync/rules.hpp"
#include "csync/text_format.hpp"

namespace csync {

namespace {

using Edge = std::tuple<int, char, int>;

Pdfa explicit_automaton(int states, std::vector<Edge> edges, std::vector<int> finals)
{
    Pdfa b(Alphabet::standard(2), states);
    for (auto [p, x, q] : edges) {
        b.set_transition(p, x - 'a', q);
    }
    for (int f : finals) {
        b.set_final(f);
    }
    return minimize(b);
}

std::vector<KnownLanguage> build()
{
    std::vector<KnownLanguage> kb;
    const Alphabet ternary = Alphabet::standard(3);
    const Alphabet binary = Alphabet::standard(2);
    const std::vector<std::string> pspace3 = {
        "a(b+c)*",      "(a+b+c)(a+b)*",  "(a+b)(a+c)*",      "(a+b)*c",
        "(a+b)*ca*",    "(a+b)*c(a+b)*",  "(a+b)*cc*",        "a*b(a+c)*",
        "a*(b+c)(a+b)*", "a*b(b+c)*",     "(a+b)*c(b+c)*",    "a*(b+c)(b+c)*",
    };
    for (std::size_t i = 0; i < pspace3.size(); ++i) {
        kb.push_back({"ternary-" + std::to_string(i + 1), pspace3[i], from_regex(pspace3[i], ternary),
                      Lower::PSPACEHard, Upper::PSPACE});
    }

    kb.push_back({"B1", "a(a+b)(bb+ba)*", explicit_automaton(3, {{1, 'a', 2}, {2, 'a', 3}, {2, 'b', 3}, {3, 'b', 2}}, {3}),
                  Lower::PSPACEHard, Upper::PSPACE});
    kb.push_back({"B2", "aa*b(ba*b)* + b(ba*b)*",
                  explicit_automaton(3, {{1, 'a', 2}, {2, 'a', 2}, {2, 'b', 3}, {3, 'b', 2}, {1, 'b', 3}}, {3}),
                  std::nullopt, Upper::P});
    kb.push_back({"B3", "b*aa*b(aa*b)*",
                  explicit_automaton(3, {{1, 'b', 1}, {1, 'a', 2}, {2, 'a', 2}, {2, 'b', 3}, {3, 'a', 2}}, {3}),
                  Lower::PSPACEHard, Upper::PSPACE});
    kb.push_back({"B4", "ab*a(bb*a)* + b(bb*a)*",
                  explicit_automaton(3, {{1, 'b', 3}, {1, 'a', 2}, {2, 'b', 2}, {2, 'a', 3}, {3, 'b', 2}}, {3}),
                  Lower::PSPACEHard, Upper::PSPACE});
    kb.push_back({"B5", "ab*a(b*ab*a)*",
                  explicit_automaton(3, {{1, 'a', 2}, {2, 'b', 2}, {2, 'a', 3}, {3, 'a', 2}, {3, 'b', 3}}, {3}),
                  std::nullopt, Upper::P});
    kb.push_back({"B6", "ab*aa* + ba*",
                  explicit_automaton(3, {{1, 'a', 2}, {2, 'b', 2}, {2, 'a', 3}, {3, 'a', 3}, {1, 'b', 3}}, {3}),
                  Lower::NPHard, Upper::NP});

    for (const char* re : {"ba^+ba*", "b^+a^+b", "b^+a^+ba*", "b^+a^+bb*"}) {
        kb.push_back({std::string("np-") + re, re, from_regex(re, binary), Lower::NPHard, std::nullopt});
    }
    return kb;
}

}  // namespace

const std::vector<KnownLanguage>& knowledge_base()
{
    static const std::vector<KnownLanguage> kb = build();
    return kb;
}

const KnownLanguage* find_known(const std::string& id)
{
    for (const auto& k : knowledge_base()) {
        if (k.id == id) {
            return &k;
        }
    }
    return nullptr;
}

std::vector<std::string> ternary_pspace_ids()
{
    std::vector<std::string> ids;
    for (int i = 1; i <= 12; ++i) {
        ids.push_back("ternary-" + std::to_string(i));
    }
    return ids;
}

std::optional<Certificate> knowledge_base_lookup(const Pdfa& b)
{
    const Pdfa m = minimize(b);
    for (const auto& k : knowledge_base()) {
        if (k.automaton.alphabet().size() != m.alphabet().size() || k.automaton.states() != m.states()) {
            continue;
        }
        if (auto perm = equal_up_to_letter_renaming(k.automaton, m)) {
            return Certificate{KnownLanguageCert{k.id, *perm}, k.lower, k.upper};
        }
    }
    return std::nullopt;
}

}  // namespace csync
