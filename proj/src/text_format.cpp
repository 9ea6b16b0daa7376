#include "csync/text_format.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "csync/errors.hpp"
#include "nfa.hpp"

namespace csync {

namespace {

struct RawAutomaton {
    std::optional<Alphabet> alphabet;
    int states = 0;
    std::optional<int> initial;
    bool has_final_line = false;
    std::vector<int> finals;
    struct Trans {
        int line, p;
        std::string letter;
        int q;
    };
    std::vector<Trans> trans;
};

[[noreturn]] void fail(int line, const std::string& why)
{
    throw InputError("line " + std::to_string(line) + ": " + why);
}

int parse_state(int line, const std::string& tok)
{
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) {
            fail(line, "expected a state number, got '" + tok + "'");
        }
        return v;
    } catch (const std::logic_error&) {
        fail(line, "expected a state number, got '" + tok + "'");
    }
}

RawAutomaton parse_raw(std::string_view text)
{
    RawAutomaton raw;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) {
            tok.push_back(t);
        }
        if (tok.empty()) {
            continue;
        }
        const std::string& kw = tok[0];
        if (kw == "alphabet") {
            if (raw.alphabet) {
                fail(lineno, "duplicate alphabet line");
            }
            if (tok.size() < 2) {
                fail(lineno, "alphabet needs at least one letter");
            }
            try {
                raw.alphabet = Alphabet(std::vector<std::string>(tok.begin() + 1, tok.end()));
            } catch (const InputError& e) {
                fail(lineno, e.what());
            }
        } else if (kw == "states") {
            if (tok.size() != 2) {
                fail(lineno, "states expects one number");
            }
            if (raw.states != 0) {
                fail(lineno, "duplicate states line");
            }
            raw.states = parse_state(lineno, tok[1]);
            if (raw.states < 1) {
                fail(lineno, "state count must be positive");
            }
        } else if (kw == "initial") {
            if (tok.size() != 2) {
                fail(lineno, "initial expects one state");
            }
            if (raw.initial) {
                fail(lineno, "duplicate initial line");
            }
            raw.initial = parse_state(lineno, tok[1]);
        } else if (kw == "final") {
            raw.has_final_line = true;
            for (std::size_t i = 1; i < tok.size(); ++i) {
                raw.finals.push_back(parse_state(lineno, tok[i]));
            }
        } else if (kw == "trans") {
            if (tok.size() != 4) {
                fail(lineno, "trans expects: trans <state> <letter> <state>");
            }
            raw.trans.push_back({lineno, parse_state(lineno, tok[1]), tok[2], parse_state(lineno, tok[3])});
        } else {
            fail(lineno, "unknown keyword '" + kw + "'");
        }
    }
    if (!raw.alphabet) {
        fail(lineno, "missing alphabet line");
    }
    if (raw.states == 0) {
        fail(lineno, "missing states line");
    }
    return raw;
}

Pdfa build(const RawAutomaton& raw)
{
    Pdfa b(*raw.alphabet, raw.states);
    auto check = [&](int line, int s) {
        if (s < 1 || s > raw.states) {
            fail(line, "state " + std::to_string(s) + " out of range 1.." + std::to_string(raw.states));
        }
    };
    for (const auto& t : raw.trans) {
        check(t.line, t.p);
        check(t.line, t.q);
        int x = raw.alphabet->index_of(t.letter);
        if (x < 0) {
            fail(t.line, "letter '" + t.letter + "' not in alphabet");
        }
        if (b.next(t.p, x) != 0 && b.next(t.p, x) != t.q) {
            fail(t.line, "nondeterministic transition from state " + std::to_string(t.p) + " on '" + t.letter + "'");
        }
        b.set_transition(t.p, x, t.q);
    }
    return b;
}

}  // namespace

Pdfa parse_pdfa(std::string_view text)
{
    RawAutomaton raw = parse_raw(text);
    Pdfa b = build(raw);
    if (!raw.initial) {
        throw InputError("constraint automaton requires an 'initial' line");
    }
    if (*raw.initial < 1 || *raw.initial > raw.states) {
        throw InputError("initial state out of range");
    }
    b.set_initial(*raw.initial);
    for (int f : raw.finals) {
        if (f < 1 || f > raw.states) {
            throw InputError("final state " + std::to_string(f) + " out of range");
        }
        b.set_final(f);
    }
    return b;
}

Dcsa parse_dcsa(std::string_view text)
{
    RawAutomaton raw = parse_raw(text);
    if (raw.initial || raw.has_final_line) {
        throw InputError("input semi-automaton must not have 'initial' or 'final' lines");
    }
    return Dcsa::from_complete(build(raw));
}

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename Parse>
auto load_with(const std::string& path, Parse parse)
{
    std::string text = read_file(path);
    try {
        return parse(text);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_header(std::ostringstream& out, std::string_view header)
{
    std::istringstream in{std::string(header)};
    for (std::string line; std::getline(in, line);) {
        out << "# " << line << '\n';
    }
}

}  // namespace

Pdfa load_pdfa(const std::string& path)
{
    return load_with(path, [](const std::string& t) { return parse_pdfa(t); });
}

Dcsa load_dcsa(const std::string& path)
{
    return load_with(path, [](const std::string& t) { return parse_dcsa(t); });
}

std::string to_text(const Pdfa& b, std::string_view header)
{
    std::ostringstream out;
    write_header(out, header);
    out << "alphabet";
    for (const auto& l : b.alphabet().letters()) {
        out << ' ' << l;
    }
    out << "\nstates " << b.states() << "\ninitial " << b.initial() << '\n';
    auto finals = b.finals();
    if (!finals.empty()) {
        out << "final";
        for (int f : finals) {
            out << ' ' << f;
        }
        out << '\n';
    }
    for (int p = 1; p <= b.states(); ++p) {
        for (int x = 0; x < b.alphabet().size(); ++x) {
            if (int q = b.next(p, x); q != 0) {
                out << "trans " << p << ' ' << b.alphabet()[x] << ' ' << q << '\n';
            }
        }
    }
    return out.str();
}

std::string to_text(const Dcsa& a, std::string_view header)
{
    std::ostringstream out;
    write_header(out, header);
    out << "alphabet";
    for (const auto& l : a.alphabet().letters()) {
        out << ' ' << l;
    }
    out << "\nstates " << a.states() << '\n';
    for (int q = 1; q <= a.states(); ++q) {
        for (int x = 0; x < a.alphabet().size(); ++x) {
            out << "trans " << q << ' ' << a.alphabet()[x] << ' ' << a.next(q, x) << '\n';
        }
    }
    return out.str();
}

std::string to_dot(const Pdfa& b)
{
    std::ostringstream out;
    out << "digraph pdfa {\n  rankdir=LR;\n  start [shape=point];\n";
    for (int p = 1; p <= b.states(); ++p) {
        out << "  " << p << " [shape=" << (b.is_final(p) ? "doublecircle" : "circle") << "];\n";
    }
    out << "  start -> " << b.initial() << ";\n";
    for (int p = 1; p <= b.states(); ++p) {
        for (int q = 1; q <= b.states(); ++q) {
            std::string label;
            for (int x = 0; x < b.alphabet().size(); ++x) {
                if (b.next(p, x) == q) {
                    label += (label.empty() ? "" : ",") + b.alphabet()[x];
                }
            }
            if (!label.empty()) {
                out << "  " << p << " -> " << q << " [label=\"" << label << "\"];\n";
            }
        }
    }
    out << "}\n";
    return out.str();
}

// --- regular expressions ---------------------------------------------------

namespace {

// Thompson-style construction of an epsilon-NFA fragment.
class RegexParser {
public:
    RegexParser(std::string_view expr, const Alphabet& alphabet) : s_(expr), nfa_(alphabet) {}

    Pdfa parse()
    {
        auto [start, end] = parse_union();
        skip_ws();
        if (pos_ != s_.size()) {
            error("unexpected '" + std::string(1, s_[pos_]) + "'");
        }
        nfa_.initial.push_back(start);
        nfa_.final[end] = 1;
        return minimize(detail::determinize(nfa_));
    }

private:
    using Frag = std::pair<int, int>;

    [[noreturn]] void error(const std::string& why) const
    {
        throw InputError("regex '" + std::string(s_) + "' at position " + std::to_string(pos_) + ": " + why);
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && s_[pos_] == ' ') {
            ++pos_;
        }
    }

    Frag parse_union()
    {
        Frag f = parse_concat();
        skip_ws();
        while (pos_ < s_.size() && s_[pos_] == '+') {
            ++pos_;
            Frag g = parse_concat();
            int s = nfa_.add_state(), e = nfa_.add_state();
            nfa_.add_eps(s, f.first);
            nfa_.add_eps(s, g.first);
            nfa_.add_eps(f.second, e);
            nfa_.add_eps(g.second, e);
            f = {s, e};
            skip_ws();
        }
        return f;
    }

    Frag parse_concat()
    {
        int s = nfa_.add_state();
        Frag f{s, s};
        while (true) {
            skip_ws();
            if (pos_ >= s_.size() || s_[pos_] == '+' || s_[pos_] == ')') {
                return f;
            }
            Frag g = parse_postfix();
            nfa_.add_eps(f.second, g.first);
            f.second = g.second;
        }
    }

    Frag parse_postfix()
    {
        Frag f = parse_atom();
        while (pos_ < s_.size()) {
            if (s_[pos_] == '*') {
                ++pos_;
                int s = nfa_.add_state(), e = nfa_.add_state();
                nfa_.add_eps(s, f.first);
                nfa_.add_eps(s, e);
                nfa_.add_eps(f.second, f.first);
                nfa_.add_eps(f.second, e);
                f = {s, e};
            } else if (s_[pos_] == '^' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '+') {
                pos_ += 2;
                int e = nfa_.add_state();
                nfa_.add_eps(f.second, f.first);
                nfa_.add_eps(f.second, e);
                f = {f.first, e};
            } else {
                break;
            }
        }
        return f;
    }

    Frag parse_atom()
    {
        skip_ws();
        if (pos_ >= s_.size()) {
            error("unexpected end");
        }
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Frag f = parse_union();
            skip_ws();
            if (pos_ >= s_.size() || s_[pos_] != ')') {
                error("missing ')'");
            }
            ++pos_;
            return f;
        }
        if (c == '0') {
            ++pos_;
            return {nfa_.add_state(), nfa_.add_state()};
        }
        int x = nfa_.alphabet.index_of(std::string_view(&s_[pos_], 1));
        if (x < 0) {
            error("letter '" + std::string(1, c) + "' not in alphabet");
        }
        ++pos_;
        int s = nfa_.add_state(), e = nfa_.add_state();
        nfa_.add(s, x, e);
        return {s, e};
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    detail::Nfa nfa_;
};

}  // namespace

Pdfa from_regex(std::string_view expr, const Alphabet& alphabet)
{
    if (!alphabet.single_char_tokens()) {
        throw InputError("from_regex requires single-character letters");
    }
    return RegexParser(expr, alphabet).parse();
}

}  // namespace csync
