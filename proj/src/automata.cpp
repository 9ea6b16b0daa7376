#include "csync/automata.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "csync/errors.hpp"
#include "nfa.hpp"

namespace csync {

namespace {

std::atomic<std::size_t> g_subset_cap{1'000'000};

void require_same_alphabet(const Pdfa& x, const Pdfa& y, const char* op)
{
    if (x.alphabet() != y.alphabet()) {
        throw InputError(std::string(op) + ": alphabet mismatch");
    }
}

}  // namespace

// --- Alphabet, LetterSet -------------------------------------------------

Alphabet::Alphabet(std::vector<std::string> letters) : letters_(std::move(letters))
{
    if (letters_.empty()) {
        throw InputError("alphabet must not be empty");
    }
    if (letters_.size() > 32) {
        throw InputError("alphabet larger than 32 letters");
    }
    std::set<std::string> seen;
    for (const auto& l : letters_) {
        if (l.empty()) {
            throw InputError("empty letter token");
        }
        if (l.find_first_of(" \t\r\n#|") != std::string::npos) {
            throw InputError("letter token '" + l + "' contains a reserved character");
        }
        if (!seen.insert(l).second) {
            throw InputError("duplicate letter '" + l + "'");
        }
    }
}

Alphabet Alphabet::standard(int size)
{
    if (size < 1 || size > 26) {
        throw InputError("standard alphabet size must be in 1..26");
    }
    std::vector<std::string> letters;
    for (int i = 0; i < size; ++i) {
        letters.emplace_back(1, static_cast<char>('a' + i));
    }
    return Alphabet(std::move(letters));
}

int Alphabet::index_of(std::string_view token) const
{
    for (int i = 0; i < size(); ++i) {
        if (letters_[i] == token) {
            return i;
        }
    }
    return -1;
}

bool Alphabet::single_char_tokens() const
{
    return std::all_of(letters_.begin(), letters_.end(), [](const std::string& s) { return s.size() == 1; });
}

LetterSet LetterSet::of(std::initializer_list<int> letters)
{
    LetterSet s;
    for (int x : letters) {
        s.insert(x);
    }
    return s;
}

LetterSet LetterSet::full(int alphabet_size)
{
    return LetterSet(alphabet_size >= 32 ? 0xFFFFFFFFU : ((1U << alphabet_size) - 1U));
}

int LetterSet::size() const
{
    return __builtin_popcount(bits_);
}

std::vector<int> LetterSet::elements() const
{
    std::vector<int> out;
    for (int x = 0; x < 32; ++x) {
        if (contains(x)) {
            out.push_back(x);
        }
    }
    return out;
}

// --- Pdfa, Dcsa ------------------------------------------------------------

Pdfa::Pdfa(Alphabet alphabet, int states)
    : alphabet_(std::move(alphabet)), states_(states),
      delta_(static_cast<std::size_t>(states) * static_cast<std::size_t>(alphabet_.size()), 0),
      finals_(static_cast<std::size_t>(states), 0)
{
    if (states < 1) {
        throw InputError("automaton needs at least one state");
    }
}

std::vector<int> Pdfa::finals() const
{
    std::vector<int> out;
    for (int p = 1; p <= states_; ++p) {
        if (is_final(p)) {
            out.push_back(p);
        }
    }
    return out;
}

void Pdfa::set_transition(int p, int x, int q)
{
    if (p < 1 || p > states_ || q < 0 || q > states_ || x < 0 || x >= alphabet_.size()) {
        throw InputError("transition out of range");
    }
    delta_[index(p, x)] = q;
}

void Pdfa::set_initial(int p)
{
    if (p < 1 || p > states_) {
        throw InputError("initial state out of range");
    }
    initial_ = p;
}

void Pdfa::set_final(int p, bool value)
{
    if (p < 1 || p > states_) {
        throw InputError("final state out of range");
    }
    finals_[p - 1] = value ? 1 : 0;
}

void Pdfa::clear_finals()
{
    std::fill(finals_.begin(), finals_.end(), 0);
}

bool Pdfa::is_complete() const
{
    return std::all_of(delta_.begin(), delta_.end(), [](int q) { return q != 0; });
}

std::size_t Pdfa::transition_count() const
{
    return static_cast<std::size_t>(std::count_if(delta_.begin(), delta_.end(), [](int q) { return q != 0; }));
}

Dcsa::Dcsa(Alphabet alphabet, int states)
    : alphabet_(std::move(alphabet)), states_(states),
      delta_(static_cast<std::size_t>(states) * static_cast<std::size_t>(alphabet_.size()))
{
    if (states < 1) {
        throw InputError("automaton needs at least one state");
    }
    for (int q = 1; q <= states; ++q) {
        for (int x = 0; x < alphabet_.size(); ++x) {
            delta_[static_cast<std::size_t>(q - 1) * alphabet_.size() + x] = q;
        }
    }
}

void Dcsa::set_transition(int q, int x, int target)
{
    if (q < 1 || q > states_ || target < 1 || target > states_ || x < 0 || x >= alphabet_.size()) {
        throw InputError("transition out of range");
    }
    delta_[static_cast<std::size_t>(q - 1) * alphabet_.size() + x] = target;
}

Dcsa Dcsa::from_complete(const Pdfa& b)
{
    Dcsa a(b.alphabet(), b.states());
    for (int q = 1; q <= b.states(); ++q) {
        for (int x = 0; x < b.alphabet().size(); ++x) {
            int t = b.next(q, x);
            if (t == 0) {
                throw InputError("semi-automaton is not complete: no transition for state " +
                                 std::to_string(q) + " on letter '" + b.alphabet()[x] + "'");
            }
            a.set_transition(q, x, t);
        }
    }
    return a;
}

Homomorphism Homomorphism::identity(const Alphabet& alphabet)
{
    Homomorphism h{alphabet, alphabet, {}};
    for (int x = 0; x < alphabet.size(); ++x) {
        h.image.push_back(Word{x});
    }
    return h;
}

Word Homomorphism::apply(const Word& w) const
{
    Word out;
    for (int x : w) {
        out.insert(out.end(), image.at(x).begin(), image.at(x).end());
    }
    return out;
}

std::size_t subset_state_cap()
{
    return g_subset_cap.load();
}

void set_subset_state_cap(std::size_t cap)
{
    g_subset_cap.store(cap);
}

// --- internal NFA ----------------------------------------------------------

namespace detail {

int Nfa::embed(const Pdfa& b)
{
    int offset = states;
    for (int p = 1; p <= b.states(); ++p) {
        add_state();
    }
    for (int p = 1; p <= b.states(); ++p) {
        for (int x = 0; x < b.alphabet().size(); ++x) {
            int q = b.next(p, x);
            if (q != 0) {
                add(offset + p - 1, x, offset + q - 1);
            }
        }
        final[offset + p - 1] = b.is_final(p) ? 1 : 0;
    }
    return offset;
}

namespace {

void close_eps(const Nfa& n, std::vector<int>& set)
{
    std::vector<char> in(static_cast<std::size_t>(n.states), 0);
    for (int s : set) {
        in[s] = 1;
    }
    std::vector<int> stack = set;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        for (int t : n.eps[s]) {
            if (!in[t]) {
                in[t] = 1;
                set.push_back(t);
                stack.push_back(t);
            }
        }
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
}

}  // namespace

Pdfa determinize(const Nfa& n)
{
    const int k = n.alphabet.size();
    std::vector<int> start = n.initial;
    close_eps(n, start);
    if (start.empty()) {
        return empty_pdfa(n.alphabet);
    }
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> subsets;
    std::vector<std::vector<int>> delta;
    ids.emplace(start, 0);
    subsets.push_back(start);
    const std::size_t cap = subset_state_cap();
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        std::vector<int> row(static_cast<std::size_t>(k), 0);
        for (int x = 0; x < k; ++x) {
            std::vector<int> target;
            for (int s : subsets[i]) {
                const auto& nx = n.next[static_cast<std::size_t>(s) * k + x];
                target.insert(target.end(), nx.begin(), nx.end());
            }
            if (target.empty()) {
                continue;
            }
            close_eps(n, target);
            auto it = ids.find(target);
            if (it == ids.end()) {
                if (subsets.size() >= cap) {
                    throw ResourceError("subset construction exceeded the state cap of " + std::to_string(cap));
                }
                it = ids.emplace(target, static_cast<int>(subsets.size())).first;
                subsets.push_back(target);
            }
            row[x] = it->second + 1;
        }
        delta.push_back(std::move(row));
    }
    Pdfa out(n.alphabet, static_cast<int>(subsets.size()));
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        for (int x = 0; x < k; ++x) {
            if (delta[i][x] != 0) {
                out.set_transition(static_cast<int>(i) + 1, x, delta[i][x]);
            }
        }
        bool fin = std::any_of(subsets[i].begin(), subsets[i].end(), [&](int s) { return n.final[s] != 0; });
        out.set_final(static_cast<int>(i) + 1, fin);
    }
    return out;
}

}  // namespace detail

// --- running ---------------------------------------------------------------

std::optional<int> run(const Pdfa& b, int from, const Word& w)
{
    int p = from;
    for (int x : w) {
        p = b.next(p, x);
        if (p == 0) {
            return std::nullopt;
        }
    }
    return p;
}

int run(const Dcsa& a, int from, const Word& w)
{
    int q = from;
    for (int x : w) {
        q = a.next(q, x);
    }
    return q;
}

std::vector<int> run_set(const Dcsa& a, const std::vector<int>& states, const Word& w)
{
    std::vector<int> out;
    out.reserve(states.size());
    for (int q : states) {
        out.push_back(run(a, q, w));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool accepts(const Pdfa& b, const Word& w)
{
    auto p = run(b, b.initial(), w);
    return p && b.is_final(*p);
}

LetterSet sigma_ij(const Pdfa& b, int i, int j)
{
    LetterSet s;
    for (int x = 0; x < b.alphabet().size(); ++x) {
        if (b.next(i, x) == j) {
            s.insert(x);
        }
    }
    return s;
}

// --- structure -------------------------------------------------------------

Pdfa empty_pdfa(const Alphabet& alphabet)
{
    return Pdfa(alphabet, 1);
}

Pdfa universal_pdfa(const Alphabet& alphabet)
{
    Pdfa b(alphabet, 1);
    for (int x = 0; x < alphabet.size(); ++x) {
        b.set_transition(1, x, 1);
    }
    b.set_final(1);
    return b;
}

std::vector<bool> accessible_states(const Pdfa& b)
{
    std::vector<bool> seen(static_cast<std::size_t>(b.states()) + 1, false);
    std::vector<int> stack{b.initial()};
    seen[b.initial()] = true;
    while (!stack.empty()) {
        int p = stack.back();
        stack.pop_back();
        for (int x = 0; x < b.alphabet().size(); ++x) {
            int q = b.next(p, x);
            if (q != 0 && !seen[q]) {
                seen[q] = true;
                stack.push_back(q);
            }
        }
    }
    return seen;
}

std::vector<bool> coaccessible_states(const Pdfa& b)
{
    const int n = b.states();
    std::vector<std::vector<int>> pred(static_cast<std::size_t>(n) + 1);
    for (int p = 1; p <= n; ++p) {
        for (int x = 0; x < b.alphabet().size(); ++x) {
            int q = b.next(p, x);
            if (q != 0) {
                pred[q].push_back(p);
            }
        }
    }
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    std::vector<int> stack;
    for (int p = 1; p <= n; ++p) {
        if (b.is_final(p)) {
            seen[p] = true;
            stack.push_back(p);
        }
    }
    while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        for (int p : pred[q]) {
            if (!seen[p]) {
                seen[p] = true;
                stack.push_back(p);
            }
        }
    }
    return seen;
}

Pdfa trim(const Pdfa& b)
{
    auto acc = accessible_states(b);
    auto co = coaccessible_states(b);
    std::vector<int> rename(static_cast<std::size_t>(b.states()) + 1, 0);
    int kept = 0;
    // The initial state keeps number 1 so that renumbering is stable.
    if (acc[b.initial()] && co[b.initial()]) {
        rename[b.initial()] = ++kept;
    }
    for (int p = 1; p <= b.states(); ++p) {
        if (p != b.initial() && acc[p] && co[p]) {
            rename[p] = ++kept;
        }
    }
    if (kept == 0) {
        return empty_pdfa(b.alphabet());
    }
    Pdfa out(b.alphabet(), kept);
    for (int p = 1; p <= b.states(); ++p) {
        if (rename[p] == 0) {
            continue;
        }
        for (int x = 0; x < b.alphabet().size(); ++x) {
            int q = b.next(p, x);
            if (q != 0 && rename[q] != 0) {
                out.set_transition(rename[p], x, rename[q]);
            }
        }
        out.set_final(rename[p], b.is_final(p));
    }
    out.set_initial(1);
    return out;
}

bool is_trim(const Pdfa& b)
{
    auto acc = accessible_states(b);
    auto co = coaccessible_states(b);
    for (int p = 1; p <= b.states(); ++p) {
        if (!acc[p] || !co[p]) {
            return false;
        }
    }
    return true;
}

namespace {

// Iterative Tarjan over an adjacency list with 1-based vertices.
SccDecomposition tarjan(int n, const std::vector<std::vector<int>>& adj)
{
    std::vector<int> index(static_cast<std::size_t>(n) + 1, -1), low(static_cast<std::size_t>(n) + 1, 0);
    std::vector<char> on_stack(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> stack;
    std::vector<int> comp(static_cast<std::size_t>(n) + 1, -1);
    std::vector<std::vector<int>> found;
    int counter = 0;
    struct Frame {
        int v;
        std::size_t edge;
    };
    for (int root = 1; root <= n; ++root) {
        if (index[root] != -1) {
            continue;
        }
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < adj[f.v].size()) {
                int w = adj[f.v][f.edge++];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            int v = f.v;
            call.pop_back();
            if (!call.empty()) {
                low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
            if (low[v] == index[v]) {
                std::vector<int> members;
                int w = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = static_cast<int>(found.size());
                    members.push_back(w);
                } while (w != v);
                std::sort(members.begin(), members.end());
                found.push_back(std::move(members));
            }
        }
    }
    // Tarjan emits components in reverse topological order; renumber so
    // that component ids follow topological order (sources first).
    const int k = static_cast<int>(found.size());
    SccDecomposition d;
    d.members.resize(static_cast<std::size_t>(k));
    d.component.assign(static_cast<std::size_t>(n), 0);
    for (int c = 0; c < k; ++c) {
        d.members[k - 1 - c] = found[c];
    }
    for (int v = 1; v <= n; ++v) {
        d.component[v - 1] = k - 1 - comp[v];
    }
    d.successors.resize(static_cast<std::size_t>(k));
    d.nontrivial.assign(static_cast<std::size_t>(k), false);
    for (int v = 1; v <= n; ++v) {
        int cv = d.component[v - 1];
        for (int w : adj[v]) {
            int cw = d.component[w - 1];
            if (cv == cw) {
                d.nontrivial[cv] = true;
            } else {
                d.successors[cv].push_back(cw);
            }
        }
    }
    for (auto& s : d.successors) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return d;
}

}  // namespace

SccDecomposition sccs(const Pdfa& b)
{
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(b.states()) + 1);
    for (int p = 1; p <= b.states(); ++p) {
        for (int x = 0; x < b.alphabet().size(); ++x) {
            if (int q = b.next(p, x); q != 0) {
                adj[p].push_back(q);
            }
        }
    }
    return tarjan(b.states(), adj);
}

SccDecomposition sccs(const Dcsa& a)
{
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(a.states()) + 1);
    for (int q = 1; q <= a.states(); ++q) {
        for (int x = 0; x < a.alphabet().size(); ++x) {
            adj[q].push_back(a.next(q, x));
        }
    }
    return tarjan(a.states(), adj);
}

bool is_returning(const Pdfa& b)
{
    Pdfa r = with_finals(b, {b.initial()});
    auto co = coaccessible_states(r);
    for (int p = 1; p <= b.states(); ++p) {
        if (!co[p]) {
            return false;
        }
    }
    return true;
}

Pdfa with_initial(const Pdfa& b, int p)
{
    Pdfa out = b;
    out.set_initial(p);
    return out;
}

Pdfa with_finals(const Pdfa& b, const std::vector<int>& finals)
{
    Pdfa out = b;
    out.clear_finals();
    for (int p : finals) {
        out.set_final(p);
    }
    return out;
}

// --- boolean operations ----------------------------------------------------

Pdfa complete(const Pdfa& b)
{
    if (b.is_complete()) {
        return b;
    }
    Pdfa out(b.alphabet(), b.states() + 1);
    const int sink = b.states() + 1;
    for (int p = 1; p <= sink; ++p) {
        for (int x = 0; x < b.alphabet().size(); ++x) {
            int q = p == sink ? 0 : b.next(p, x);
            out.set_transition(p, x, q == 0 ? sink : q);
        }
        if (p != sink) {
            out.set_final(p, b.is_final(p));
        }
    }
    out.set_initial(b.initial());
    return out;
}

Pdfa product(const Pdfa& x, const Pdfa& y, ProductMode mode)
{
    require_same_alphabet(x, y, "product");
    const int k = x.alphabet().size();
    // State 0 stands for the implicit sink of a partial automaton.
    auto accept = [&](int p, int q) {
        bool fx = p != 0 && x.is_final(p);
        bool fy = q != 0 && y.is_final(q);
        switch (mode) {
        case ProductMode::intersection:
            return fx && fy;
        case ProductMode::union_:
            return fx || fy;
        case ProductMode::difference:
            return fx && !fy;
        }
        return false;
    };
    auto live = [&](int p, int q) {
        switch (mode) {
        case ProductMode::intersection:
            return p != 0 && q != 0;
        case ProductMode::union_:
            return p != 0 || q != 0;
        case ProductMode::difference:
            return p != 0;
        }
        return false;
    };
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> pairs{{x.initial(), y.initial()}};
    ids[pairs[0]] = 1;
    std::vector<std::vector<int>> delta;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [p, q] = pairs[i];
        std::vector<int> row(static_cast<std::size_t>(k), 0);
        for (int a = 0; a < k; ++a) {
            int p2 = p == 0 ? 0 : x.next(p, a);
            int q2 = q == 0 ? 0 : y.next(q, a);
            if (!live(p2, q2)) {
                continue;
            }
            auto [it, inserted] = ids.emplace(std::make_pair(p2, q2), static_cast<int>(pairs.size()) + 1);
            if (inserted) {
                pairs.emplace_back(p2, q2);
            }
            row[a] = it->second;
        }
        delta.push_back(std::move(row));
    }
    Pdfa out(x.alphabet(), static_cast<int>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (int a = 0; a < k; ++a) {
            if (delta[i][a] != 0) {
                out.set_transition(static_cast<int>(i) + 1, a, delta[i][a]);
            }
        }
        out.set_final(static_cast<int>(i) + 1, accept(pairs[i].first, pairs[i].second));
    }
    return out;
}

Pdfa complement(const Pdfa& b)
{
    Pdfa c = complete(b);
    for (int p = 1; p <= c.states(); ++p) {
        c.set_final(p, !c.is_final(p));
    }
    return c;
}

bool is_empty(const Pdfa& b)
{
    auto acc = accessible_states(b);
    for (int p = 1; p <= b.states(); ++p) {
        if (acc[p] && b.is_final(p)) {
            return false;
        }
    }
    return true;
}

bool is_finite(const Pdfa& b)
{
    Pdfa t = trim(b);
    if (t.finals().empty()) {
        return true;
    }
    auto d = sccs(t);
    return std::none_of(d.nontrivial.begin(), d.nontrivial.end(), [](bool v) { return v; });
}

bool includes(const Pdfa& x, const Pdfa& y)
{
    return is_empty(product(y, x, ProductMode::difference));
}

bool equivalent(const Pdfa& x, const Pdfa& y)
{
    require_same_alphabet(x, y, "equivalent");
    return includes(x, y) && includes(y, x);
}

Pdfa minimize(const Pdfa& b)
{
    Pdfa t = trim(b);
    const int n = t.states();
    const int k = t.alphabet().size();
    if (t.finals().empty()) {
        return empty_pdfa(t.alphabet());
    }
    // Moore refinement; undefined transitions map to class -1, which is
    // distinct from every live class because the automaton is trim.
    std::vector<int> cls(static_cast<std::size_t>(n) + 1);
    for (int p = 1; p <= n; ++p) {
        cls[p] = t.is_final(p) ? 1 : 0;
    }
    int classes = 0;
    while (true) {
        std::map<std::vector<int>, int> sig;
        std::vector<int> next_cls(static_cast<std::size_t>(n) + 1);
        for (int p = 1; p <= n; ++p) {
            std::vector<int> s{cls[p]};
            for (int x = 0; x < k; ++x) {
                int q = t.next(p, x);
                s.push_back(q == 0 ? -1 : cls[q]);
            }
            auto it = sig.emplace(std::move(s), static_cast<int>(sig.size())).first;
            next_cls[p] = it->second;
        }
        int count = static_cast<int>(sig.size());
        cls = std::move(next_cls);
        if (count == classes) {
            break;
        }
        classes = count;
    }
    // Canonical numbering by breadth-first search from the initial class.
    std::vector<int> order(static_cast<std::size_t>(classes), 0);
    std::vector<int> rep(static_cast<std::size_t>(classes), 0);
    for (int p = 1; p <= n; ++p) {
        if (rep[cls[p]] == 0) {
            rep[cls[p]] = p;
        }
    }
    std::deque<int> queue{cls[t.initial()]};
    int next_id = 1;
    order[cls[t.initial()]] = next_id++;
    std::vector<int> by_id{cls[t.initial()]};
    while (!queue.empty()) {
        int c = queue.front();
        queue.pop_front();
        for (int x = 0; x < k; ++x) {
            int q = t.next(rep[c], x);
            if (q != 0 && order[cls[q]] == 0) {
                order[cls[q]] = next_id++;
                by_id.push_back(cls[q]);
                queue.push_back(cls[q]);
            }
        }
    }
    Pdfa out(t.alphabet(), classes);
    for (int c = 0; c < classes; ++c) {
        int id = order[c];
        for (int x = 0; x < k; ++x) {
            int q = t.next(rep[c], x);
            if (q != 0) {
                out.set_transition(id, x, order[cls[q]]);
            }
        }
        out.set_final(id, t.is_final(rep[c]));
    }
    out.set_initial(1);
    return out;
}

std::string canonical_key(const Pdfa& b)
{
    Pdfa m = minimize(b);
    std::string key;
    key.reserve(static_cast<std::size_t>(m.states()) * (static_cast<std::size_t>(m.alphabet().size()) + 1) * 2 + 8);
    key += std::to_string(m.alphabet().size());
    key += ':';
    key += std::to_string(m.states());
    key += ':';
    for (int p = 1; p <= m.states(); ++p) {
        key += m.is_final(p) ? 'F' : 'N';
        for (int x = 0; x < m.alphabet().size(); ++x) {
            key += std::to_string(m.next(p, x));
            key += ',';
        }
    }
    return key;
}

std::optional<Word> shortest_word(const Pdfa& b)
{
    const int n = b.states();
    std::vector<int> parent(static_cast<std::size_t>(n) + 1, -1), via(static_cast<std::size_t>(n) + 1, -1);
    std::deque<int> queue{b.initial()};
    parent[b.initial()] = 0;
    while (!queue.empty()) {
        int p = queue.front();
        queue.pop_front();
        if (b.is_final(p)) {
            Word w;
            for (int s = p; s != b.initial(); s = parent[s]) {
                w.push_back(via[s]);
            }
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (int x = 0; x < b.alphabet().size(); ++x) {
            int q = b.next(p, x);
            if (q != 0 && parent[q] == -1) {
                parent[q] = p;
                via[q] = x;
                queue.push_back(q);
            }
        }
    }
    return std::nullopt;
}

// --- derived languages -----------------------------------------------------

Pdfa pref_automaton(const Pdfa& b)
{
    Pdfa t = trim(b);
    if (t.finals().empty()) {
        return t;
    }
    for (int p = 1; p <= t.states(); ++p) {
        t.set_final(p);
    }
    return t;
}

Pdfa suff_automaton(const Pdfa& b)
{
    Pdfa t = trim(b);
    if (t.finals().empty()) {
        return t;
    }
    detail::Nfa n(t.alphabet());
    int off = n.embed(t);
    for (int p = 1; p <= t.states(); ++p) {
        n.initial.push_back(off + p - 1);
    }
    return minimize(detail::determinize(n));
}

Pdfa fact_automaton(const Pdfa& b)
{
    return suff_automaton(pref_automaton(b));
}

Pdfa ideal_automaton(const Word& u, const Alphabet& alphabet)
{
    if (u.empty()) {
        throw InputError("ideal_automaton: u must be non-empty");
    }
    const int m = static_cast<int>(u.size());
    const int k = alphabet.size();
    // KMP failure function; state i (0..m) means "longest suffix of the
    // input that is a prefix of u has length i".
    std::vector<int> fail(static_cast<std::size_t>(m) + 1, 0);
    for (int i = 1, j = 0; i < m; ++i) {
        while (j > 0 && u[i] != u[j]) {
            j = fail[j];
        }
        if (u[i] == u[j]) {
            ++j;
        }
        fail[i + 1] = j;
    }
    Pdfa out(alphabet, m + 1);
    for (int i = 0; i <= m; ++i) {
        for (int x = 0; x < k; ++x) {
            int t = 0;
            if (i == m) {
                t = m;
            } else {
                int j = i;
                while (j > 0 && u[j] != x) {
                    j = fail[j];
                }
                t = u[j] == x ? j + 1 : 0;
            }
            out.set_transition(i + 1, x, t + 1);
        }
    }
    out.set_final(m + 1);
    for (int x = 0; x < k; ++x) {
        if (out.next(m + 1, x) != m + 1) {
            throw EngineError("ideal automaton final state is not a sink");
        }
    }
    return out;
}

Pdfa left_quotient(const Pdfa& b, const Word& u)
{
    auto p = run(b, b.initial(), u);
    if (!p) {
        return empty_pdfa(b.alphabet());
    }
    return trim(with_initial(b, *p));
}

Pdfa concat(const Pdfa& x, const Pdfa& y)
{
    require_same_alphabet(x, y, "concat");
    detail::Nfa n(x.alphabet());
    int ox = n.embed(x);
    int oy = n.embed(y);
    for (int p = 1; p <= x.states(); ++p) {
        n.final[ox + p - 1] = 0;
        if (x.is_final(p)) {
            n.add_eps(ox + p - 1, oy + y.initial() - 1);
        }
    }
    n.initial.push_back(ox + x.initial() - 1);
    return minimize(detail::determinize(n));
}

Pdfa star(const Pdfa& x)
{
    detail::Nfa n(x.alphabet());
    int start = n.add_state();
    int ox = n.embed(x);
    n.final[start] = 1;
    n.add_eps(start, ox + x.initial() - 1);
    for (int p = 1; p <= x.states(); ++p) {
        if (x.is_final(p)) {
            n.add_eps(ox + p - 1, start);
        }
    }
    n.initial.push_back(start);
    return minimize(detail::determinize(n));
}

Pdfa word_language(const std::vector<Word>& words, const Alphabet& alphabet)
{
    detail::Nfa n(alphabet);
    int root = n.add_state();
    n.initial.push_back(root);
    for (const Word& w : words) {
        int s = root;
        for (int x : w) {
            if (x < 0 || x >= alphabet.size()) {
                throw InputError("word letter out of alphabet range");
            }
            int t = n.add_state();
            n.add(s, x, t);
            s = t;
        }
        n.final[s] = 1;
    }
    return minimize(detail::determinize(n));
}

Pdfa letters_star(LetterSet gamma, const Alphabet& alphabet)
{
    Pdfa b(alphabet, 1);
    for (int x = 0; x < alphabet.size(); ++x) {
        if (gamma.contains(x)) {
            b.set_transition(1, x, 1);
        }
    }
    b.set_final(1);
    return b;
}

Pdfa restrict_to_ideal(const Pdfa& b, const Word& u)
{
    return minimize(product(b, ideal_automaton(u, b.alphabet()), ProductMode::intersection));
}

Pdfa restrict_to_factor_ideal(const Pdfa& b, const Pdfa& factor)
{
    if (!(factor.alphabet() == b.alphabet())) {
        throw InputError("restrict_to_factor_ideal: alphabets differ");
    }
    const Pdfa all = universal_pdfa(b.alphabet());
    const Pdfa ideal = concat(concat(all, factor), all);
    return minimize(product(b, ideal, ProductMode::intersection));
}

Pdfa hom_image(const Pdfa& b, const Homomorphism& phi)
{
    if (phi.source != b.alphabet()) {
        throw InputError("hom_image: homomorphism source alphabet differs from automaton alphabet");
    }
    detail::Nfa n(phi.target);
    int off = 0;
    for (int p = 1; p <= b.states(); ++p) {
        n.add_state();
        n.final[p - 1] = b.is_final(p) ? 1 : 0;
    }
    for (int p = 1; p <= b.states(); ++p) {
        for (int x = 0; x < b.alphabet().size(); ++x) {
            int q = b.next(p, x);
            if (q == 0) {
                continue;
            }
            const Word& img = phi.image.at(x);
            if (img.empty()) {
                n.add_eps(off + p - 1, off + q - 1);
                continue;
            }
            int s = off + p - 1;
            for (std::size_t i = 0; i < img.size(); ++i) {
                int t = i + 1 == img.size() ? off + q - 1 : n.add_state();
                n.add(s, img[i], t);
                s = t;
            }
        }
    }
    n.initial.push_back(off + b.initial() - 1);
    return minimize(detail::determinize(n));
}

Pdfa hom_preimage(const Pdfa& b, const Homomorphism& phi)
{
    if (phi.target != b.alphabet()) {
        throw InputError("hom_preimage: homomorphism target alphabet differs from automaton alphabet");
    }
    Pdfa out(phi.source, b.states());
    for (int p = 1; p <= b.states(); ++p) {
        for (int x = 0; x < phi.source.size(); ++x) {
            if (auto q = run(b, p, phi.image.at(x))) {
                out.set_transition(p, x, *q);
            }
        }
        out.set_final(p, b.is_final(p));
    }
    out.set_initial(b.initial());
    return out;
}

// --- cycles, boundedness ---------------------------------------------------

FirstReturns first_return_words(const Pdfa& b, int p, std::optional<int> max_len)
{
    const int bound = max_len.value_or(b.states());
    auto d = sccs(b);
    const int c = d.component[p - 1];
    auto in_scc = [&](int q) { return q != 0 && d.component[q - 1] == c; };
    // Is there a cycle inside SCC(p) \ {p}?  Recompute components of the
    // induced subgraph without p.
    {
        Pdfa sub(b.alphabet(), b.states());
        for (int q = 1; q <= b.states(); ++q) {
            if (q == p || !in_scc(q)) {
                continue;
            }
            for (int x = 0; x < b.alphabet().size(); ++x) {
                int r = b.next(q, x);
                if (in_scc(r) && r != p) {
                    sub.set_transition(q, x, r);
                }
            }
        }
        auto ds = sccs(sub);
        for (int q = 1; q <= b.states(); ++q) {
            if (q != p && in_scc(q) && ds.nontrivial[ds.component[q - 1]]) {
                return FirstReturns{true, {}};
            }
        }
    }
    FirstReturns out;
    Word path;
    // Depth-first enumeration of paths p -> ... -> p avoiding p inside.
    auto dfs = [&](auto&& self, int q) -> void {
        for (int x = 0; x < b.alphabet().size(); ++x) {
            int r = b.next(q, x);
            if (!in_scc(r)) {
                continue;
            }
            path.push_back(x);
            if (static_cast<int>(path.size()) > bound) {
                throw EngineError("first_return_words: bound exceeded on an acyclic component");
            }
            if (r == p) {
                out.words.push_back(path);
            } else {
                self(self, r);
            }
            path.pop_back();
        }
    };
    dfs(dfs, p);
    std::sort(out.words.begin(), out.words.end(), radix_less);
    if (!is_prefix_free(out.words)) {
        throw EngineError("first_return_words: result is not prefix-free");
    }
    return out;
}

bool is_polycyclic(const Pdfa& b)
{
    Pdfa t = trim(b);
    auto d = sccs(t);
    for (int p = 1; p <= t.states(); ++p) {
        int inside = 0;
        for (int x = 0; x < t.alphabet().size(); ++x) {
            int q = t.next(p, x);
            if (q != 0 && d.component[q - 1] == d.component[p - 1]) {
                ++inside;
            }
        }
        if (inside > 1) {
            return false;
        }
    }
    return true;
}

bool is_bounded(const Pdfa& b)
{
    return is_polycyclic(trim(b));
}

// --- renaming --------------------------------------------------------------

Pdfa relabel(const Pdfa& b, const std::vector<int>& perm)
{
    const int k = b.alphabet().size();
    if (static_cast<int>(perm.size()) != k) {
        throw InputError("relabel: permutation size differs from alphabet size");
    }
    Pdfa out(b.alphabet(), b.states());
    for (int p = 1; p <= b.states(); ++p) {
        for (int x = 0; x < k; ++x) {
            if (int q = b.next(p, x); q != 0) {
                out.set_transition(p, perm[x], q);
            }
        }
        out.set_final(p, b.is_final(p));
    }
    out.set_initial(b.initial());
    return out;
}

namespace {

Pdfa retarget(const Pdfa& b, const Alphabet& alphabet)
{
    Pdfa out(alphabet, b.states());
    for (int p = 1; p <= b.states(); ++p) {
        for (int x = 0; x < alphabet.size(); ++x) {
            if (int q = b.next(p, x); q != 0) {
                out.set_transition(p, x, q);
            }
        }
        out.set_final(p, b.is_final(p));
    }
    out.set_initial(b.initial());
    return out;
}

}  // namespace

std::optional<std::vector<int>> equal_up_to_letter_renaming(const Pdfa& x, const Pdfa& y)
{
    const int k = x.alphabet().size();
    if (k != y.alphabet().size()) {
        return std::nullopt;
    }
    if (k > 5) {
        throw InputError("letter-renaming matcher supports at most 5 letters");
    }
    const std::string target = canonical_key(y);
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (canonical_key(retarget(relabel(x, perm), y.alphabet())) == target) {
            return perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

std::vector<int> inverse_permutation(const std::vector<int>& perm)
{
    std::vector<int> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        inv[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
    }
    return inv;
}

// --- words -----------------------------------------------------------------

std::string format_word(const Alphabet& alphabet, const Word& w)
{
    const bool sep = !alphabet.single_char_tokens();
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (sep && i > 0) {
            out += '|';
        }
        out += alphabet[w[i]];
    }
    return out;
}

Word parse_word(const Alphabet& alphabet, std::string_view text)
{
    Word w;
    auto token = [&](std::string_view t) {
        int x = alphabet.index_of(t);
        if (x < 0) {
            throw InputError("unknown letter '" + std::string(t) + "' in word");
        }
        w.push_back(x);
    };
    if (text.empty() || text == "ε" || text == "-") {
        return w;
    }
    if (text.find('|') != std::string_view::npos || text.find(' ') != std::string_view::npos) {
        std::size_t start = 0;
        for (std::size_t i = 0; i <= text.size(); ++i) {
            if (i == text.size() || text[i] == '|' || text[i] == ' ') {
                if (i > start) {
                    token(text.substr(start, i - start));
                }
                start = i + 1;
            }
        }
        return w;
    }
    if (!alphabet.single_char_tokens()) {
        if (alphabet.index_of(text) >= 0) {
            token(text);
            return w;
        }
        throw InputError("multi-character letters must be separated by '|'");
    }
    for (char c : text) {
        token(std::string_view(&c, 1));
    }
    return w;
}

bool is_prefix_free(const std::vector<Word>& words)
{
    for (std::size_t i = 0; i < words.size(); ++i) {
        for (std::size_t j = 0; j < words.size(); ++j) {
            if (i == j) {
                continue;
            }
            const Word& a = words[i];
            const Word& b = words[j];
            if (a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin())) {
                return false;
            }
        }
    }
    return true;
}

bool radix_less(const Word& x, const Word& y)
{
    if (x.size() != y.size()) {
        return x.size() < y.size();
    }
    return x < y;
}

std::vector<Word> words_up_to(int alphabet_size, int max_len)
{
    std::vector<Word> out{Word{}};
    std::size_t level_start = 0;
    for (int len = 1; len <= max_len; ++len) {
        std::size_t level_end = out.size();
        for (std::size_t i = level_start; i < level_end; ++i) {
            for (int x = 0; x < alphabet_size; ++x) {
                Word w = out[i];
                w.push_back(x);
                out.push_back(std::move(w));
            }
        }
        level_start = level_end;
    }
    return out;
}

}  // namespace csync
