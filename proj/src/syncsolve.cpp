#include "csync/syncsolve.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_map>

#include "csync/errors.hpp"

namespace csync {

namespace {

std::vector<int> all_states(int n)
{
    std::vector<int> s(static_cast<std::size_t>(n));
    std::iota(s.begin(), s.end(), 1);
    return s;
}

void require_same_alphabet(const Dcsa& a, const Pdfa& b)
{
    if (a.alphabet() != b.alphabet()) {
        throw InputError("input automaton and constraint use different alphabets");
    }
}

// Shortest word merging states p and q, by BFS on unordered pairs.
std::optional<Word> merge_pair(const Dcsa& a, int p, int q, std::size_t& explored)
{
    const int n = a.states();
    const int k = a.alphabet().size();
    auto key = [n](int x, int y) { return x < y ? (x - 1) * n + (y - 1) : (y - 1) * n + (x - 1); };
    std::vector<int> parent(static_cast<std::size_t>(n) * n, -2), via(static_cast<std::size_t>(n) * n, -1);
    std::deque<std::pair<int, int>> queue{{p, q}};
    parent[key(p, q)] = -1;
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        ++explored;
        for (int c = 0; c < k; ++c) {
            int x2 = a.next(x, c), y2 = a.next(y, c);
            if (x2 == y2) {
                Word w{c};
                for (int cur = key(x, y); parent[cur] != -1; cur = parent[cur]) {
                    w.push_back(via[cur]);
                }
                std::reverse(w.begin(), w.end());
                return w;
            }
            int id = key(x2, y2);
            if (parent[id] == -2) {
                parent[id] = key(x, y);
                via[id] = c;
                queue.emplace_back(x2, y2);
            }
        }
    }
    return std::nullopt;
}

}  // namespace

SyncResult find_sync_word(const Dcsa& a)
{
    SyncResult r;
    std::vector<int> current = all_states(a.states());
    Word w;
    while (current.size() > 1) {
        auto merge = merge_pair(a, current[0], current[1], r.explored);
        if (!merge) {
            return r;
        }
        w.insert(w.end(), merge->begin(), merge->end());
        current = run_set(a, current, *merge);
    }
    r.yes = true;
    r.witness = w;
    return r;
}

SyncResult constrained_sync(const Dcsa& a, const Pdfa& b, const SolverConfig& cfg)
{
    require_same_alphabet(a, b);
    const int n = a.states();
    if (n > cfg.max_input_states || n > 62) {
        throw ResourceError("constrained_sync: input has " + std::to_string(n) +
                            " states, above the subset search cap of " + std::to_string(cfg.max_input_states));
    }
    const int k = a.alphabet().size();
    // Image of a subset bitmask under one letter.
    auto image = [&](std::uint64_t set, int x) {
        std::uint64_t out = 0;
        for (int q = 1; q <= n; ++q) {
            if ((set >> (q - 1)) & 1U) {
                out |= std::uint64_t{1} << (a.next(q, x) - 1);
            }
        }
        return out;
    };
    struct Node {
        std::uint64_t set;
        int p;
        std::size_t parent;
        int via;
    };
    const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    std::vector<Node> nodes{{full, b.initial(), 0, -1}};
    std::unordered_map<std::uint64_t, std::vector<std::pair<int, std::size_t>>> seen;
    auto visit = [&](std::uint64_t set, int p) {
        auto& bucket = seen[set];
        for (auto& [q, id] : bucket) {
            if (q == p) {
                return false;
            }
        }
        bucket.emplace_back(p, nodes.size());
        return true;
    };
    visit(full, b.initial());
    SyncResult r;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node cur = nodes[i];
        ++r.explored;
        if (std::has_single_bit(cur.set) && b.is_final(cur.p)) {
            Word w;
            for (std::size_t j = i; nodes[j].via != -1; j = nodes[j].parent) {
                w.push_back(nodes[j].via);
            }
            std::reverse(w.begin(), w.end());
            r.yes = true;
            r.witness = std::move(w);
            return r;
        }
        for (int x = 0; x < k; ++x) {
            int p2 = b.next(cur.p, x);
            if (p2 == 0) {
                continue;
            }
            std::uint64_t s2 = image(cur.set, x);
            if (visit(s2, p2)) {
                nodes.push_back({s2, p2, i, x});
            }
        }
    }
    return r;
}

SyncResult oracle_enumerate(const Dcsa& a, const Pdfa& b, int max_len)
{
    require_same_alphabet(a, b);
    const int k = a.alphabet().size();
    // Configurations reached by words of the current length, each with the
    // radix-least word reaching it. Ordered by that word so that the scan
    // visits words in radix order.
    using Config = std::pair<std::vector<int>, int>;
    std::vector<std::pair<Word, Config>> level{{Word{}, {all_states(a.states()), b.initial()}}};
    SyncResult r;
    for (int len = 0; len <= max_len; ++len) {
        for (const auto& [w, cfg] : level) {
            ++r.explored;
            if (cfg.first.size() == 1 && b.is_final(cfg.second)) {
                r.yes = true;
                r.witness = w;
                return r;
            }
        }
        if (len == max_len) {
            break;
        }
        std::map<Config, Word> next;
        for (const auto& [w, cfg] : level) {
            for (int x = 0; x < k; ++x) {
                int p2 = b.next(cfg.second, x);
                if (p2 == 0) {
                    continue;
                }
                Word w2 = w;
                w2.push_back(x);
                Config c2{run_set(a, cfg.first, Word{x}), p2};
                auto it = next.find(c2);
                if (it == next.end()) {
                    next.emplace(std::move(c2), std::move(w2));
                } else if (w2 < it->second) {
                    it->second = std::move(w2);
                }
            }
        }
        level.clear();
        for (auto& [c, w] : next) {
            level.emplace_back(w, c);
        }
        std::sort(level.begin(), level.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    }
    return r;
}

SyncResult oracle_brute_force(const Dcsa& a, const Pdfa& b, int max_len)
{
    require_same_alphabet(a, b);
    SyncResult r;
    const auto everything = all_states(a.states());
    for (const Word& w : words_up_to(a.alphabet().size(), max_len)) {
        ++r.explored;
        if (accepts(b, w) && run_set(a, everything, w).size() == 1) {
            r.yes = true;
            r.witness = w;
            return r;
        }
    }
    return r;
}

bool is_synchronizing_word(const Dcsa& a, const Word& w)
{
    return run_set(a, all_states(a.states()), w).size() == 1;
}

bool validate_witness(const Dcsa& a, const Pdfa& b, const Word& w)
{
    return a.alphabet() == b.alphabet() && is_synchronizing_word(a, w) && accepts(b, w);
}

Dcsa cerny_automaton(int n)
{
    if (n < 1) {
        throw InputError("cerny_automaton: n must be positive");
    }
    // Letter a: cyclic shift q -> q+1 (mod n); letter b: merges n into 1.
    Dcsa a(Alphabet::standard(2), n);
    for (int q = 1; q <= n; ++q) {
        a.set_transition(q, 0, q % n + 1);
        a.set_transition(q, 1, q == n ? 1 : q);
    }
    return a;
}

}  // namespace csync
