#include "csync/census.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "json.hpp"

#include "csync/errors.hpp"
#include "csync/text_format.hpp"

namespace csync {

std::size_t transition_pattern_count(int n, int k)
{
    std::size_t c = 1;
    for (int i = 0; i < n * k; ++i) {
        c *= static_cast<std::size_t>(n + 1);
    }
    return c;
}

namespace {

std::vector<int> table_of(const Pdfa& b)
{
    std::vector<int> t;
    for (int p = 1; p <= b.states(); ++p) {
        for (int x = 0; x < b.alphabet().size(); ++x) {
            t.push_back(b.next(p, x));
        }
    }
    return t;
}

// Least transition table over all letter permutations.
bool is_letter_canonical(const Pdfa& b)
{
    const int k = b.alphabet().size();
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    const auto mine = table_of(b);
    while (std::next_permutation(perm.begin(), perm.end())) {
        if (table_of(relabel(b, perm)) < mine) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::vector<Pdfa> enumerate_pdfas(int n, int k, const EnumerateOptions& opts)
{
    if (n < 1 || k < 1 || n > 3 || k > 3) {
        throw ResourceError("enumerate_pdfas: census limited to n ≤ 3 states and k ≤ 3 letters");
    }
    const Alphabet sigma = Alphabet::standard(k);
    const std::size_t patterns = transition_pattern_count(n, k);
    std::vector<Pdfa> out;
    std::vector<int> digits(static_cast<std::size_t>(n * k), 0);
    for (std::size_t code = 0; code < patterns; ++code) {
        std::size_t rest = code;
        for (int i = n * k - 1; i >= 0; --i) {
            digits[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(n + 1));
            rest /= static_cast<std::size_t>(n + 1);
        }
        Pdfa base(sigma, n);
        for (int p = 1; p <= n; ++p) {
            for (int x = 0; x < k; ++x) {
                if (int q = digits[static_cast<std::size_t>((p - 1) * k + x)]; q != 0) {
                    base.set_transition(p, x, q);
                }
            }
        }
        if (opts.quotient_letter_perm && !is_letter_canonical(base)) {
            continue;
        }
        if (opts.normalize_final) {
            base.set_final(n);
            out.push_back(base);
            continue;
        }
        for (int mask = 0; mask < (1 << n); ++mask) {
            Pdfa b = base;
            for (int p = 1; p <= n; ++p) {
                b.set_final(p, (mask >> (p - 1)) & 1);
            }
            out.push_back(b);
        }
    }
    return out;
}

std::string census_encoding(const Pdfa& b)
{
    std::string s;
    for (int v : table_of(b)) {
        s += static_cast<char>('0' + v);
    }
    s += "/F";
    for (int f : b.finals()) {
        s += static_cast<char>('0' + f);
    }
    return s;
}

std::string certificate_digest(const Certificate& c)
{
    std::string s = certificate_kind(c);
    std::visit(
        [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, UnionCert>) {
                s += "(";
                for (std::size_t i = 0; i < body.parts.size(); ++i) {
                    s += (i ? "," : "") + certificate_digest(*body.parts[i].certificate);
                }
                s += ")";
            } else if constexpr (std::is_same_v<T, HomCert> || std::is_same_v<T, FactorEqCert> ||
                                 std::is_same_v<T, IdealRestrictionCert> || std::is_same_v<T, AddPrefixLoopsCert>) {
                s += "(" + certificate_digest(*body.inner) + ")";
            } else if constexpr (std::is_same_v<T, KnownLanguageCert>) {
                s += ":" + body.id;
            }
        },
        c.body);
    return s;
}

namespace {

std::string class_of(const Verdict& v)
{
    return v.resolved() ? v.summary() : "unresolved";
}

std::string verdict_digest(const Verdict& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.certificates.size(); ++i) {
        s += (i ? " + " : "") + certificate_digest(v.certificates[i]);
    }
    return s;
}

}  // namespace

CensusReport run_census(int n, int k, const CensusConfig& cfg)
{
    CensusReport r;
    r.states = n;
    r.alphabet = k;
    r.options = cfg.enumerate;
    std::vector<Pdfa> all = enumerate_pdfas(n, k, cfg.enumerate);
    r.total = all.size();

    // Classification depends only on the language; classify each distinct
    // language once.
    std::vector<std::string> keys(all.size());
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<std::size_t> distinct;
    for (std::size_t i = 0; i < all.size(); ++i) {
        keys[i] = canonical_key(all[i]);
        if (slot.emplace(keys[i], distinct.size()).second) {
            distinct.push_back(i);
        }
    }
    std::vector<Verdict> verdicts(distinct.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j; (j = next++) < distinct.size();) {
            verdicts[j] = classify(all[distinct[j]], cfg.classify);
        }
    };
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    for (const char* c : {"P", "NP-complete", "PSPACE-complete", "unresolved"}) {
        r.counts[c] = 0;
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
        const Verdict& v = verdicts[slot.at(keys[i])];
        CensusRecord rec{census_encoding(all[i]), all[i], v.summary(), v.lower, v.upper, verdict_digest(v),
                         sccs(trim(all[i])).count()};
        MetaCheck m = three_state_meta_check(all[i], v);
        if (m.applicable && !m.consistent) {
            r.violations.push_back(rec.encoding + ": " + m.message);
            throw EngineError("census consistency violation (" + m.message + ") on\n" + to_text(all[i]));
        }
        ++r.counts[class_of(v)];
        if (!v.resolved()) {
            r.unresolved.push_back(rec);
        }
        r.records.push_back(std::move(rec));
    }
    auto by_encoding = [](const CensusRecord& a, const CensusRecord& b) { return a.encoding < b.encoding; };
    std::sort(r.records.begin(), r.records.end(), by_encoding);
    std::sort(r.unresolved.begin(), r.unresolved.end(), by_encoding);
    return r;
}

std::string census_summary(const CensusReport& r)
{
    std::ostringstream out;
    out << "census: " << r.states << " states, " << r.alphabet << " letters";
    if (r.options.normalize_final) {
        out << ", final set {" << r.states << "}";
    }
    if (r.options.quotient_letter_perm) {
        out << ", up to letter renaming";
    }
    out << "\nautomata: " << r.total << '\n';
    for (const char* c : {"P", "NP-complete", "PSPACE-complete", "unresolved"}) {
        out << "  " << c << ": " << r.counts.at(c) << '\n';
    }
    out << "consistency violations: " << r.violations.size() << '\n';
    for (const auto& u : r.unresolved) {
        out << "unresolved " << u.encoding << "  " << u.verdict << "  " << u.digest << '\n';
    }
    return out.str();
}

std::string census_records_jsonl(const CensusReport& r)
{
    std::string out;
    for (const auto& rec : r.records) {
        nlohmann::json j{{"encoding", rec.encoding},
                         {"verdict", rec.verdict},
                         {"lower", to_string(rec.lower)},
                         {"upper", to_string(rec.upper)},
                         {"sccs", rec.scc_count},
                         {"certificates", rec.digest}};
        out += j.dump() + "\n";
    }
    return out;
}

}  // namespace csync
