// Command-line front end: sync, constr-sync, classify, gadget, census, oracle.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "csync/census.hpp"
#include "csync/errors.hpp"
#include "csync/gadgets.hpp"
#include "csync/rules.hpp"
#include "csync/syncsolve.hpp"
#include "csync/text_format.hpp"

using namespace csync;

namespace {

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',' || ch == ' ') {
            if (!cur.empty()) {
                out.push_back(cur);
            }
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) {
        out.push_back(cur);
    }
    return out;
}

// "a b" or "a,b"; a bare string of single letters such as "ab" is also accepted.
Alphabet alphabet_arg(const std::string& s)
{
    std::vector<std::string> letters = split_list(s);
    if (letters.size() == 1 && letters[0].size() > 1) {
        std::vector<std::string> chars;
        for (char ch : letters[0]) {
            chars.emplace_back(1, ch);
        }
        letters = chars;
    }
    if (letters.empty()) {
        throw InputError("empty alphabet");
    }
    return Alphabet(letters);
}

LetterSet letters_arg(const Alphabet& sigma, const std::string& s)
{
    LetterSet g;
    for (const auto& t : split_list(s)) {
        if (sigma.single_char_tokens()) {
            for (char ch : t) {
                int x = sigma.index_of(std::string(1, ch));
                if (x < 0) {
                    throw InputError("unknown letter '" + std::string(1, ch) + "' in letter set");
                }
                g.insert(x);
            }
        } else {
            int x = sigma.index_of(t);
            if (x < 0) {
                throw InputError("unknown letter '" + t + "' in letter set");
            }
            g.insert(x);
        }
    }
    return g;
}

std::vector<Word> words_arg(const Alphabet& sigma, const std::string& s)
{
    std::vector<Word> out;
    for (const auto& t : split_list(s)) {
        out.push_back(parse_word(sigma, t));
    }
    return out;
}

// "a:ab,b:b" over the letters named on the left; an empty image is ε.
Homomorphism phi_arg(const Alphabet& target, const std::string& s)
{
    std::vector<std::string> letters;
    std::vector<std::string> images;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos || colon == 0) {
            throw InputError("homomorphism entries must look like x:image");
        }
        letters.push_back(item.substr(0, colon));
        images.push_back(item.substr(colon + 1));
    }
    Alphabet source(letters);
    Homomorphism h{source, target, {}};
    for (const auto& img : images) {
        h.image.push_back(parse_word(target, img));
    }
    return h;
}

std::string word_or_empty(const Alphabet& a, const std::optional<Word>& w)
{
    return w ? format_word(a, *w) : std::string();
}

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write " + path);
    }
    out << text;
}

std::string header_lines(const std::string& provenance, const Pdfa& transformed, const Pdfa& base)
{
    std::ostringstream h;
    h << "gadget: " << provenance << "\n";
    h << "instance constraint:\n";
    std::istringstream t(to_text(transformed));
    for (std::string line; std::getline(t, line);) {
        h << "  " << line << "\n";
    }
    h << "base constraint:\n";
    std::istringstream b(to_text(base));
    for (std::string line; std::getline(b, line);) {
        h << "  " << line << "\n";
    }
    std::string s = h.str();
    s.pop_back();
    return s;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Constrained synchronization of finite automata"};
    app.require_subcommand(1);

    std::string dcsa_file, pdfa_file;
    bool shortest = false;

    auto* sync = app.add_subcommand("sync", "Unconstrained synchronizing word (pair algorithm)");
    sync->add_option("dcsa", dcsa_file, "Input semi-automaton")->required();

    auto* csync_cmd = app.add_subcommand("constr-sync", "Exact constrained synchronization");
    csync_cmd->add_option("--constraint", pdfa_file, "Constraint automaton")->required();
    csync_cmd->add_option("--input", dcsa_file, "Input semi-automaton")->required();
    csync_cmd->add_flag("--shortest", shortest, "Print the shortest witness");

    ClassifyConfig ccfg;
    bool as_json = false;
    bool no_kb = false;
    auto* classify_cmd = app.add_subcommand("classify", "Classify the complexity of a constraint");
    classify_cmd->add_option("--constraint", pdfa_file, "Constraint automaton")->required();
    classify_cmd->add_option("--max-u", ccfg.max_u_len, "Longest word tried for u");
    classify_cmd->add_option("--depth", ccfg.max_depth, "Rule nesting depth");
    classify_cmd->add_flag("--json", as_json, "Structured output");
    classify_cmd->add_flag("--no-kb", no_kb, "Disable the knowledge base");

    std::string kind, out_file, u_arg, c_arg, gamma_arg, x_arg, sigma_arg, phi_arg_s, construction = "literal";
    auto* gadget = app.add_subcommand("gadget", "Build a reduction instance");
    gadget->add_option("kind", kind, "ideal, hom, uc, cstar-u or loops")
        ->required()
        ->check(CLI::IsMember({"ideal", "hom", "uc", "cstar-u", "loops"}));
    gadget->add_option("--input", dcsa_file, "Base semi-automaton")->required();
    gadget->add_option("--constraint", pdfa_file, "Constraint L for ideal, hom and loops");
    gadget->add_option("--u", u_arg, "Word u");
    gadget->add_option("--C", c_arg, "Comma-separated code words");
    gadget->add_option("--gamma", gamma_arg, "Letters of Γ");
    gadget->add_option("--x", x_arg, "Closure letter of C (cstar-u)");
    gadget->add_option("--sigma", sigma_arg, "Target alphabet (uc, cstar-u)");
    gadget->add_option("--phi", phi_arg_s, "Homomorphism, e.g. a:ab,b:b");
    gadget->add_option("--construction", construction, "literal or tracked (uc)")
        ->check(CLI::IsMember({"literal", "tracked"}));
    gadget->add_option("--out", out_file, "Output file (default stdout)");

    int states = 2, letters = 2, jobs = 1;
    bool normalize_final = false, quotient = false;
    auto* census = app.add_subcommand("census", "Classify every small constraint automaton");
    census->add_option("--states", states, "Number of states (≤ 3)");
    census->add_option("--alphabet", letters, "Alphabet size (≤ 3)");
    census->add_option("--jobs", jobs, "Worker threads");
    census->add_flag("--normalize-final", normalize_final, "Only the final set {n}");
    census->add_flag("--quotient", quotient, "Identify automata up to letter renaming");
    census->add_option("--out", out_file, "Records file (JSON lines)");

    int max_len = 12;
    auto* oracle = app.add_subcommand("oracle", "Bounded brute-force decision");
    oracle->add_option("--constraint", pdfa_file, "Constraint automaton")->required();
    oracle->add_option("--input", dcsa_file, "Input semi-automaton")->required();
    oracle->add_option("--max-len", max_len, "Longest word examined");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sync) {
            Dcsa a = load_dcsa(dcsa_file);
            SyncResult r = find_sync_word(a);
            std::cout << (r.yes ? "YES " + word_or_empty(a.alphabet(), r.witness) : "NO") << "\n";
        } else if (*csync_cmd) {
            Dcsa a = load_dcsa(dcsa_file);
            Pdfa b = load_pdfa(pdfa_file);
            SyncResult r = constrained_sync(a, b);
            if (!r.yes) {
                std::cout << "NO\n";
            } else {
                std::cout << (shortest ? "YES " + word_or_empty(a.alphabet(), r.witness) : "YES") << "\n";
            }
        } else if (*classify_cmd) {
            Pdfa b = load_pdfa(pdfa_file);
            ccfg.use_knowledge_base = !no_kb;
            Verdict v = classify(b, ccfg);
            std::cout << (as_json ? verdict_to_json(v, b.alphabet()) : verdict_report(v, b.alphabet()));
        } else if (*gadget) {
            Dcsa a = load_dcsa(dcsa_file);
            GadgetOutput g;
            if (kind == "ideal") {
                Word u = parse_word(a.alphabet(), u_arg);
                g = pdfa_file.empty() ? ideal_product(a, u) : ideal_product(a, u, load_pdfa(pdfa_file));
            } else if (kind == "hom") {
                Homomorphism h = phi_arg(a.alphabet(), phi_arg_s);
                g = pdfa_file.empty() ? hom_preimage_instance(a, h)
                                      : hom_preimage_instance(a, h, load_pdfa(pdfa_file));
            } else if (kind == "loops") {
                LetterSet gamma = letters_arg(a.alphabet(), gamma_arg);
                g = pdfa_file.empty() ? add_loops_gadget(a, gamma) : add_loops_gadget(a, gamma, load_pdfa(pdfa_file));
            } else {
                Alphabet sigma = alphabet_arg(sigma_arg.empty() ? "a b" : sigma_arg);
                LetterSet gamma = letters_arg(sigma, gamma_arg);
                Word u = parse_word(sigma, u_arg);
                std::vector<Word> c = words_arg(sigma, c_arg);
                if (kind == "uc") {
                    g = uc_gadget(a, sigma, gamma, u, c,
                                  construction == "tracked" ? UcConstruction::tracked : UcConstruction::literal);
                } else {
                    g = cstar_u_gadget(a, sigma, gamma, u, c, parse_word(sigma, x_arg));
                }
            }
            write_output(out_file,
                         to_text(g.instance, header_lines(g.provenance, g.transformed_constraint, g.base_constraint)));
        } else if (*census) {
            CensusConfig cfg;
            cfg.enumerate.normalize_final = normalize_final;
            cfg.enumerate.quotient_letter_perm = quotient;
            cfg.jobs = jobs;
            CensusReport r = run_census(states, letters, cfg);
            std::cout << census_summary(r);
            if (!out_file.empty()) {
                write_output(out_file, census_records_jsonl(r));
            }
        } else if (*oracle) {
            Dcsa a = load_dcsa(dcsa_file);
            Pdfa b = load_pdfa(pdfa_file);
            SyncResult r = oracle_enumerate(a, b, max_len);
            std::cout << (r.yes ? "YES " + word_or_empty(a.alphabet(), r.witness) : "NO") << "\n";
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const EngineError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
